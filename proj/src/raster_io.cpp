#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "skycloud/error.hpp"
#include "skycloud/raster.hpp"

namespace skycloud {
namespace {

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Decode, "cannot open image '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---- PNG ------------------------------------------------------------------

struct PngSource {
  const unsigned char* data;
  std::size_t size;
  std::size_t offset;
};

void png_read_memory(png_structp png, png_bytep out, png_size_t count) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->offset + count > src->size) png_error(png, "truncated PNG stream");
  std::memcpy(out, src->data + src->offset, count);
  src->offset += count;
}

void png_warning_silent(png_structp, png_const_charp) {}

// Fills `pixels` with packed RGB8. Returns false and sets `message` on failure.
// Only trivially destructible locals live across setjmp.
bool decode_png(const std::vector<unsigned char>& bytes, std::vector<unsigned char>& pixels,
                png_uint_32& width, png_uint_32& height, char* message, std::size_t message_size) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warning_silent);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  PngSource src{bytes.data(), bytes.size(), 0};
  if (setjmp(png_jmpbuf(png))) {
    std::snprintf(message, message_size, "libpng failed to decode stream");
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &src, png_read_memory);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  if (stride != std::size_t{width} * 3) {
    std::snprintf(message, message_size, "unexpected PNG row layout");
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  pixels.resize(stride * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

// ---- JPEG -----------------------------------------------------------------

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_output_silent(j_common_ptr) {}

bool decode_jpeg(const std::vector<unsigned char>& bytes, std::vector<unsigned char>& pixels,
                 unsigned& width, unsigned& height, char* message, std::size_t message_size) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.output_message = jpeg_output_silent;
  if (setjmp(err.jump)) {
    std::snprintf(message, message_size, "libjpeg: %s", err.message);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = cinfo.output_width;
  height = cinfo.output_height;
  const std::size_t stride = std::size_t{width} * 3;
  pixels.resize(stride * height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + std::size_t{cinfo.output_scanline} * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

RgbRaster unpack(const std::vector<unsigned char>& packed, Eigen::Index height, Eigen::Index width) {
  RgbRaster out(height, width);
  for (Eigen::Index r = 0; r < height; ++r) {
    for (Eigen::Index c = 0; c < width; ++c) {
      const unsigned char* px = packed.data() + (r * width + c) * 3;
      out.set(r, c, px[0], px[1], px[2]);
    }
  }
  return out;
}

}  // namespace

RgbRaster read_raster(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = slurp(path);
  if (bytes.empty()) throw Error(ErrorKind::Decode, "image '" + path.string() + "' is empty");

  std::vector<unsigned char> packed;
  char message[256] = "unknown decoder failure";
  static constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0) {
    png_uint_32 w = 0, h = 0;
    if (!decode_png(bytes, packed, w, h, message, sizeof message)) {
      throw Error(ErrorKind::Decode, "cannot decode PNG '" + path.string() + "': " + message);
    }
    if (w == 0 || h == 0) throw Error(ErrorKind::Decode, "PNG '" + path.string() + "' has no pixels");
    return unpack(packed, h, w);
  }
  if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff) {
    unsigned w = 0, h = 0;
    if (!decode_jpeg(bytes, packed, w, h, message, sizeof message)) {
      throw Error(ErrorKind::Decode, "cannot decode JPEG '" + path.string() + "': " + message);
    }
    if (w == 0 || h == 0) throw Error(ErrorKind::Decode, "JPEG '" + path.string() + "' has no pixels");
    return unpack(packed, h, w);
  }
  throw Error(ErrorKind::Decode, "'" + path.string() + "' is neither PNG nor JPEG");
}

namespace {

std::vector<unsigned char> pack(const RgbRaster& raster) {
  std::vector<unsigned char> packed(static_cast<std::size_t>(raster.width() * raster.height() * 3));
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < raster.height(); ++r) {
    for (Eigen::Index c = 0; c < raster.width(); ++c) {
      packed[i++] = raster.red(r, c);
      packed[i++] = raster.green(r, c);
      packed[i++] = raster.blue(r, c);
    }
  }
  return packed;
}

}  // namespace

void write_png(const std::filesystem::path& path, const RgbRaster& raster) {
  const std::vector<unsigned char> packed = pack(raster);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width());
  image.height = static_cast<png_uint_32>(raster.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, packed.data(), 0, nullptr)) {
    const std::string detail = image.message;
    png_image_free(&image);
    throw Error(ErrorKind::Io, "cannot write PNG '" + path.string() + "': " + detail);
  }
}

void write_ppm(const std::filesystem::path& path, const RgbRaster& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << "P6\n" << raster.width() << ' ' << raster.height() << "\n255\n";
  const std::vector<unsigned char> packed = pack(raster);
  out.write(reinterpret_cast<const char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace skycloud
