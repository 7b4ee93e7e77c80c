#pragma once

#include <cstdint>
#include <filesystem>

#include <Eigen/Core>

namespace skycloud {

/// Row-major 2D plane; `(row, col)` indexing with rows = image height.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 8-bit RGB raster stored as three planes.
struct RgbRaster {
  Plane<std::uint8_t> red;
  Plane<std::uint8_t> green;
  Plane<std::uint8_t> blue;

  RgbRaster() = default;
  RgbRaster(Eigen::Index height, Eigen::Index width)
      : red(Plane<std::uint8_t>::Zero(height, width)),
        green(Plane<std::uint8_t>::Zero(height, width)),
        blue(Plane<std::uint8_t>::Zero(height, width)) {}

  Eigen::Index width() const { return red.cols(); }
  Eigen::Index height() const { return red.rows(); }

  void set(Eigen::Index row, Eigen::Index col, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    red(row, col) = r;
    green(row, col) = g;
    blue(row, col) = b;
  }

  void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    red.setConstant(r);
    green.setConstant(g);
    blue.setConstant(b);
  }
};

/// Decodes a PNG or JPEG file (sniffed by signature). Alpha is dropped, grey is
/// expanded to RGB and 16-bit samples are truncated to their high byte.
/// Throws Error(Decode) on failure.
RgbRaster read_raster(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG. Throws Error(Io).
void write_png(const std::filesystem::path& path, const RgbRaster& raster);

/// Writes a binary PPM (P6, maxval 255). Throws Error(Io).
void write_ppm(const std::filesystem::path& path, const RgbRaster& raster);

}  // namespace skycloud
