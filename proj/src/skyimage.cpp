#include "skycloud/skyimage.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "skycloud/error.hpp"

namespace skycloud {

Plane<bool> roi_mask(const RoiSpec& roi, Eigen::Index height, Eigen::Index width) {
  if (roi.shape == RoiSpec::Shape::FullFrame) return Plane<bool>::Constant(height, width, true);
  if (!(roi.radius > 0.0) || !std::isfinite(roi.cx) || !std::isfinite(roi.cy)) {
    throw Error(ErrorKind::InvalidArgument, "ROI circle needs a finite centre and a positive radius");
  }
  const Eigen::Array<double, 1, Eigen::Dynamic> dx =
      Eigen::Array<double, 1, Eigen::Dynamic>::LinSpaced(width, 0.0, static_cast<double>(width - 1)) - roi.cx;
  const Eigen::Array<double, Eigen::Dynamic, 1> dy =
      Eigen::Array<double, Eigen::Dynamic, 1>::LinSpaced(height, 0.0, static_cast<double>(height - 1)) - roi.cy;
  const Plane<double> dist2 = dy.square().replicate(1, width) + dx.square().replicate(height, 1);
  return dist2 < roi.radius * roi.radius;
}

SkyImage make_sky_image(RgbRaster pixels, const RoiSpec& roi, Timestamp captured_at) {
  if (pixels.width() <= 0 || pixels.height() <= 0) throw Error(ErrorKind::Decode, "image has no pixels");
  SkyImage image{std::move(pixels), {}, captured_at};
  image.roi = roi_mask(roi, image.height(), image.width());
  if (image.roi_count() == 0) {
    throw Error(ErrorKind::EmptyRoi, "ROI contains no pixels of the " + std::to_string(image.width()) + "x" +
                                         std::to_string(image.height()) + " frame");
  }
  return image;
}

SkyImage load_sky_image(const std::filesystem::path& path, const RoiSpec& roi,
                        std::optional<Timestamp> captured_at) {
  if (!captured_at) {
    captured_at = parse_compact_utc(path.stem().string());
    if (!captured_at) {
      throw Error(ErrorKind::Timestamp,
                  "no capture time for '" + path.string() + "' (expected YYYYMMDDHHMMSS file name)");
    }
  }
  return make_sky_image(read_raster(path), roi, *captured_at);
}

Eigen::Index CloudBinaryMap::count(CloudLabel label) const {
  return labels.unaryExpr([label](CloudLabel l) { return l == label; }).count();
}

CloudBinaryMap segment_clouds(const SkyImage& image, double threshold) {
  if (!(threshold > 0.0)) throw Error(ErrorKind::InvalidArgument, "ratio threshold must be > 0");
  const Plane<double> red = image.pixels.red.cast<double>();
  const Plane<double> blue = image.pixels.blue.cast<double>();
  const Plane<bool> defined = image.roi && (blue > 0.0);
  // max(1) only guards the division; those pixels are undefined anyway.
  const Plane<bool> cloudy = (red / blue.max(1.0)) >= threshold;

  CloudBinaryMap map;
  map.labels = defined.select(cloudy.select(Plane<std::uint8_t>::Constant(red.rows(), red.cols(), 2),
                                            Plane<std::uint8_t>::Constant(red.rows(), red.cols(), 1)),
                              Plane<std::uint8_t>::Zero(red.rows(), red.cols()))
                   .unaryExpr([](std::uint8_t v) { return static_cast<CloudLabel>(v); });
  return map;
}

Coverage::Coverage(double percent) : value_(percent) {
  if (!(percent >= 0.0 && percent <= 100.0)) {
    throw Error(ErrorKind::InvalidArgument, "coverage " + std::to_string(percent) + " outside [0,100]");
  }
}

Coverage cloud_coverage(const CloudBinaryMap& map) {
  const auto cloud = map.count(CloudLabel::Cloud);
  const auto sky = map.count(CloudLabel::Sky);
  if (cloud + sky == 0) throw Error(ErrorKind::NoValidSky, "no valid sky pixels");
  return Coverage(100.0 * static_cast<double>(cloud) / static_cast<double>(cloud + sky));
}

std::vector<ManifestEntry> read_camera_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorKind::Io, "cannot open camera manifest '" + manifest.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Format, "camera manifest is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "timestamp_utc,path") {
    throw Error(ErrorKind::Format, "camera manifest header must be 'timestamp_utc,path'");
  }
  const auto base = manifest.parent_path();
  std::vector<ManifestEntry> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::Format, "manifest line " + std::to_string(line_no) + ": missing ','");
    }
    std::filesystem::path p = line.substr(comma + 1);
    if (p.is_relative()) p = base / p;
    entries.push_back({parse_iso_utc(line.substr(0, comma)), std::move(p)});
  }
  return entries;
}

std::vector<ManifestEntry> scan_camera_directory(const std::filesystem::path& dir) {
  std::vector<ManifestEntry> entries;
  std::error_code ec;
  for (const auto& de : std::filesystem::directory_iterator(dir, ec)) {
    if (!de.is_regular_file()) continue;
    std::string ext = de.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") continue;
    if (auto at = parse_compact_utc(de.path().stem().string())) entries.push_back({*at, de.path()});
  }
  if (ec) throw Error(ErrorKind::Io, "cannot list camera directory '" + dir.string() + "': " + ec.message());
  std::sort(entries.begin(), entries.end(), [](const ManifestEntry& a, const ManifestEntry& b) {
    return a.captured_at != b.captured_at ? a.captured_at < b.captured_at : a.path < b.path;
  });
  return entries;
}

void write_camera_manifest(const std::filesystem::path& manifest, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(manifest, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write camera manifest '" + manifest.string() + "'");
  out << "timestamp_utc,path\n";
  for (const auto& e : entries) out << format_iso_utc(e.captured_at) << ',' << e.path.generic_string() << '\n';
}

}  // namespace skycloud
