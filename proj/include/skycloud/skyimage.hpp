#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "skycloud/raster.hpp"
#include "skycloud/timeutil.hpp"

namespace skycloud {

/// Region of the frame that contains sky. Circle pixels are those whose integer
/// (col,row) lies strictly inside the circle centred at (cx,cy).
struct RoiSpec {
  enum class Shape { FullFrame, Circle };

  Shape shape = Shape::FullFrame;
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;

  static RoiSpec full_frame() { return {}; }
  static RoiSpec circle(double cx, double cy, double radius) { return {Shape::Circle, cx, cy, radius}; }
};

/// Boolean mask of size `height x width` for `roi`. May be all-false.
Plane<bool> roi_mask(const RoiSpec& roi, Eigen::Index height, Eigen::Index width);

/// An RGB capture together with its sky region and capture time.
struct SkyImage {
  RgbRaster pixels;
  Plane<bool> roi;
  Timestamp captured_at{};

  Eigen::Index width() const { return pixels.width(); }
  Eigen::Index height() const { return pixels.height(); }
  Eigen::Index roi_count() const { return roi.count(); }
};

/// Builds a SkyImage, rejecting empty rasters and empty ROIs (Error(EmptyRoi)).
SkyImage make_sky_image(RgbRaster pixels, const RoiSpec& roi, Timestamp captured_at);

/// Loads a PNG/JPEG capture. Without an explicit `captured_at` the file stem
/// must be a `YYYYMMDDHHMMSS` UTC stamp.
SkyImage load_sky_image(const std::filesystem::path& path, const RoiSpec& roi,
                        std::optional<Timestamp> captured_at = std::nullopt);

enum class CloudLabel : std::uint8_t { Undefined = 0, Sky = 1, Cloud = 2 };

struct CloudBinaryMap {
  Plane<CloudLabel> labels;

  Eigen::Index width() const { return labels.cols(); }
  Eigen::Index height() const { return labels.rows(); }
  Eigen::Index count(CloudLabel label) const;
};

inline constexpr double kDefaultRatioThreshold = 0.9;

/// Labels ROI pixels by red/blue ratio: cloud iff R/B >= threshold, sky
/// otherwise. Pixels with B == 0 or outside the ROI are undefined.
/// Throws Error(InvalidArgument) when threshold <= 0.
CloudBinaryMap segment_clouds(const SkyImage& image, double threshold = kDefaultRatioThreshold);

/// Cloud percentage of a sky region, always in [0,100].
class Coverage {
 public:
  explicit Coverage(double percent);
  double value() const { return value_; }

 private:
  double value_;
};

/// 100 * cloud / (cloud + sky). Throws Error(NoValidSky) when no pixel is defined.
Coverage cloud_coverage(const CloudBinaryMap& map);

/// One line of a camera manifest (`timestamp_utc,path`). Relative paths are
/// resolved against the manifest's directory.
struct ManifestEntry {
  Timestamp captured_at;
  std::filesystem::path path;
};

std::vector<ManifestEntry> read_camera_manifest(const std::filesystem::path& manifest);

/// Manifest-less ingestion: every `YYYYMMDDHHMMSS.{png,jpg,jpeg}` file in `dir`,
/// ordered by capture time. Other files are ignored.
std::vector<ManifestEntry> scan_camera_directory(const std::filesystem::path& dir);
void write_camera_manifest(const std::filesystem::path& manifest, const std::vector<ManifestEntry>& entries);

}  // namespace skycloud
