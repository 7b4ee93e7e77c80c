#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "skycloud/geodesy.hpp"
#include "skycloud/raster.hpp"
#include "skycloud/timeutil.hpp"

namespace skycloud {

/// Satellite cloud-mask state: one of {0, 64, 128, 192} or invalid (fill).
class MaskCode {
 public:
  static constexpr std::int16_t kInvalid = -1;

  constexpr MaskCode() = default;

  /// Any value outside the four mask levels becomes invalid.
  static constexpr MaskCode from_raw(long raw) {
    MaskCode c;
    if (raw == 0 || raw == 64 || raw == 128 || raw == 192) c.raw_ = static_cast<std::int16_t>(raw);
    return c;
  }
  static constexpr MaskCode invalid() { return MaskCode{}; }
  static constexpr bool is_level(long raw) { return raw == 0 || raw == 64 || raw == 128 || raw == 192; }

  constexpr bool valid() const { return raw_ != kInvalid; }
  constexpr std::int16_t raw() const { return raw_; }

  friend constexpr bool operator==(MaskCode, MaskCode) = default;

 private:
  std::int16_t raw_ = kInvalid;
};

inline constexpr std::array<MaskCode, 4> kMaskLevels = {MaskCode::from_raw(0), MaskCode::from_raw(64),
                                                        MaskCode::from_raw(128), MaskCode::from_raw(192)};

/// How mask codes map onto the 0 (clear) .. 100 (overcast) scale.
enum class Normalization {
  Linear,      // (192 - code) / 192 * 100
  Confidence,  // 100 - clear-sky confidence of the code
};

Normalization parse_normalization(const std::string& name);
std::string to_string(Normalization mode);

/// Percent cloud-free implied by a code: 192->98, 128->92, 64->60, 0->0.
/// Throws Error(InvalidCode) for invalid codes.
double decode_clear_confidence(MaskCode code);

/// Cloudiness percentage in [0,100].
class NormalizedCloudiness {
 public:
  explicit NormalizedCloudiness(double percent);
  double value() const { return value_; }

 private:
  double value_;
};

/// Throws Error(InvalidCode) for invalid codes.
NormalizedCloudiness normalize_code(MaskCode code, Normalization mode = Normalization::Linear);

/// Normalized value of each code level, ordered from clearest (192) to cloudiest (0).
std::array<double, 4> normalized_levels(Normalization mode);

/// Cloud-mask codes with per-pixel geolocation. Immutable once built.
struct CloudMaskGrid {
  Plane<std::int16_t> codes;  // raw code or MaskCode::kInvalid
  Plane<double> lat;
  Plane<double> lon;
  Timestamp observed_at{};

  Eigen::Index rows() const { return codes.rows(); }
  Eigen::Index cols() const { return codes.cols(); }
  MaskCode code(Eigen::Index row, Eigen::Index col) const { return MaskCode::from_raw(codes(row, col)); }
};

/// Validates shape and coordinate ranges. Throws Error(DimensionMismatch | Format).
void validate(const CloudMaskGrid& grid);

struct CmgParseResult {
  CloudMaskGrid grid;
  std::size_t unknown_codes = 0;  // cells mapped to invalid because their code was not a mask level
};

/// Reads the CMG1 text container. Throws Error(Format | DimensionMismatch | Io).
CmgParseResult parse_cmg(std::istream& in, const std::string& source = "<stream>");
CmgParseResult parse_cmg(const std::filesystem::path& path);

/// Writes canonical CMG1: integer codes (-1 for invalid), coordinates with six decimals.
void emit_cmg(std::ostream& out, const CloudMaskGrid& grid);
void write_cmg(const std::filesystem::path& path, const CloudMaskGrid& grid);

struct PixelIndex {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

/// Pixel whose centre has the smallest haversine distance to `site`; ties go to
/// the smaller row, then the smaller column.
PixelIndex nearest_pixel(const CloudMaskGrid& grid, const GeoPoint& site);

struct NeighborhoodAverage {
  PixelIndex center;
  int k = 3;
  int valid_count = 0;
  NormalizedCloudiness mean_cloudiness{0.0};
};

/// Mean normalized cloudiness over the valid, in-bounds cells of the k x k
/// window centred at `center`. Throws Error(NoValidSatelliteData) when none qualify.
NeighborhoodAverage neighborhood_average(const CloudMaskGrid& grid, PixelIndex center, int k = 3,
                                         Normalization mode = Normalization::Linear);

struct Rgb {
  std::uint8_t r, g, b;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

Rgb mask_color(MaskCode code);
inline constexpr Rgb kMarkerColor{0, 255, 0};

/// One pixel per cell; the marker's nearest pixel, if any, is drawn in kMarkerColor.
RgbRaster render_mask(const CloudMaskGrid& grid, std::optional<GeoPoint> marker = std::nullopt);
void render_mask(const CloudMaskGrid& grid, const std::filesystem::path& out,
                 std::optional<GeoPoint> marker = std::nullopt);

}  // namespace skycloud
