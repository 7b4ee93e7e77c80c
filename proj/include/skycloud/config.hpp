#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "skycloud/analysis.hpp"
#include "skycloud/geodesy.hpp"
#include "skycloud/maskgrid.hpp"
#include "skycloud/skyimage.hpp"

namespace skycloud {

/// Site of the ground camera used by default.
inline constexpr GeoPoint kDefaultSite{1.3483, 103.6831};

struct PipelineConfig {
  std::filesystem::path camera_manifest;  // CSV manifest, or a directory of YYYYMMDDHHMMSS images
  std::filesystem::path grid_dir;
  GeoPoint site = kDefaultSite;
  RoiSpec roi = RoiSpec::full_frame();
  double threshold = kDefaultRatioThreshold;
  Normalization normalization = Normalization::Linear;
  int k = 3;
  std::chrono::seconds max_delta = kDefaultMaxDelta;
  BinMode bin_mode = BinMode::NearestLevel;
  std::filesystem::path out_dir = "out";
  bool render = false;
  bool svg = false;
};

/// Throws Error(InvalidArgument) on out-of-range fields.
void validate(const PipelineConfig& config);

using KeyValues = std::map<std::string, std::string>;

/// `key = value` lines; blank lines and `#` comments are ignored. Later keys win.
KeyValues parse_key_values(std::istream& in, const std::string& source = "<stream>");
KeyValues read_key_values(const std::filesystem::path& path);

/// ROI from `roi=full` or `roi.cx`/`roi.cy`/`roi.r`. Returns full frame when none are set.
RoiSpec roi_from(const KeyValues& kv);

/// Overlays recognised keys onto `config`; relative paths resolve against `base`.
/// Unknown keys are rejected.
void apply_config(PipelineConfig& config, const KeyValues& kv, const std::filesystem::path& base = {});

void write_config(const std::filesystem::path& path, const PipelineConfig& config);

}  // namespace skycloud
