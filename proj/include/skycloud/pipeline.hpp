#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "skycloud/analysis.hpp"
#include "skycloud/config.hpp"
#include "skycloud/matching.hpp"

namespace skycloud {

/// Segments every manifest image and returns the camera catalog. Images whose
/// ROI has no defined pixel are skipped with a log line; decode failures throw.
Catalog build_camera_catalog(const std::vector<ManifestEntry>& manifest, const RoiSpec& roi, double threshold,
                             std::ostream& log);

struct SatelliteExtraction {
  Catalog catalog;
  std::vector<Unmatched> failures;  // granules without a usable neighbourhood
};

/// Parses every `*.cmg` file in `grid_dir` (sorted by name) and averages the
/// window around the site. Renders each granule into `render_dir` when given.
SatelliteExtraction extract_satellite(const std::filesystem::path& grid_dir, const GeoPoint& site, int k,
                                      Normalization mode, std::ostream& log,
                                      const std::filesystem::path& render_dir = {});

/// Ingest + match; writes pairs.csv and unmatched.csv into config.out_dir.
MatchResult run_match(const PipelineConfig& config, std::ostream& log);

struct AnalyzeSummary {
  MatchResult match;
  TrendReport report;
};

/// Full pipeline; writes pairs.csv, unmatched.csv, trend.csv, correlation.txt,
/// plus trend.svg and renders/ when enabled.
AnalyzeSummary run_analyze(const PipelineConfig& config, std::ostream& log);

struct SynthOptions {
  std::uint64_t seed = 1;
  int n_granules = 50;
  double noise = 0.0;  // half-width of uniform noise added to the true cloud fraction, percent
  GeoPoint site = kDefaultSite;
  int grid_size = 7;
  int image_size = 64;
  std::filesystem::path out_dir;
};

/// Writes grids/*.cmg, camera/*.png, manifest.csv and config.txt under out_dir.
/// Output depends only on the options.
void run_synth(const SynthOptions& options, std::ostream& log);

}  // namespace skycloud
