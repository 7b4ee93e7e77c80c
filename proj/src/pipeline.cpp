#include "skycloud/pipeline.hpp"

#include <algorithm>
#include <ostream>

#include "skycloud/error.hpp"

namespace skycloud {

Catalog build_camera_catalog(const std::vector<ManifestEntry>& manifest, const RoiSpec& roi, double threshold,
                             std::ostream& log) {
  std::vector<Observation> observations;
  observations.reserve(manifest.size());
  for (const auto& entry : manifest) {
    const SkyImage image = load_sky_image(entry.path, roi, entry.captured_at);
    try {
      const Coverage coverage = cloud_coverage(segment_clouds(image, threshold));
      observations.push_back(Observation::camera(entry.captured_at, coverage.value(), entry.path.generic_string()));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoValidSky) throw;
      log << "warning: skipping " << entry.path.string() << ": " << e.what() << '\n';
    }
  }
  Catalog catalog = build_catalog(std::move(observations));
  if (catalog.duplicates_dropped() > 0) {
    log << "warning: " << catalog.duplicates_dropped() << " duplicate camera timestamps dropped\n";
  }
  return catalog;
}

SatelliteExtraction extract_satellite(const std::filesystem::path& grid_dir, const GeoPoint& site, int k,
                                      Normalization mode, std::ostream& log,
                                      const std::filesystem::path& render_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(grid_dir, ec)) {
    throw Error(ErrorKind::Io, "grid directory '" + grid_dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& de : std::filesystem::directory_iterator(grid_dir)) {
    if (de.is_regular_file() && de.path().extension() == ".cmg") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  if (!render_dir.empty()) std::filesystem::create_directories(render_dir);

  SatelliteExtraction out;
  std::vector<Observation> observations;
  for (const auto& file : files) {
    const CmgParseResult parsed = parse_cmg(file);
    if (parsed.unknown_codes > 0) {
      log << "warning: " << file.string() << ": " << parsed.unknown_codes << " unknown codes treated as invalid\n";
    }
    const CloudMaskGrid& grid = parsed.grid;
    if (!render_dir.empty()) render_mask(grid, render_dir / (file.stem().string() + ".ppm"), site);
    try {
      const NeighborhoodAverage avg = neighborhood_average(grid, nearest_pixel(grid, site), k, mode);
      observations.push_back(Observation::satellite(grid.observed_at, avg.mean_cloudiness.value(), avg.valid_count,
                                                    file.generic_string()));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoValidSatelliteData) throw;
      out.failures.push_back({grid.observed_at, e.what()});
    }
  }
  out.catalog = build_catalog(std::move(observations));
  if (out.catalog.duplicates_dropped() > 0) {
    log << "warning: " << out.catalog.duplicates_dropped() << " duplicate granule timestamps dropped\n";
  }
  return out;
}

namespace {

MatchResult ingest_and_match(const PipelineConfig& config, std::ostream& log) {
  validate(config);
  const Catalog cameras =
      build_camera_catalog(std::filesystem::is_directory(config.camera_manifest)
                               ? scan_camera_directory(config.camera_manifest)
                               : read_camera_manifest(config.camera_manifest),
                           config.roi, config.threshold, log);
  SatelliteExtraction sat = extract_satellite(config.grid_dir, config.site, config.k, config.normalization, log,
                                              config.render ? config.out_dir / "renders" : std::filesystem::path{});
  MatchResult result = match_all(sat.catalog, cameras, config.max_delta);
  result.unmatched.insert(result.unmatched.end(), sat.failures.begin(), sat.failures.end());
  std::stable_sort(result.unmatched.begin(), result.unmatched.end(),
                   [](const Unmatched& a, const Unmatched& b) { return a.at < b.at; });
  return result;
}

}  // namespace

MatchResult run_match(const PipelineConfig& config, std::ostream& log) {
  MatchResult result = ingest_and_match(config, log);
  std::filesystem::create_directories(config.out_dir);
  write_pairs_csv(config.out_dir / "pairs.csv", result.pairs);
  write_unmatched_csv(config.out_dir / "unmatched.csv", result.unmatched);
  return result;
}

AnalyzeSummary run_analyze(const PipelineConfig& config, std::ostream& log) {
  AnalyzeSummary summary;
  summary.match = run_match(config, log);
  summary.report = trend_report(summary.match.pairs, make_bin_spec(config.bin_mode, config.normalization));
  if (!summary.report.correlation_note.empty()) {
    log << "note: correlations omitted (" << summary.report.correlation_note << ")\n";
  }
  write_trend_csv(config.out_dir / "trend.csv", summary.report);
  write_correlation_txt(config.out_dir / "correlation.txt", summary.report);
  if (config.svg) write_trend_svg(config.out_dir / "trend.svg", summary.report);
  return summary;
}

}  // namespace skycloud
