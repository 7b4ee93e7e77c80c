#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "skycloud/error.hpp"
#include "skycloud/pipeline.hpp"

namespace {

using namespace skycloud;

struct RoiFlags {
  std::optional<double> cx, cy, r;
  bool full = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--roi-cx", cx, "ROI circle centre column (pixels)");
    cmd->add_option("--roi-cy", cy, "ROI circle centre row (pixels)");
    cmd->add_option("--roi-r", r, "ROI circle radius (pixels)");
    cmd->add_flag("--roi-full", full, "Use the whole frame as ROI");
  }

  RoiSpec resolve(RoiSpec fallback) const {
    if (full) return RoiSpec::full_frame();
    if (!cx && !cy && !r) return fallback;
    if (!(cx && cy && r)) throw Error(ErrorKind::InvalidArgument, "--roi-cx, --roi-cy and --roi-r go together");
    return RoiSpec::circle(*cx, *cy, *r);
  }
};

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Flags shared by `match` and `analyze`; each overrides the config file.
struct PipelineFlags {
  std::string config_file;
  std::optional<std::string> manifest, grids, out, normalization, bins;
  std::optional<double> lat, lon, threshold;
  std::optional<int> k;
  std::optional<long> max_delta;
  bool render = false, svg = false;
  RoiFlags roi;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_file, "Pipeline config file (key = value)");
    cmd->add_option("--manifest", manifest, "Camera manifest CSV, or a directory of YYYYMMDDHHMMSS.png/jpg frames");
    cmd->add_option("--grids", grids, "Directory of CMG1 grids");
    cmd->add_option("--out", out, "Output directory");
    cmd->add_option("--lat", lat, "Camera latitude (deg N)");
    cmd->add_option("--lon", lon, "Camera longitude (deg E)");
    cmd->add_option("--threshold", threshold, "Red/blue ratio threshold");
    cmd->add_option("--normalization", normalization, "linear | confidence");
    cmd->add_option("--k", k, "Neighbourhood size (odd)");
    cmd->add_option("--max-delta", max_delta, "Max camera/satellite time gap, seconds");
    cmd->add_option("--bins", bins, "level | equal");
    cmd->add_flag("--render", render, "Write a PPM render per granule");
    cmd->add_flag("--svg", svg, "Write trend.svg");
    roi.attach(cmd);
  }

  PipelineConfig resolve() const {
    PipelineConfig config;
    if (!config_file.empty()) {
      apply_config(config, read_key_values(config_file), std::filesystem::path(config_file).parent_path());
    }
    if (manifest) config.camera_manifest = *manifest;
    if (grids) config.grid_dir = *grids;
    if (out) config.out_dir = *out;
    if (lat) config.site.lat = *lat;
    if (lon) config.site.lon = *lon;
    if (threshold) config.threshold = *threshold;
    if (normalization) config.normalization = parse_normalization(*normalization);
    if (k) config.k = *k;
    if (max_delta) config.max_delta = std::chrono::seconds{*max_delta};
    if (bins) config.bin_mode = parse_bin_mode(*bins);
    config.render = config.render || render;
    config.svg = config.svg || svg;
    config.roi = roi.resolve(config.roi);
    if (config.camera_manifest.empty()) throw Error(ErrorKind::InvalidArgument, "no camera manifest configured");
    if (config.grid_dir.empty()) throw Error(ErrorKind::InvalidArgument, "no grid directory configured");
    validate(config);
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skycloud: sky-camera cloud coverage vs. satellite cloud mask"};
  app.require_subcommand(1);

  // coverage
  auto* coverage = app.add_subcommand("coverage", "Cloud coverage of one sky image");
  std::string image_path;
  double threshold = kDefaultRatioThreshold;
  std::string roi_config;
  RoiFlags coverage_roi;
  coverage->add_option("image", image_path, "PNG or JPEG sky image")->required();
  coverage->add_option("--threshold", threshold, "Red/blue ratio threshold")->capture_default_str();
  coverage->add_option("--roi-config", roi_config, "File with roi.cx/roi.cy/roi.r or roi=full");
  coverage_roi.attach(coverage);

  // maskinfo
  auto* maskinfo = app.add_subcommand("maskinfo", "Neighbourhood cloudiness around a site in a CMG1 grid");
  std::string grid_path;
  double lat = kDefaultSite.lat, lon = kDefaultSite.lon;
  int k = 3;
  std::string normalization = "linear";
  maskinfo->add_option("grid", grid_path, "CMG1 file")->required();
  maskinfo->add_option("--lat", lat, "Site latitude")->capture_default_str();
  maskinfo->add_option("--lon", lon, "Site longitude")->capture_default_str();
  maskinfo->add_option("--k", k, "Neighbourhood size (odd)")->capture_default_str();
  maskinfo->add_option("--normalization", normalization, "linear | confidence")->capture_default_str();

  PipelineFlags match_flags, analyze_flags;
  auto* match = app.add_subcommand("match", "Pair satellite granules with nearest camera frames");
  match_flags.attach(match);
  auto* analyze = app.add_subcommand("analyze", "Full pipeline: match, bin, correlate");
  analyze_flags.attach(analyze);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic paired dataset");
  SynthOptions synth_opt;
  std::string synth_out;
  synth->add_option("--seed", synth_opt.seed, "RNG seed")->capture_default_str();
  synth->add_option("-n,--n-granules", synth_opt.n_granules, "Number of satellite granules")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--noise", synth_opt.noise, "Half-width of uniform coverage noise, percent")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth->add_option("--lat", synth_opt.site.lat, "Site latitude")->capture_default_str();
  synth->add_option("--lon", synth_opt.site.lon, "Site longitude")->capture_default_str();
  synth->add_option("--out", synth_out, "Output directory")->required();

  // render
  auto* render = app.add_subcommand("render", "Colour-coded PPM of a CMG1 grid");
  std::string render_grid, render_out;
  std::optional<double> marker_lat, marker_lon;
  render->add_option("grid", render_grid, "CMG1 file")->required();
  render->add_option("-o,--out", render_out, "Output PPM")->required();
  render->add_option("--marker-lat", marker_lat, "Marker latitude");
  render->add_option("--marker-lon", marker_lon, "Marker longitude");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*coverage) {
      RoiSpec roi = RoiSpec::full_frame();
      if (!roi_config.empty()) roi = roi_from(read_key_values(roi_config));
      roi = coverage_roi.resolve(roi);
      const SkyImage image = make_sky_image(read_raster(image_path), roi, Timestamp{});
      std::cout << "coverage=" << fixed2(cloud_coverage(segment_clouds(image, threshold)).value()) << '\n';
    } else if (*maskinfo) {
      const CmgParseResult parsed = parse_cmg(std::filesystem::path(grid_path));
      if (parsed.unknown_codes > 0) std::cerr << "warning: " << parsed.unknown_codes << " unknown codes treated as invalid\n";
      const PixelIndex centre = nearest_pixel(parsed.grid, {lat, lon});
      const NeighborhoodAverage avg = neighborhood_average(parsed.grid, centre, k, parse_normalization(normalization));
      std::cout << "row=" << centre.row << " col=" << centre.col << " mean=" << fixed2(avg.mean_cloudiness.value())
                << " valid=" << avg.valid_count << '\n';
    } else if (*match) {
      const MatchResult result = run_match(match_flags.resolve(), std::cerr);
      std::cout << "n_pairs=" << result.pairs.size() << " n_unmatched=" << result.unmatched.size() << '\n';
    } else if (*analyze) {
      const AnalyzeSummary summary = run_analyze(analyze_flags.resolve(), std::cerr);
      std::cout << "n_pairs=" << summary.match.pairs.size() << " n_unmatched=" << summary.match.unmatched.size()
                << '\n';
    } else if (*synth) {
      synth_opt.out_dir = synth_out;
      run_synth(synth_opt, std::cerr);
    } else if (*render) {
      if (marker_lat.has_value() != marker_lon.has_value()) {
        throw Error(ErrorKind::InvalidArgument, "--marker-lat and --marker-lon go together");
      }
      std::optional<GeoPoint> marker;
      if (marker_lat) marker = GeoPoint{*marker_lat, *marker_lon};
      render_mask(parse_cmg(std::filesystem::path(render_grid)).grid, std::filesystem::path(render_out), marker);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
