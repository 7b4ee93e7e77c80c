#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "skycloud/error.hpp"
#include "skycloud/pipeline.hpp"

namespace skycloud {
namespace {

// Engine output is fully specified by the standard; the std distributions are
// not, so draws are mapped by hand to keep datasets identical across toolchains.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

constexpr double kPixelSpacingDeg = 0.009;  // ~1 km at the equator
constexpr Rgb kCloudColor{235, 235, 240};
constexpr Rgb kSkyColor{60, 120, 255};

double round6(double v) { return std::round(v * 1e6) / 1e6; }

CloudMaskGrid make_grid(const SynthOptions& opt, Timestamp at, std::mt19937_64& rng) {
  const int n = opt.grid_size;
  const int half = n / 2;
  CloudMaskGrid grid;
  grid.observed_at = at;
  grid.codes.resize(n, n);
  grid.lat.resize(n, n);
  grid.lon.resize(n, n);

  // One dominant level per granule, with some cells nudged to a neighbouring
  // level or dropped as fill.
  const int level = static_cast<int>(pick(rng, 4));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      grid.lat(r, c) = std::clamp(round6(opt.site.lat + (half - r) * kPixelSpacingDeg), -90.0, 90.0);
      grid.lon(r, c) = std::clamp(round6(opt.site.lon + (c - half) * kPixelSpacingDeg), -180.0, 180.0);
      int cell_level = level;
      const double u = unit(rng);
      if (u < 0.08) {
        grid.codes(r, c) = MaskCode::kInvalid;
        continue;
      }
      if (u < 0.16) cell_level = std::clamp(level + (unit(rng) < 0.5 ? -1 : 1), 0, 3);
      grid.codes(r, c) = kMaskLevels[static_cast<std::size_t>(cell_level)].raw();
    }
  }
  return grid;
}

RgbRaster make_sky(const SynthOptions& opt, const RoiSpec& roi, double coverage, std::mt19937_64& rng) {
  RgbRaster raster(opt.image_size, opt.image_size);  // black outside the ROI
  const Plane<bool> mask = roi_mask(roi, opt.image_size, opt.image_size);
  std::vector<Eigen::Index> inside;
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    if (mask.data()[i]) inside.push_back(i);
  }
  const auto n_cloud = static_cast<std::size_t>(std::llround(coverage / 100.0 * static_cast<double>(inside.size())));
  // Partial Fisher-Yates selects which ROI pixels are cloud.
  for (std::size_t i = 0; i < inside.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(pick(rng, inside.size() - i));
    std::swap(inside[i], inside[j]);
  }
  for (std::size_t i = 0; i < inside.size(); ++i) {
    const Rgb color = i < n_cloud ? kCloudColor : kSkyColor;
    const Eigen::Index row = inside[i] / opt.image_size;
    const Eigen::Index col = inside[i] % opt.image_size;
    raster.set(row, col, color.r, color.g, color.b);
  }
  return raster;
}

}  // namespace

void run_synth(const SynthOptions& opt, std::ostream& log) {
  if (opt.n_granules < 1) throw Error(ErrorKind::InvalidArgument, "synth needs at least one granule");
  if (opt.grid_size < 3 || opt.grid_size % 2 == 0) {
    throw Error(ErrorKind::InvalidArgument, "synthetic grid size must be odd and >= 3");
  }
  if (opt.image_size < 8) throw Error(ErrorKind::InvalidArgument, "synthetic image size must be >= 8");
  if (!(opt.noise >= 0.0)) throw Error(ErrorKind::InvalidArgument, "noise must be >= 0");
  if (!in_range(opt.site)) throw Error(ErrorKind::InvalidArgument, "site coordinates out of range");

  const auto grid_dir = opt.out_dir / "grids";
  const auto camera_dir = opt.out_dir / "camera";
  try {
    std::filesystem::create_directories(grid_dir);
    std::filesystem::create_directories(camera_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    throw Error(ErrorKind::Io, std::string("cannot create output directory: ") + e.what());
  }

  const double centre = (opt.image_size - 1) / 2.0;
  const RoiSpec roi = RoiSpec::circle(centre, centre, opt.image_size / 2.0 - 2.0);
  std::mt19937_64 rng(opt.seed);
  std::vector<ManifestEntry> manifest;

  using namespace std::chrono;
  const sys_days first_day = year{2015} / January / 1;
  for (int i = 0; i < opt.n_granules; ++i) {
    // Twice-daily overpasses near 04 and 07 UTC, jittered within five minutes.
    const Timestamp overpass = first_day + days{i / 2} + hours{i % 2 == 0 ? 4 : 7} + seconds{pick(rng, 300)};
    const CloudMaskGrid grid = make_grid(opt, overpass, rng);
    const std::string stem = format_compact_utc(overpass);
    write_cmg(grid_dir / (stem + ".cmg"), grid);

    double truth = 50.0;
    try {
      truth = neighborhood_average(grid, nearest_pixel(grid, opt.site), 3).mean_cloudiness.value();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoValidSatelliteData) throw;
    }
    const double coverage = std::clamp(truth + opt.noise * (2.0 * unit(rng) - 1.0), 0.0, 100.0);

    // Camera runs on even minutes; the frame nearest the overpass (earlier on a
    // tie) carries the paired coverage, another 30 minutes later is unrelated.
    const auto secs = overpass.time_since_epoch().count();
    const auto floor2 = secs - secs % 120;
    const Timestamp frame{seconds{secs - floor2 <= 60 ? floor2 : floor2 + 120}};
    const Timestamp distractor = frame + minutes{30};
    for (const auto& [at, value] : {std::pair{frame, coverage}, std::pair{distractor, 100.0 * unit(rng)}}) {
      const std::string name = format_compact_utc(at) + ".png";
      write_png(camera_dir / name, make_sky(opt, roi, value, rng));
      manifest.push_back({at, std::filesystem::path("camera") / name});
    }
  }
  std::sort(manifest.begin(), manifest.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.captured_at < b.captured_at; });
  write_camera_manifest(opt.out_dir / "manifest.csv", manifest);

  PipelineConfig config;
  config.camera_manifest = "manifest.csv";
  config.grid_dir = "grids";
  config.site = opt.site;
  config.roi = roi;
  config.out_dir = "analysis";
  write_config(opt.out_dir / "config.txt", config);
  log << "synth: wrote " << opt.n_granules << " granules and " << manifest.size() << " camera frames to "
      << opt.out_dir.string() << '\n';
}

}  // namespace skycloud
