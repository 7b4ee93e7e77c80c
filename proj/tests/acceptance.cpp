// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skycloud/error.hpp"
#include "skycloud/pipeline.hpp"
#include "support/oracles.hpp"

using namespace skycloud;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path kData = SKYCLOUD_TEST_DATA;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("skycloud_accept_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct RandomImage {
  RgbRaster raster;
  std::vector<oracle::Pixel> pixels;
};

RandomImage random_image(std::mt19937& rng) {
  std::uniform_int_distribution<int> dim(1, 16), channel(0, 255);
  const int h = dim(rng), w = dim(rng);
  RandomImage img{RgbRaster(h, w), {}};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      // Bias towards grey-ish pixels and zero blue so every label occurs.
      int red = channel(rng), green = channel(rng), blue = channel(rng);
      if (channel(rng) < 40) blue = red;
      if (channel(rng) < 10) blue = 0;
      img.raster.set(r, c, red, green, blue);
      img.pixels.push_back({red, green, blue});
    }
  }
  return img;
}

RoiSpec random_roi(std::mt19937& rng, int h, int w) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < 0.3) return RoiSpec::full_frame();
  // Integer centre inside the frame and radius >= 1: the centre pixel is always in the ROI.
  return RoiSpec::circle(std::floor(u(rng) * w), std::floor(u(rng) * h), 1.0 + u(rng) * 16.0);
}

// 1
Outcome segmentation_oracle() {
  const auto t0 = Clock::now();
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> thr(0.3, 1.7);
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    RandomImage img = random_image(rng);
    const int h = static_cast<int>(img.raster.height()), w = static_cast<int>(img.raster.width());
    const RoiSpec roi = random_roi(rng, h, w);
    const double t = thr(rng);
    const SkyImage sky = make_sky_image(img.raster, roi, Timestamp{});
    std::vector<bool> roi_flags;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) roi_flags.push_back(sky.roi(r, c));
    const auto expect = oracle::segment(img.pixels, roi_flags, t);
    const CloudBinaryMap got = segment_clouds(sky, t);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) mismatches += static_cast<int>(got.labels(r, c)) != expect[r * w + c];
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 5.0, fmt("100 images, %d label mismatches, %.3f s (limit 5 s)", mismatches, secs)};
}

// 2
Outcome threshold_monotonicity() {
  std::mt19937 rng(202);
  int violations = 0, images = 0;
  while (images < 20) {
    RandomImage img = random_image(rng);
    const SkyImage sky = make_sky_image(img.raster, RoiSpec::full_frame(), Timestamp{});
    double prev = 101.0;
    try {
      for (double t : {0.5, 0.7, 0.9, 1.1, 1.3}) {
        const double cov = cloud_coverage(segment_clouds(sky, t)).value();
        violations += cov > prev;
        prev = cov;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoValidSky) throw;
      continue;  // every pixel had zero blue; draw another image
    }
    ++images;
  }
  return {violations == 0, fmt("20 images x 5 thresholds, %d increases", violations)};
}

// 3
Outcome normalization_endpoints() {
  const bool ok = normalize_code(MaskCode::from_raw(192)).value() == 0.0 &&
                  normalize_code(MaskCode::from_raw(0)).value() == 100.0 &&
                  decode_clear_confidence(MaskCode::from_raw(192)) == 98.0 &&
                  decode_clear_confidence(MaskCode::from_raw(128)) == 92.0 &&
                  decode_clear_confidence(MaskCode::from_raw(64)) == 60.0 &&
                  decode_clear_confidence(MaskCode::from_raw(0)) == 0.0;
  return {ok, "192->0, 0->100; confidence 98/92/60/0 (exact)"};
}

struct RandomGrid {
  CloudMaskGrid grid;
  oracle::Grid plain;
};

RandomGrid random_grid(std::mt19937& rng, double invalid_fraction, bool duplicate_coords) {
  std::uniform_int_distribution<int> dim(1, 10), level(0, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int codes[] = {0, 64, 128, 192};
  RandomGrid g;
  g.plain = {dim(rng), dim(rng), {}, {}, {}};
  g.grid.codes.resize(g.plain.rows, g.plain.cols);
  g.grid.lat.resize(g.plain.rows, g.plain.cols);
  g.grid.lon.resize(g.plain.rows, g.plain.cols);
  const double lat0 = -60 + 120 * u(rng), lon0 = -170 + 340 * u(rng);
  for (int r = 0; r < g.plain.rows; ++r) {
    for (int c = 0; c < g.plain.cols; ++c) {
      const int code = u(rng) < invalid_fraction ? -1 : codes[level(rng)];
      double lat = lat0 + 0.009 * (g.plain.rows - r) + 0.003 * u(rng);
      double lon = lon0 + 0.009 * c + 0.003 * u(rng);
      if (duplicate_coords) {  // every pixel shares one location: pure tie-break
        lat = lat0;
        lon = lon0;
      }
      g.plain.codes.push_back(code);
      g.plain.lat.push_back(lat);
      g.plain.lon.push_back(lon);
      g.grid.codes(r, c) = static_cast<std::int16_t>(code);
      g.grid.lat(r, c) = lat;
      g.grid.lon(r, c) = lon;
    }
  }
  return g;
}

// 4
Outcome neighborhood_oracle() {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> kpick(0, 2);
  double worst = 0.0;
  int count_mismatch = 0, error_mismatch = 0, all_invalid = 0;
  for (int i = 0; i < 200; ++i) {
    const double fill = i % 10 == 0 ? 1.0 : u(rng) * 0.7;
    RandomGrid g = random_grid(rng, fill, false);
    const int row = static_cast<int>(u(rng) * g.plain.rows), col = static_cast<int>(u(rng) * g.plain.cols);
    const int k = 1 + 2 * kpick(rng);
    const auto expect = oracle::window_mean(g.plain, row, col, k);
    try {
      const NeighborhoodAverage got = neighborhood_average(g.grid, {row, col}, k);
      if (!expect) {
        ++error_mismatch;
        continue;
      }
      worst = std::max(worst, std::abs(got.mean_cloudiness.value() - expect->first));
      count_mismatch += got.valid_count != expect->second;
    } catch (const Error& e) {
      if (expect || e.kind() != ErrorKind::NoValidSatelliteData) ++error_mismatch;
      ++all_invalid;
    }
  }
  return {worst <= 1e-9 && count_mismatch == 0 && error_mismatch == 0,
          fmt("200 grids, max |diff| %.3g (tol 1e-9), %d count mismatches, %d all-invalid windows raised, %d error "
              "mismatches",
              worst, count_mismatch, all_invalid, error_mismatch)};
}

// 5
Outcome nearest_pixel_oracle() {
  std::mt19937 rng(505);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    RandomGrid g = random_grid(rng, 0.0, i % 5 == 0);
    const double lat = g.plain.lat[0] + 0.1 * (u(rng) - 0.5), lon = g.plain.lon[0] + 0.1 * (u(rng) - 0.5);
    const auto [er, ec] = oracle::nearest(g.plain, lat, lon);
    const PixelIndex got = nearest_pixel(g.grid, {lat, lon});
    mismatches += !(got.row == er && got.col == ec);
  }
  return {mismatches == 0, fmt("100 grids (20 all-tied), %d index mismatches", mismatches)};
}

// 6
Outcome temporal_matching_oracle() {
  std::mt19937 rng(606);
  std::uniform_int_distribution<long> t(0, 40000), size(0, 200), window(1, 1200);
  const Timestamp epoch = parse_iso_utc("2015-01-01T00:00:00Z");
  int mismatches = 0, out_of_window = 0, size_errors = 0;
  std::size_t total_pairs = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Observation> sat, cam;
    for (long i = 0, n = size(rng); i < n; ++i) sat.push_back(Observation::satellite(epoch + std::chrono::seconds{t(rng)}, 10, 9));
    for (long i = 0, n = size(rng); i < n; ++i) cam.push_back(Observation::camera(epoch + std::chrono::seconds{t(rng)}, 10));
    const Catalog sats = build_catalog(sat), cams = build_catalog(cam);
    const long max_delta = window(rng);
    std::vector<long> st, ct;
    for (const auto& o : sats) st.push_back((o.at - epoch).count());
    for (const auto& o : cams) ct.push_back((o.at - epoch).count());
    const auto expect = oracle::join(st, ct, max_delta);
    const MatchResult got = match_all(sats, cams, std::chrono::seconds{max_delta});
    size_errors += got.pairs.size() + got.unmatched.size() != sats.size();
    std::size_t p = 0;
    for (std::size_t i = 0; i < expect.size(); ++i) {
      if (!expect[i]) continue;
      if (p >= got.pairs.size() || got.pairs[p].satellite.at != epoch + std::chrono::seconds{st[i]} ||
          got.pairs[p].camera.at != epoch + std::chrono::seconds{ct[*expect[i]]}) {
        ++mismatches;
      } else if (std::chrono::abs(got.pairs[p].delta).count() > max_delta) {
        ++out_of_window;
      }
      ++p;
    }
    mismatches += p != got.pairs.size();
    total_pairs += got.pairs.size();
  }
  return {mismatches == 0 && out_of_window == 0 && size_errors == 0,
          fmt("50 catalog pairs (<=200 entries), %zu pairs, %d mismatches, %d out of window", total_pairs, mismatches,
              out_of_window)};
}

// 7
Outcome cmg_round_trip() {
  int files = 0, diffs = 0;
  for (const auto& entry : fs::directory_iterator(kData / "canonical")) {
    ++files;
    std::ostringstream out;
    emit_cmg(out, parse_cmg(entry.path()).grid);
    diffs += out.str() != slurp(entry.path());
  }
  return {files == 10 && diffs == 0, fmt("%d canonical files, %d differ", files, diffs)};
}

AnalyzeSummary synth_and_analyze(const fs::path& dir, std::uint64_t seed, int n, double noise) {
  std::ostringstream log;
  SynthOptions opt;
  opt.seed = seed;
  opt.n_granules = n;
  opt.noise = noise;
  opt.out_dir = dir;
  run_synth(opt, log);
  PipelineConfig config;
  apply_config(config, read_key_values(dir / "config.txt"), dir);
  return run_analyze(config, log);
}

// 8
Outcome qualitative_trend() {
  const auto t0 = Clock::now();
  const fs::path dir = scratch("trend");
  const AnalyzeSummary s = synth_and_analyze(dir, 2015, 400, 10.0);
  const double secs = seconds_since(t0);
  bool increasing = true;
  std::string medians;
  for (std::size_t b = 0; b < s.report.bins.size(); ++b) {
    const auto& bin = s.report.bins[b];
    if (!bin.stats) {
      increasing = false;
      medians += " empty";
      continue;
    }
    medians += fmt(" %.2f", bin.stats->median);
    if (b > 0 && (!s.report.bins[b - 1].stats || !(bin.stats->median > s.report.bins[b - 1].stats->median))) {
      increasing = false;
    }
  }
  const double rho = s.report.spearman_rho.value_or(-2.0);
  fs::remove_all(dir);
  return {s.report.n == 400 && increasing && rho >= 0.8 && secs < 30.0,
          fmt("n=%zu, medians%s, spearman %.4f (min 0.8), %.2f s (limit 30 s)", s.report.n, medians.c_str(), rho,
              secs)};
}

// 9
Outcome closed_loop() {
  const fs::path dir = scratch("closed_loop");
  const AnalyzeSummary s = synth_and_analyze(dir, 9, 60, 0.0);
  const double r = s.report.pearson_r.value_or(-2.0);
  fs::remove_all(dir);
  return {s.report.n >= 50 && r >= 0.99, fmt("n=%zu (min 50), pearson %.6f (min 0.99)", s.report.n, r)};
}

// 10
Outcome determinism() {
  const fs::path dir = scratch("determinism");
  std::ostringstream log;
  SynthOptions opt;
  opt.seed = 77;
  opt.n_granules = 30;
  opt.noise = 10.0;
  opt.out_dir = dir;
  run_synth(opt, log);
  PipelineConfig config;
  apply_config(config, read_key_values(dir / "config.txt"), dir);
  config.render = true;
  config.svg = true;
  config.out_dir = dir / "run1";
  run_analyze(config, log);
  config.out_dir = dir / "run2";
  run_analyze(config, log);
  int files = 0, diffs = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "run1")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    diffs += slurp(entry.path()) != slurp(dir / "run2" / fs::relative(entry.path(), dir / "run1"));
  }
  fs::remove_all(dir);
  return {files > 0 && diffs == 0, fmt("%d output files compared, %d differ", files, diffs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 segmentation oracle equivalence", segmentation_oracle},
      {"2 coverage threshold monotonicity", threshold_monotonicity},
      {"3 normalization endpoints", normalization_endpoints},
      {"4 neighbourhood averaging", neighborhood_oracle},
      {"5 nearest-pixel correctness", nearest_pixel_oracle},
      {"6 temporal matching", temporal_matching_oracle},
      {"7 CMG1 round trip", cmg_round_trip},
      {"8 qualitative trend (n=400, noise 10)", qualitative_trend},
      {"9 closed-loop fidelity (noise 0)", closed_loop},
      {"10 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
