#include "skycloud/matching.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>

#include "skycloud/error.hpp"

namespace skycloud {

Observation Observation::camera(Timestamp at, double coverage, std::string image_path) {
  return {Source::Camera, at, coverage, std::move(image_path), 0};
}

Observation Observation::satellite(Timestamp at, double cloudiness, int valid_count, std::string grid_path) {
  return {Source::Satellite, at, cloudiness, std::move(grid_path), valid_count};
}

Catalog build_catalog(std::vector<Observation> observations) {
  for (const auto& o : observations) {
    if (!(o.value >= 0.0 && o.value <= 100.0)) {
      throw Error(ErrorKind::InvalidArgument, "observation value outside [0,100] at " + format_iso_utc(o.at));
    }
  }
  std::stable_sort(observations.begin(), observations.end(), [](const Observation& a, const Observation& b) {
    if (a.at != b.at) return a.at < b.at;
    return a.source < b.source;
  });
  const auto last = std::unique(observations.begin(), observations.end(),
                                [](const Observation& a, const Observation& b) {
                                  return a.at == b.at && a.source == b.source;
                                });
  Catalog catalog;
  catalog.duplicates_ = static_cast<std::size_t>(observations.end() - last);
  observations.erase(last, observations.end());
  catalog.entries_ = std::move(observations);
  return catalog;
}

MatchedPair match_nearest(const Observation& satellite, const Catalog& cameras, std::chrono::seconds max_delta) {
  if (max_delta <= std::chrono::seconds::zero()) {
    throw Error(ErrorKind::InvalidArgument, "max_delta must be positive");
  }
  const auto& entries = cameras.entries();
  const auto is_camera = [](const Observation& o) { return o.source == Source::Camera; };
  if (std::none_of(entries.begin(), entries.end(), is_camera)) {
    throw Error(ErrorKind::EmptyCatalog, "camera catalog is empty");
  }

  const auto split = std::lower_bound(entries.begin(), entries.end(), satellite.at,
                                      [](const Observation& o, Timestamp t) { return o.at < t; });
  // Closest camera frame strictly before and at-or-after the satellite time.
  std::optional<std::size_t> before, after;
  for (auto it = split; it != entries.begin();) {
    --it;
    if (is_camera(*it)) {
      before = static_cast<std::size_t>(it - entries.begin());
      break;
    }
  }
  for (auto it = split; it != entries.end(); ++it) {
    if (is_camera(*it)) {
      after = static_cast<std::size_t>(it - entries.begin());
      break;
    }
  }

  std::size_t chosen;
  if (before && after) {
    const auto gap_before = satellite.at - entries[*before].at;
    const auto gap_after = entries[*after].at - satellite.at;
    chosen = gap_after < gap_before ? *after : *before;
  } else {
    chosen = before ? *before : *after;
  }

  const Observation& cam = entries[chosen];
  const auto delta = cam.at - satellite.at;
  if (std::chrono::abs(delta) > max_delta) {
    throw Error(ErrorKind::NoMatchInWindow, "no match within window: nearest camera frame is " +
                                                std::to_string(std::chrono::abs(delta).count()) + " s away (max " +
                                                std::to_string(max_delta.count()) + " s)");
  }
  return {satellite, cam, delta};
}

MatchResult match_all(const Catalog& satellites, const Catalog& cameras, std::chrono::seconds max_delta) {
  MatchResult result;
  for (const auto& sat : satellites) {
    if (sat.source != Source::Satellite) continue;
    try {
      result.pairs.push_back(match_nearest(sat, cameras, max_delta));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) throw;
      result.unmatched.push_back({sat.at, e.what()});
    }
  }
  return result;
}

namespace {

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Reasons are free text; keep CSV fields unambiguous.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_pairs_csv(const std::filesystem::path& path, const std::vector<MatchedPair>& pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << "sat_time_utc,sat_cloudiness,sat_valid_count,cam_time_utc,cam_coverage,delta_seconds\n";
  for (const auto& p : pairs) {
    out << format_iso_utc(p.satellite.at) << ',' << fixed6(p.satellite.value) << ',' << p.satellite.valid_count
        << ',' << format_iso_utc(p.camera.at) << ',' << fixed6(p.camera.value) << ',' << p.delta.count() << '\n';
  }
}

void write_unmatched_csv(const std::filesystem::path& path, const std::vector<Unmatched>& unmatched) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << "sat_time_utc,reason\n";
  for (const auto& u : unmatched) out << format_iso_utc(u.at) << ',' << csv_field(u.reason) << '\n';
}

}  // namespace skycloud
