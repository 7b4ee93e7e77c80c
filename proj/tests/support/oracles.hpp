#pragma once
// Brute-force reference implementations used only by the tests. They work on
// plain std::vector data and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

enum Label { kUndefined = 0, kSky = 1, kCloud = 2 };

struct Pixel {
  int r, g, b;
};

inline std::vector<int> segment(const std::vector<Pixel>& pixels, const std::vector<bool>& roi, double threshold) {
  std::vector<int> out(pixels.size(), kUndefined);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (!roi[i] || pixels[i].b == 0) continue;
    const double ratio = static_cast<double>(pixels[i].r) / static_cast<double>(pixels[i].b);
    out[i] = ratio >= threshold ? kCloud : kSky;
  }
  return out;
}

inline double coverage(const std::vector<int>& labels) {
  int cloud = 0, sky = 0;
  for (int l : labels) {
    cloud += l == kCloud;
    sky += l == kSky;
  }
  return 100.0 * cloud / (cloud + sky);
}

inline double normalized(int code) { return (192.0 - code) * 100.0 / 192.0; }

inline double haversine(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kR = 6371.0088;
  constexpr double kRad = 3.14159265358979323846 / 180.0;
  const double a = std::sin((lat2 - lat1) * kRad / 2);
  const double b = std::sin((lon2 - lon1) * kRad / 2);
  const double h = a * a + std::cos(lat1 * kRad) * std::cos(lat2 * kRad) * b * b;
  return 2 * kR * std::asin(std::sqrt(std::min(1.0, h)));
}

// Row-major vectors of size rows*cols.
struct Grid {
  int rows, cols;
  std::vector<int> codes;  // -1 invalid
  std::vector<double> lat, lon;
};

inline std::pair<int, int> nearest(const Grid& g, double lat, double lon) {
  std::pair<int, int> best{-1, -1};
  double best_d = std::numeric_limits<double>::infinity();
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      const double d = haversine(lat, lon, g.lat[r * g.cols + c], g.lon[r * g.cols + c]);
      const bool better = d < best_d || (d == best_d && (r < best.first || (r == best.first && c < best.second)));
      if (better) {
        best_d = d;
        best = {r, c};
      }
    }
  }
  return best;
}

// nullopt when no valid cell is in the window.
inline std::optional<std::pair<double, int>> window_mean(const Grid& g, int row, int col, int k) {
  double sum = 0;
  int n = 0;
  for (int dr = -k / 2; dr <= k / 2; ++dr) {
    for (int dc = -k / 2; dc <= k / 2; ++dc) {
      const int r = row + dr, c = col + dc;
      if (r < 0 || r >= g.rows || c < 0 || c >= g.cols) continue;
      const int code = g.codes[r * g.cols + c];
      if (code < 0) continue;
      sum += normalized(code);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return std::pair{sum / n, n};
}

// For each satellite time, index of the nearest camera time (earlier on ties) if within max_delta.
inline std::vector<std::optional<std::size_t>> join(const std::vector<long>& sat, const std::vector<long>& cam,
                                                    long max_delta) {
  std::vector<std::optional<std::size_t>> out;
  for (long s : sat) {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < cam.size(); ++j) {
      if (!best) {
        best = j;
        continue;
      }
      const long dj = std::labs(cam[j] - s), db = std::labs(cam[*best] - s);
      if (dj < db || (dj == db && cam[j] < cam[*best])) best = j;
    }
    if (best && std::labs(cam[*best] - s) > max_delta) best.reset();
    out.push_back(best);
  }
  return out;
}

inline std::vector<double> five_numbers(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const double h = (v.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= v.size()) return v[lo];
    return v[lo] + (h - lo) * (v[lo + 1] - v[lo]);
  };
  return {v.front(), q(0.25), q(0.5), q(0.75), v.back()};
}

}  // namespace oracle
