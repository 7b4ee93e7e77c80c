#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "skycloud/error.hpp"
#include "skycloud/maskgrid.hpp"
#include "skycloud/matching.hpp"

namespace skycloud {

/// Four bins on the 0..100 cloudiness scale, split at three interior edges.
struct BinSpec {
  std::array<double, 3> edges{};
  std::array<std::string, 4> labels;

  /// Edges at the midpoints between the mode's four normalized mask levels, so
  /// each bin collects values nearest one level.
  static BinSpec nearest_level(Normalization mode = Normalization::Linear);
  static BinSpec equal_width();
};

/// Throws Error(InvalidArgument) unless edges are strictly increasing inside (0,100).
void validate(const BinSpec& spec);

enum class BinMode { NearestLevel, EqualWidth };
BinMode parse_bin_mode(const std::string& name);
std::string to_string(BinMode mode);
BinSpec make_bin_spec(BinMode mode, Normalization normalization);

/// Bin of `cloudiness` using half-open [lo, hi) intervals; the last bin is closed at 100.
int assign_bin(const BinSpec& spec, double cloudiness);

template <typename Scalar>
struct FiveNumberSummary {
  Scalar min, q1, median, q3, max;
};

/// Linear-interpolated quantile of sorted data (inclusive convention,
/// position (n-1)p).
template <typename Derived>
typename Derived::Scalar sorted_quantile(const Eigen::DenseBase<Derived>& sorted, double p) {
  using Scalar = typename Derived::Scalar;
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<Eigen::Index>(std::floor(h));
  const auto hi = std::min<Eigen::Index>(lo + 1, sorted.size() - 1);
  const Scalar frac = static_cast<Scalar>(h - static_cast<double>(lo));
  return sorted(lo) + frac * (sorted(hi) - sorted(lo));
}

/// min, Q1, median, Q3, max with inclusive linear-interpolation quartiles.
/// Throws Error(InvalidArgument) for empty input.
template <typename Derived>
FiveNumberSummary<typename Derived::Scalar> five_number_summary(const Eigen::DenseBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  if (values.size() == 0) throw Error(ErrorKind::InvalidArgument, "five-number summary of an empty sample");
  Eigen::Array<Scalar, Eigen::Dynamic, 1> sorted = values.derived().reshaped();
  std::sort(sorted.begin(), sorted.end());
  return {sorted(0), sorted_quantile(sorted, 0.25), sorted_quantile(sorted, 0.5), sorted_quantile(sorted, 0.75),
          sorted(sorted.size() - 1)};
}

/// Pearson correlation; nullopt when fewer than two samples or either variable is constant.
template <typename DerivedX, typename DerivedY>
std::optional<double> pearson(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "pearson: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const Eigen::ArrayXd xc = x.derived().template cast<double>().reshaped().array() - x.derived().template cast<double>().mean();
  const Eigen::ArrayXd yc = y.derived().template cast<double>().reshaped().array() - y.derived().template cast<double>().mean();
  const double sxx = xc.square().sum();
  const double syy = yc.square().sum();
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp((xc * yc).sum() / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// 1-based ranks; tied values share the average of their positions.
Eigen::ArrayXd average_ranks(const Eigen::Ref<const Eigen::ArrayXd>& values);

/// Spearman's rho: Pearson over average ranks.
template <typename DerivedX, typename DerivedY>
std::optional<double> spearman(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  const Eigen::ArrayXd xs = x.derived().template cast<double>().reshaped();
  const Eigen::ArrayXd ys = y.derived().template cast<double>().reshaped();
  return pearson(average_ranks(xs), average_ranks(ys));
}

struct BinSummary {
  int bin_index = 0;
  std::string label;
  std::size_t count = 0;
  std::optional<FiveNumberSummary<double>> stats;  // present iff count >= 1
};

struct TrendReport {
  std::array<BinSummary, 4> bins;
  std::size_t n = 0;
  std::optional<double> pearson_r;
  std::optional<double> spearman_rho;
  std::string correlation_note;  // why correlations are missing, if they are
};

/// Bins pairs by satellite cloudiness and summarizes camera coverage per bin.
TrendReport trend_report(const std::vector<MatchedPair>& pairs, const BinSpec& spec);

void write_trend_csv(const std::filesystem::path& path, const TrendReport& report);
void write_correlation_txt(const std::filesystem::path& path, const TrendReport& report);
/// Four-box boxplot with whiskers at min/max.
void write_trend_svg(const std::filesystem::path& path, const TrendReport& report);

}  // namespace skycloud
