#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "skycloud/timeutil.hpp"

namespace skycloud {

enum class Source { Camera, Satellite };

/// A timestamped cloud percentage from one observing system.
struct Observation {
  Source source = Source::Camera;
  Timestamp at{};
  double value = 0.0;   // percent, [0,100]
  std::string origin;   // image or grid path
  int valid_count = 0;  // satellite only: contributing grid cells

  static Observation camera(Timestamp at, double coverage, std::string image_path = {});
  static Observation satellite(Timestamp at, double cloudiness, int valid_count, std::string grid_path = {});
};

/// Time-ordered, duplicate-free sequence of observations. Immutable after build.
class Catalog {
 public:
  Catalog() = default;

  const std::vector<Observation>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t duplicates_dropped() const { return duplicates_; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  friend Catalog build_catalog(std::vector<Observation> observations);
  std::vector<Observation> entries_;
  std::size_t duplicates_ = 0;
};

/// Sorts ascending by time. Entries sharing source and timestamp collapse to
/// the first one given; the rest are counted in duplicates_dropped().
/// Throws Error(InvalidArgument) for values outside [0,100].
Catalog build_catalog(std::vector<Observation> observations);

inline constexpr std::chrono::seconds kDefaultMaxDelta{300};

struct MatchedPair {
  Observation satellite;
  Observation camera;
  std::chrono::seconds delta{};  // camera minus satellite
};

/// Camera entry of `cameras` closest in time to `satellite`; equal distances
/// resolve to the earlier frame. Throws Error(EmptyCatalog | NoMatchInWindow).
MatchedPair match_nearest(const Observation& satellite, const Catalog& cameras, std::chrono::seconds max_delta);

struct Unmatched {
  Timestamp at{};
  std::string reason;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::vector<Unmatched> unmatched;
};

/// Runs match_nearest for every satellite entry, in satellite time order.
MatchResult match_all(const Catalog& satellites, const Catalog& cameras, std::chrono::seconds max_delta);

void write_pairs_csv(const std::filesystem::path& path, const std::vector<MatchedPair>& pairs);
void write_unmatched_csv(const std::filesystem::path& path, const std::vector<Unmatched>& unmatched);

}  // namespace skycloud
