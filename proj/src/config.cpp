#include "skycloud/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>

#include "skycloud/error.hpp"

namespace skycloud {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T number(const KeyValues& kv, const std::string& key) {
  const std::string& text = kv.at(key);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::Format, "config key '" + key + "': '" + text + "' is not a number");
  }
  return value;
}

bool boolean(const KeyValues& kv, const std::string& key) {
  const std::string& v = kv.at(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorKind::Format, "config key '" + key + "': expected true/false");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void validate(const PipelineConfig& c) {
  if (!in_range(c.site)) throw Error(ErrorKind::InvalidArgument, "site coordinates out of range");
  if (c.k < 1 || c.k % 2 == 0) throw Error(ErrorKind::InvalidArgument, "mask.k must be odd and >= 1");
  if (!(c.threshold > 0.0)) throw Error(ErrorKind::InvalidArgument, "seg.threshold must be > 0");
  if (c.max_delta.count() <= 0) throw Error(ErrorKind::InvalidArgument, "match.max_delta_s must be > 0");
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Format, source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path.string() + "'");
  return parse_key_values(in, path.string());
}

RoiSpec roi_from(const KeyValues& kv) {
  const bool has_circle = kv.count("roi.cx") || kv.count("roi.cy") || kv.count("roi.r");
  if (const auto it = kv.find("roi"); it != kv.end()) {
    if (it->second != "full") throw Error(ErrorKind::Format, "roi must be 'full' or given via roi.cx/roi.cy/roi.r");
    if (has_circle) throw Error(ErrorKind::Format, "roi=full conflicts with roi.cx/roi.cy/roi.r");
    return RoiSpec::full_frame();
  }
  if (!has_circle) return RoiSpec::full_frame();
  for (const char* key : {"roi.cx", "roi.cy", "roi.r"}) {
    if (!kv.count(key)) throw Error(ErrorKind::Format, std::string("circular ROI is missing '") + key + "'");
  }
  return RoiSpec::circle(number<double>(kv, "roi.cx"), number<double>(kv, "roi.cy"), number<double>(kv, "roi.r"));
}

void apply_config(PipelineConfig& c, const KeyValues& kv, const std::filesystem::path& base) {
  static const std::set<std::string> known = {
      "camera.manifest", "grid.dir", "site.lat", "site.lon", "roi", "roi.cx", "roi.cy", "roi.r",
      "seg.threshold", "mask.normalization", "mask.k", "match.max_delta_s", "bins.mode", "out.dir",
      "out.render", "out.svg"};
  for (const auto& [key, value] : kv) {
    if (!known.count(key)) throw Error(ErrorKind::Format, "unknown config key '" + key + "'");
  }
  const auto path_of = [&](const std::string& key) {
    std::filesystem::path p = kv.at(key);
    return p.is_relative() && !base.empty() ? base / p : p;
  };
  if (kv.count("camera.manifest")) c.camera_manifest = path_of("camera.manifest");
  if (kv.count("grid.dir")) c.grid_dir = path_of("grid.dir");
  if (kv.count("out.dir")) c.out_dir = path_of("out.dir");
  if (kv.count("site.lat")) c.site.lat = number<double>(kv, "site.lat");
  if (kv.count("site.lon")) c.site.lon = number<double>(kv, "site.lon");
  if (kv.count("roi") || kv.count("roi.cx") || kv.count("roi.cy") || kv.count("roi.r")) c.roi = roi_from(kv);
  if (kv.count("seg.threshold")) c.threshold = number<double>(kv, "seg.threshold");
  if (kv.count("mask.normalization")) c.normalization = parse_normalization(kv.at("mask.normalization"));
  if (kv.count("mask.k")) c.k = number<int>(kv, "mask.k");
  if (kv.count("match.max_delta_s")) c.max_delta = std::chrono::seconds{number<long>(kv, "match.max_delta_s")};
  if (kv.count("bins.mode")) c.bin_mode = parse_bin_mode(kv.at("bins.mode"));
  if (kv.count("out.render")) c.render = boolean(kv, "out.render");
  if (kv.count("out.svg")) c.svg = boolean(kv, "out.svg");
}

void write_config(const std::filesystem::path& path, const PipelineConfig& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write config '" + path.string() + "'");
  out << "camera.manifest = " << c.camera_manifest.generic_string() << '\n';
  out << "grid.dir = " << c.grid_dir.generic_string() << '\n';
  out << "site.lat = " << fixed(c.site.lat, 6) << '\n';
  out << "site.lon = " << fixed(c.site.lon, 6) << '\n';
  if (c.roi.shape == RoiSpec::Shape::FullFrame) {
    out << "roi = full\n";
  } else {
    out << "roi.cx = " << fixed(c.roi.cx, 3) << '\n';
    out << "roi.cy = " << fixed(c.roi.cy, 3) << '\n';
    out << "roi.r = " << fixed(c.roi.radius, 3) << '\n';
  }
  out << "seg.threshold = " << fixed(c.threshold, 6) << '\n';
  out << "mask.normalization = " << to_string(c.normalization) << '\n';
  out << "mask.k = " << c.k << '\n';
  out << "match.max_delta_s = " << c.max_delta.count() << '\n';
  out << "bins.mode = " << to_string(c.bin_mode) << '\n';
  out << "out.dir = " << c.out_dir.generic_string() << '\n';
}

}  // namespace skycloud
