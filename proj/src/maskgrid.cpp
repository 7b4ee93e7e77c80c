#include "skycloud/maskgrid.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "skycloud/error.hpp"

namespace skycloud {

Normalization parse_normalization(const std::string& name) {
  if (name == "linear") return Normalization::Linear;
  if (name == "confidence") return Normalization::Confidence;
  throw Error(ErrorKind::InvalidArgument, "unknown normalization '" + name + "' (linear|confidence)");
}

std::string to_string(Normalization mode) { return mode == Normalization::Linear ? "linear" : "confidence"; }

double decode_clear_confidence(MaskCode code) {
  switch (code.raw()) {
    case 192: return 98.0;
    case 128: return 92.0;
    case 64: return 60.0;
    case 0: return 0.0;
    default: throw Error(ErrorKind::InvalidCode, "invalid mask code has no clear-sky confidence");
  }
}

NormalizedCloudiness::NormalizedCloudiness(double percent) : value_(percent) {
  if (!(percent >= 0.0 && percent <= 100.0)) {
    throw Error(ErrorKind::InvalidArgument, "cloudiness " + std::to_string(percent) + " outside [0,100]");
  }
}

NormalizedCloudiness normalize_code(MaskCode code, Normalization mode) {
  if (!code.valid()) throw Error(ErrorKind::InvalidCode, "cannot normalize an invalid mask code");
  if (mode == Normalization::Confidence) return NormalizedCloudiness(100.0 - decode_clear_confidence(code));
  return NormalizedCloudiness((192.0 - code.raw()) * 100.0 / 192.0);
}

std::array<double, 4> normalized_levels(Normalization mode) {
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < kMaskLevels.size(); ++i) {
    out[i] = normalize_code(kMaskLevels[kMaskLevels.size() - 1 - i], mode).value();
  }
  return out;
}

void validate(const CloudMaskGrid& grid) {
  if (grid.rows() < 1 || grid.cols() < 1) throw Error(ErrorKind::DimensionMismatch, "grid has no cells");
  if (grid.lat.rows() != grid.rows() || grid.lat.cols() != grid.cols() || grid.lon.rows() != grid.rows() ||
      grid.lon.cols() != grid.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "code/lat/lon arrays differ in shape");
  }
  if (!((grid.lat >= -90.0) && (grid.lat <= 90.0)).all()) {
    throw Error(ErrorKind::Format, "latitude outside [-90,90]");
  }
  if (!((grid.lon >= -180.0) && (grid.lon <= 180.0)).all()) {
    throw Error(ErrorKind::Format, "longitude outside [-180,180]");
  }
  for (Eigen::Index i = 0; i < grid.codes.size(); ++i) {
    const auto raw = grid.codes.data()[i];
    if (raw != MaskCode::kInvalid && !MaskCode::is_level(raw)) {
      throw Error(ErrorKind::Format, "grid holds non-canonical code " + std::to_string(raw));
    }
  }
}

// ---- CMG1 parsing -----------------------------------------------------------

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next line without its terminator; nullopt at end of input.
  std::optional<std::string> next() {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  std::string expect(const char* what) {
    auto line = next();
    if (!line) fail(ErrorKind::DimensionMismatch, std::string("unexpected end of file, expected ") + what);
    return *line;
  }

  [[noreturn]] void fail(ErrorKind kind, const std::string& msg) const {
    throw Error(kind, source_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& value) {
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

template <typename T, typename OnCell>
void read_section(LineReader& reader, const char* name, Eigen::Index rows, Eigen::Index cols, OnCell on_cell) {
  const std::string header = std::string("section ") + name;
  if (reader.expect(header.c_str()) != header) reader.fail(ErrorKind::Format, "expected '" + header + "'");
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string line = reader.expect("grid row");
    const auto toks = tokens(line);
    if (!toks.empty() && toks.front() == "section") {
      reader.fail(ErrorKind::DimensionMismatch, std::string("section '") + name + "' has " + std::to_string(r) +
                                                    " rows, header declares " + std::to_string(rows));
    }
    if (static_cast<Eigen::Index>(toks.size()) != cols) {
      reader.fail(ErrorKind::DimensionMismatch, "row has " + std::to_string(toks.size()) + " values, expected " +
                                                    std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      T value{};
      if (!parse_number(toks[static_cast<std::size_t>(c)], value)) {
        reader.fail(ErrorKind::Format, "non-numeric cell '" + std::string(toks[static_cast<std::size_t>(c)]) + "'");
      }
      on_cell(r, c, value);
    }
  }
}

}  // namespace

CmgParseResult parse_cmg(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  if (reader.expect("magic") != "CMG1") reader.fail(ErrorKind::Format, "bad magic (expected 'CMG1')");

  CmgParseResult result;
  CloudMaskGrid& grid = result.grid;

  const std::string time_line = reader.expect("time line");
  if (time_line.rfind("time ", 0) != 0) reader.fail(ErrorKind::Format, "expected 'time <UTC>'");
  grid.observed_at = parse_iso_utc(std::string_view(time_line).substr(5));

  const auto dims = tokens(reader.expect("dims line"));
  long rows = 0, cols = 0;
  if (dims.size() != 3 || dims[0] != "dims" || !parse_number(dims[1], rows) || !parse_number(dims[2], cols)) {
    reader.fail(ErrorKind::Format, "expected 'dims <rows> <cols>'");
  }
  if (rows < 1 || cols < 1) reader.fail(ErrorKind::DimensionMismatch, "dims must be positive");

  grid.codes.resize(rows, cols);
  grid.lat.resize(rows, cols);
  grid.lon.resize(rows, cols);

  read_section<long>(reader, "codes", rows, cols, [&](Eigen::Index r, Eigen::Index c, long raw) {
    const MaskCode code = MaskCode::from_raw(raw);
    if (!code.valid() && raw != MaskCode::kInvalid) ++result.unknown_codes;
    grid.codes(r, c) = code.raw();
  });
  read_section<double>(reader, "lat", rows, cols, [&](Eigen::Index r, Eigen::Index c, double v) {
    if (!(v >= -90.0 && v <= 90.0)) reader.fail(ErrorKind::Format, "latitude out of range");
    grid.lat(r, c) = v;
  });
  read_section<double>(reader, "lon", rows, cols, [&](Eigen::Index r, Eigen::Index c, double v) {
    if (!(v >= -180.0 && v <= 180.0)) reader.fail(ErrorKind::Format, "longitude out of range");
    grid.lon(r, c) = v;
  });

  while (auto extra = reader.next()) {
    if (!tokens(*extra).empty()) reader.fail(ErrorKind::DimensionMismatch, "trailing content after lon section");
  }
  return result;
}

CmgParseResult parse_cmg(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return parse_cmg(in, path.string());
}

namespace {

template <typename Derived, typename Format>
void emit_section(std::ostream& out, const char* name, const Eigen::DenseBase<Derived>& values, Format fmt) {
  out << "section " << name << '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c > 0) out << ' ';
      out << fmt(values(r, c));
    }
    out << '\n';
  }
}

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void emit_cmg(std::ostream& out, const CloudMaskGrid& grid) {
  validate(grid);
  out << "CMG1\n";
  out << "time " << format_iso_utc(grid.observed_at) << '\n';
  out << "dims " << grid.rows() << ' ' << grid.cols() << '\n';
  emit_section(out, "codes", grid.codes, [](std::int16_t v) { return std::to_string(v); });
  emit_section(out, "lat", grid.lat, fixed6);
  emit_section(out, "lon", grid.lon, fixed6);
}

void write_cmg(const std::filesystem::path& path, const CloudMaskGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  emit_cmg(out, grid);
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

// ---- spatial queries --------------------------------------------------------

PixelIndex nearest_pixel(const CloudMaskGrid& grid, const GeoPoint& site) {
  if (!in_range(site)) throw Error(ErrorKind::InvalidArgument, "query coordinate out of range");
  if (grid.rows() < 1 || grid.cols() < 1) throw Error(ErrorKind::InvalidArgument, "grid is empty");

  const Plane<double> dist = grid.lat.binaryExpr(
      grid.lon, [&site](double lat, double lon) { return haversine_km(site.lat, site.lon, lat, lon); });
  // Row-major storage makes the linear scan order row-then-column, so the first
  // strict minimum is the tie-break winner.
  PixelIndex best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < dist.rows(); ++r) {
    for (Eigen::Index c = 0; c < dist.cols(); ++c) {
      if (dist(r, c) < best_dist) {
        best_dist = dist(r, c);
        best = {r, c};
      }
    }
  }
  return best;
}

NeighborhoodAverage neighborhood_average(const CloudMaskGrid& grid, PixelIndex center, int k, Normalization mode) {
  if (k < 1 || k % 2 == 0) throw Error(ErrorKind::InvalidArgument, "neighbourhood size must be odd and >= 1");
  if (center.row < 0 || center.row >= grid.rows() || center.col < 0 || center.col >= grid.cols()) {
    throw Error(ErrorKind::InvalidArgument, "centre pixel outside the grid");
  }
  const Eigen::Index half = k / 2;
  const Eigen::Index r0 = std::max<Eigen::Index>(0, center.row - half);
  const Eigen::Index c0 = std::max<Eigen::Index>(0, center.col - half);
  const Eigen::Index r1 = std::min<Eigen::Index>(grid.rows() - 1, center.row + half);
  const Eigen::Index c1 = std::min<Eigen::Index>(grid.cols() - 1, center.col + half);

  const auto window = grid.codes.block(r0, c0, r1 - r0 + 1, c1 - c0 + 1);
  const Plane<bool> valid = window != MaskCode::kInvalid;
  const Plane<double> cloudiness = window.unaryExpr([mode](std::int16_t raw) {
    const MaskCode code = MaskCode::from_raw(raw);
    return code.valid() ? normalize_code(code, mode).value() : 0.0;
  });

  const auto count = valid.count();
  if (count == 0) {
    throw Error(ErrorKind::NoValidSatelliteData,
                "no valid satellite data in " + std::to_string(k) + "x" + std::to_string(k) + " window");
  }
  NeighborhoodAverage out;
  out.center = center;
  out.k = k;
  out.valid_count = static_cast<int>(count);
  // Clamp guards the last-ulp drift of a mean of values already in [0,100].
  const double mean = valid.select(cloudiness, 0.0).sum() / static_cast<double>(count);
  out.mean_cloudiness = NormalizedCloudiness(std::clamp(mean, 0.0, 100.0));
  return out;
}

// ---- rendering --------------------------------------------------------------

Rgb mask_color(MaskCode code) {
  switch (code.raw()) {
    case 192: return {0, 0, 255};
    case 128: return {0, 200, 0};
    case 64: return {255, 0, 0};
    case 0: return {128, 128, 128};
    default: return {0, 0, 0};
  }
}

RgbRaster render_mask(const CloudMaskGrid& grid, std::optional<GeoPoint> marker) {
  RgbRaster raster(grid.rows(), grid.cols());
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      const Rgb color = mask_color(grid.code(r, c));
      raster.set(r, c, color.r, color.g, color.b);
    }
  }
  if (marker) {
    const PixelIndex px = nearest_pixel(grid, *marker);
    raster.set(px.row, px.col, kMarkerColor.r, kMarkerColor.g, kMarkerColor.b);
  }
  return raster;
}

void render_mask(const CloudMaskGrid& grid, const std::filesystem::path& out, std::optional<GeoPoint> marker) {
  write_ppm(out, render_mask(grid, marker));
}

}  // namespace skycloud
