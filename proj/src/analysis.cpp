#include "skycloud/analysis.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>

namespace skycloud {

BinSpec BinSpec::nearest_level(Normalization mode) {
  const auto levels = normalized_levels(mode);
  BinSpec spec;
  for (std::size_t i = 0; i < spec.edges.size(); ++i) spec.edges[i] = 0.5 * (levels[i] + levels[i + 1]);
  spec.labels = {"code192", "code128", "code64", "code0"};
  return spec;
}

BinSpec BinSpec::equal_width() { return {{25.0, 50.0, 75.0}, {"0-25", "25-50", "50-75", "75-100"}}; }

void validate(const BinSpec& spec) {
  double prev = 0.0;
  for (double e : spec.edges) {
    if (!(e > prev && e < 100.0)) {
      throw Error(ErrorKind::InvalidArgument, "bin edges must be strictly increasing inside (0,100)");
    }
    prev = e;
  }
}

BinMode parse_bin_mode(const std::string& name) {
  if (name == "level") return BinMode::NearestLevel;
  if (name == "equal") return BinMode::EqualWidth;
  throw Error(ErrorKind::InvalidArgument, "unknown bin mode '" + name + "' (level|equal)");
}

std::string to_string(BinMode mode) { return mode == BinMode::NearestLevel ? "level" : "equal"; }

BinSpec make_bin_spec(BinMode mode, Normalization normalization) {
  return mode == BinMode::NearestLevel ? BinSpec::nearest_level(normalization) : BinSpec::equal_width();
}

int assign_bin(const BinSpec& spec, double cloudiness) {
  if (!(cloudiness >= 0.0 && cloudiness <= 100.0)) {
    throw Error(ErrorKind::InvalidArgument, "cloudiness outside [0,100]");
  }
  int bin = 0;
  for (double e : spec.edges) {
    if (cloudiness >= e) ++bin;
  }
  return bin;
}

Eigen::ArrayXd average_ranks(const Eigen::Ref<const Eigen::ArrayXd>& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
  Eigen::ArrayXd ranks(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && values(order[static_cast<std::size_t>(j + 1)]) == values(order[static_cast<std::size_t>(i)])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index t = i; t <= j; ++t) ranks(order[static_cast<std::size_t>(t)]) = avg;
    i = j + 1;
  }
  return ranks;
}

TrendReport trend_report(const std::vector<MatchedPair>& pairs, const BinSpec& spec) {
  validate(spec);
  TrendReport report;
  report.n = pairs.size();

  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::ArrayXd satellite(n), camera(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    satellite(i) = pairs[static_cast<std::size_t>(i)].satellite.value;
    camera(i) = pairs[static_cast<std::size_t>(i)].camera.value;
  }

  std::array<std::vector<double>, 4> members;
  for (Eigen::Index i = 0; i < n; ++i) members[static_cast<std::size_t>(assign_bin(spec, satellite(i)))].push_back(camera(i));
  for (std::size_t b = 0; b < members.size(); ++b) {
    BinSummary& s = report.bins[b];
    s.bin_index = static_cast<int>(b);
    s.label = spec.labels[b];
    s.count = members[b].size();
    if (!members[b].empty()) {
      s.stats = five_number_summary(Eigen::Map<const Eigen::ArrayXd>(members[b].data(), static_cast<Eigen::Index>(members[b].size())));
    }
  }

  if (n < 2) {
    report.correlation_note = "fewer than 2 pairs";
    return report;
  }
  report.pearson_r = pearson(satellite, camera);
  report.spearman_rho = spearman(satellite, camera);
  if (!report.pearson_r || !report.spearman_rho) report.correlation_note = "zero variance";
  return report;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_trend_csv(const std::filesystem::path& path, const TrendReport& report) {
  auto out = open_out(path);
  out << "bin,label,count,min,q1,median,q3,max\n";
  for (const auto& b : report.bins) {
    out << b.bin_index << ',' << b.label << ',' << b.count;
    if (b.stats) {
      for (double v : {b.stats->min, b.stats->q1, b.stats->median, b.stats->q3, b.stats->max}) out << ',' << fixed(v, 6);
    } else {
      out << ",,,,,";
    }
    out << '\n';
  }
}

void write_correlation_txt(const std::filesystem::path& path, const TrendReport& report) {
  auto out = open_out(path);
  const auto show = [](const std::optional<double>& v) { return v ? fixed(*v, 6) : std::string("NA"); };
  out << "n=" << report.n << " pearson=" << show(report.pearson_r) << " spearman=" << show(report.spearman_rho);
  if (!report.correlation_note.empty()) out << " reason=\"" << report.correlation_note << '"';
  out << '\n';
}

void write_trend_svg(const std::filesystem::path& path, const TrendReport& report) {
  constexpr double kWidth = 480, kHeight = 360, kLeft = 50, kTop = 20, kPlotH = 300, kSlot = 100, kBox = 50;
  const auto y_of = [&](double v) { return fixed(kTop + kPlotH * (1.0 - v / 100.0), 2); };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + kPlotH
      << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 100; tick += 25) {
    out << "<text x=\"" << kLeft - 30 << "\" y=\"" << y_of(tick) << "\" font-size=\"10\">" << tick << "</text>\n";
  }
  for (const auto& b : report.bins) {
    const double cx = kLeft + kSlot * (b.bin_index + 0.5);
    const std::string x0 = fixed(cx - kBox / 2, 2), x1 = fixed(cx + kBox / 2, 2), xc = fixed(cx, 2);
    out << "<text x=\"" << fixed(cx - 25, 2) << "\" y=\"" << kTop + kPlotH + 20 << "\" font-size=\"10\">" << b.label
        << " (n=" << b.count << ")</text>\n";
    if (!b.stats) continue;
    const auto& s = *b.stats;
    out << "<line x1=\"" << xc << "\" y1=\"" << y_of(s.max) << "\" x2=\"" << xc << "\" y2=\"" << y_of(s.q3)
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << xc << "\" y1=\"" << y_of(s.q1) << "\" x2=\"" << xc << "\" y2=\"" << y_of(s.min)
        << "\" stroke=\"black\"/>\n";
    for (double w : {s.min, s.max}) {
      out << "<line x1=\"" << fixed(cx - kBox / 4, 2) << "\" y1=\"" << y_of(w) << "\" x2=\"" << fixed(cx + kBox / 4, 2)
          << "\" y2=\"" << y_of(w) << "\" stroke=\"black\"/>\n";
    }
    out << "<rect x=\"" << x0 << "\" y=\"" << y_of(s.q3) << "\" width=\"" << fixed(kBox, 2) << "\" height=\""
        << fixed(kPlotH * (s.q3 - s.q1) / 100.0, 2) << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << x0 << "\" y1=\"" << y_of(s.median) << "\" x2=\"" << x1 << "\" y2=\"" << y_of(s.median)
        << "\" stroke=\"red\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace skycloud
