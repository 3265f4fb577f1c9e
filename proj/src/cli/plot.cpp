#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "bvi/cli.hpp"

namespace bvi::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const std::string& x_label) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i]) || !std::isfinite(s.x[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, std::log10(s.y[i]));
      y_hi = std::max(y_hi, std::log10(s.y[i]));
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0;
    x_hi = 1.0;
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (x_hi == x_lo) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  double d_lo = std::floor(y_lo), d_hi = std::ceil(y_hi);
  if (d_hi == d_lo) {
    d_lo -= 1.0;
    d_hi += 1.0;
  }

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double ly) { return kTop + (d_hi - ly) / (d_hi - d_lo) * ph; };

  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      kWidth, kHeight, kWidth, kHeight);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", kWidth, kHeight);
  svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                     kLeft, kTop, pw, ph);

  const int decades = static_cast<int>(d_hi - d_lo);
  const int step = std::max(1, decades / 8);
  for (int e = static_cast<int>(d_lo); e <= static_cast<int>(d_hi); e += step) {
    const double y = py(e);
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n", kLeft, y,
                       kLeft + pw, y);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">1e{}</text>\n", kLeft - 6.0, y + 4.0, e);
  }
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_lo + (x_hi - x_lo) * t / 4.0;
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:g}</text>\n", px(xv),
                       kTop + ph + 16.0, xv);
  }
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2.0,
                     kHeight - 10.0, escape(x_label));

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i]) || !std::isfinite(s.x[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", px(s.x[i]), py(std::log10(s.y[i])));
    }
    if (!pts.empty()) {
      svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color, pts);
    }
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
    const double lx = kLeft + pw + 12.0;
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                       lx, ly, lx + 20.0, ly, color);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", lx + 26.0, ly + 4.0,
                       escape(pts.empty() ? s.label + " (no positive values)" : s.label));
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<Series> read_csv_series(const std::vector<std::filesystem::path>& csvs,
                                    const std::vector<std::string>& columns) {
  if (csvs.empty()) throw InvalidArgument("plot: no CSV files given");
  if (columns.empty()) throw InvalidArgument("plot: no columns given");
  std::vector<Series> out;
  for (const auto& path : csvs) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument(fmt::format("plot: cannot read '{}'", path.string()));
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument(fmt::format("plot: '{}' is empty", path.string()));
    const auto header = split_line(line);
    auto index_of = [&](const std::string& name) {
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw InvalidArgument(fmt::format("plot: column '{}' not in '{}'", name, path.string()));
      return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t x_col = index_of("iter");
    std::vector<std::size_t> cols;
    for (const auto& c : columns) cols.push_back(index_of(c));

    std::vector<Series> local;
    for (const auto& c : columns) {
      local.push_back({csvs.size() > 1 ? path.stem().string() + ":" + c : c, {}, {}});
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto fields = split_line(line);
      if (fields.size() != header.size()) {
        throw InvalidArgument(fmt::format("plot: malformed row in '{}'", path.string()));
      }
      const double x = std::stod(fields[x_col]);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const std::string& f = fields[cols[k]];
        if (f.empty()) continue;
        local[k].x.push_back(x);
        local[k].y.push_back(std::stod(f));
      }
    }
    out.insert(out.end(), local.begin(), local.end());
  }
  return out;
}

int run_plot(const std::vector<std::filesystem::path>& csvs, const std::vector<std::string>& columns,
             const std::filesystem::path& svg_path, std::ostream& out, std::ostream& err) {
  std::string svg;
  try {
    svg = render_svg(read_csv_series(csvs, columns), "iteration");
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }
  const auto target = resolve_output(svg_path);
  try {
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream f(target, std::ios::binary | std::ios::trunc);
    if (!f || !(f << svg) || !f.flush()) throw std::runtime_error("write failed");
  } catch (const std::exception& e) {
    err << fmt::format("plot: cannot write '{}': {}\n", target.string(), e.what());
    return 2;
  }
  out << fmt::format("wrote {}\n", target.string());
  return 0;
}

}  // namespace bvi::cli
