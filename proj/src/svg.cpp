#include "brng/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "brng/error.hpp"

namespace brng::svg {
namespace {

constexpr int kLeft = 70, kRight = 20, kTop = 36, kBottom = 50;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi <= lo) {
      const double pad = lo == 0 ? 0.5 : std::abs(lo) * 0.05;
      lo -= pad;
      hi += pad;
    }
  }
};

void header(std::ostringstream& os, const Axes& a) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << a.width << "\" height=\""
     << a.height << "\" viewBox=\"0 0 " << a.width << ' ' << a.height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << a.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
     << esc(a.title) << "</text>\n"
     << "<text x=\"" << a.width / 2 << "\" y=\"" << a.height - 10
     << "\" text-anchor=\"middle\">" << esc(a.xlabel) << "</text>\n"
     << "<text transform=\"translate(14," << a.height / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << esc(a.ylabel) << "</text>\n";
}

void frame(std::ostringstream& os, const Axes& a, const Range& xr, const Range& yr, bool log_y) {
  const int pw = a.width - kLeft - kRight, ph = a.height - kTop - kBottom;
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = i / 4.0;
    const double px = kLeft + fx * pw, py = kTop + ph - fx * ph;
    const double xv = xr.lo + fx * (xr.hi - xr.lo);
    double yv = yr.lo + fx * (yr.hi - yr.lo);
    if (log_y) yv = std::pow(10.0, yv);
    os << "<text x=\"" << px << "\" y=\"" << kTop + ph + 15 << "\" text-anchor=\"middle\">"
       << num(xv) << "</text>\n"
       << "<text x=\"" << kLeft - 4 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << num(yv)
       << "</text>\n";
  }
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const Axes& axes) {
  Range xr, yr;
  auto ty = [&](double v) { return axes.log_y ? (v > 0 ? std::log10(v) : NAN) : v; };
  for (const auto& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(ty(v));
  }
  xr.finish();
  yr.finish();
  const int pw = axes.width - kLeft - kRight, ph = axes.height - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double v) { return kTop + ph - (ty(v) - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  header(os, axes);
  frame(os, axes, xr, yr, axes.log_y);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(ty(s.y[i]))) continue;
      os << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
    }
    os << "\"/>\n";
    if (s.markers) {
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!std::isfinite(ty(s.y[i]))) continue;
        os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
           << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    if (!s.label.empty()) {
      os << "<text x=\"" << axes.width - kRight - 6 << "\" y=\"" << kTop + 14 + 14 * k
         << "\" text-anchor=\"end\" fill=\"" << color << "\">" << esc(s.label) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string heatmap(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& values, const std::vector<unsigned char>& valid,
                    const Axes& axes) {
  if (values.size() != x.size() * y.size()) throw DomainError("heatmap: size mismatch");
  Range vr, xr, yr;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (valid.empty() || valid[i]) vr.add(values[i]);
  }
  vr.finish();
  for (double v : x) xr.add(v);
  for (double v : y) yr.add(v);
  xr.finish();
  yr.finish();
  const int pw = axes.width - kLeft - kRight, ph = axes.height - kTop - kBottom;
  const double cw = static_cast<double>(pw) / std::max<std::size_t>(x.size(), 1);
  const double ch = static_cast<double>(ph) / std::max<std::size_t>(y.size(), 1);

  std::ostringstream os;
  header(os, axes);
  for (std::size_t j = 0; j < y.size(); ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const std::size_t k = j * x.size() + i;
      std::string fill = "#bbbbbb";
      if ((valid.empty() || valid[k]) && std::isfinite(values[k])) {
        // blue (low) to red (high)
        const double f = (values[k] - vr.lo) / (vr.hi - vr.lo);
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 * f),
                      static_cast<int>(60 + 80 * (1 - std::abs(2 * f - 1))),
                      static_cast<int>(255 * (1 - f)));
        fill = buf;
      }
      os << "<rect x=\"" << num(kLeft + i * cw) << "\" y=\"" << num(kTop + ph - (j + 1) * ch)
         << "\" width=\"" << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5) << "\" fill=\""
         << fill << "\"><title>" << num(values[k]) << "</title></rect>\n";
    }
  }
  frame(os, axes, xr, yr, false);
  os << "<text x=\"" << axes.width - kRight << "\" y=\"" << kTop - 6
     << "\" text-anchor=\"end\">range " << num(vr.lo) << " .. " << num(vr.hi) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string log_bars(const std::vector<std::string>& labels, const std::vector<double>& values,
                     double threshold, const Axes& axes) {
  const int left = 190;
  const int pw = axes.width - left - kRight, ph = axes.height - kTop - kBottom;
  const double lo = -4.0, hi = 0.0;
  auto px = [&](double v) {
    const double l = std::clamp(v > 0 ? std::log10(v) : lo, lo, hi);
    return left + (l - lo) / (hi - lo) * pw;
  };
  std::ostringstream os;
  header(os, axes);
  const double bh = static_cast<double>(ph) / std::max<std::size_t>(labels.size(), 1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double y = kTop + i * bh;
    const bool pass = values[i] > threshold;
    os << "<rect x=\"" << left << "\" y=\"" << num(y + 2) << "\" width=\""
       << num(px(values[i]) - left) << "\" height=\"" << num(bh - 4) << "\" fill=\""
       << (pass ? "#2ca02c" : "#d62728") << "\"/>\n"
       << "<text x=\"" << left - 4 << "\" y=\"" << num(y + bh / 2 + 4) << "\" text-anchor=\"end\">"
       << esc(labels[i]) << "</text>\n";
  }
  os << "<line x1=\"" << num(px(threshold)) << "\" x2=\"" << num(px(threshold)) << "\" y1=\""
     << kTop << "\" y2=\"" << kTop + ph << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
  for (int e = -4; e <= 0; ++e) {
    os << "<text x=\"" << num(px(std::pow(10.0, e))) << "\" y=\"" << kTop + ph + 15
       << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write(const std::filesystem::path& path, const std::string& svg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << svg;
}

}  // namespace brng::svg
