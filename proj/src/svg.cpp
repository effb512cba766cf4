#include "dimerlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dimerlab/errors.hpp"
#include "dimerlab/io.hpp"

namespace dimerlab {

namespace {

constexpr double kW = 720, kH = 480;
constexpr double kL = 80, kR = 20, kT = 40, kB = 60;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double map(double v, double a, double b) const {
    double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (int e = int(std::ceil(lo)); e <= int(std::floor(hi)); ++e)
        out.push_back(std::pow(10.0, e));
      if (out.empty()) out = {std::pow(10.0, lo), std::pow(10.0, hi)};
      return out;
    }
    const double span = hi - lo;
    if (span <= 0) return {lo};
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (mag * m >= raw) { step = mag * m; break; }
    for (double v = std::ceil(lo / step) * step; v <= hi + 0.5 * step; v += step)
      out.push_back(v);
    return out;
  }
};

std::string tick_label(double v, bool log) {
  std::ostringstream ss;
  if (log) {
    const int e = int(std::lround(std::log10(v)));
    ss << "1e" << e;
  } else {
    ss << fmt_num(std::abs(v) < 1e-12 ? 0.0 : v);
  }
  return ss.str();
}

}  // namespace

LinePlot::LinePlot(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)), xlabel_(std::move(xlabel)),
      ylabel_(std::move(ylabel)) {}

void LinePlot::add_series(const std::string& name, const std::vector<double>& x,
                          const std::vector<double>& y, bool dashed) {
  if (x.size() != y.size())
    throw invariant_error("plot series '" + name + "' has mismatched lengths");
  series_.push_back({name, x, y, dashed});
}

void LinePlot::write(const std::string& path) const {
  Axis ax, ay;
  ax.log = log_x_;
  ay.log = log_y_;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& s : series_)
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double xv = s.x[i], yv = s.y[i];
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      if (log_x_ && xv <= 0) continue;
      if (log_y_ && yv <= 0) continue;
      xlo = std::min(xlo, xv); xhi = std::max(xhi, xv);
      ylo = std::min(ylo, yv); yhi = std::max(yhi, yv);
    }
  if (!(xlo <= xhi)) { xlo = log_x_ ? 1 : 0; xhi = log_x_ ? 10 : 1; }
  if (!(ylo <= yhi)) { ylo = log_y_ ? 1 : 0; yhi = log_y_ ? 10 : 1; }
  if (log_x_) { ax.lo = std::log10(xlo); ax.hi = std::log10(xhi); }
  else { ax.lo = xlo; ax.hi = xhi; }
  if (log_y_) { ay.lo = std::log10(ylo); ay.hi = std::log10(yhi); }
  else { ay.lo = ylo; ay.hi = yhi; }
  if (ax.hi - ax.lo < 1e-12) { ax.lo -= 0.5; ax.hi += 0.5; }
  if (ay.hi - ay.lo < 1e-12) { ay.lo -= 0.5; ay.hi += 0.5; }

  std::ofstream f(path);
  if (!f) throw io_error("cannot write " + path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
    << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
    << "\">\n";
  f << "<rect width=\"" << kW << "\" height=\"" << kH
    << "\" fill=\"white\"/>\n";
  f << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">" << title_ << "</text>\n";

  const double px0 = kL, px1 = kW - kR, py0 = kH - kB, py1 = kT;
  for (double tv : ax.ticks()) {
    const double v = log_x_ ? std::log10(tv) : tv;
    if (v < ax.lo - 1e-9 || v > ax.hi + 1e-9) continue;
    const double px = px0 + (v - ax.lo) / (ax.hi - ax.lo) * (px1 - px0);
    f << "<line x1=\"" << px << "\" y1=\"" << py0 << "\" x2=\"" << px
      << "\" y2=\"" << py1 << "\" stroke=\"#dddddd\"/>\n";
    f << "<text x=\"" << px << "\" y=\"" << py0 + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">" << tick_label(tv, log_x_) << "</text>\n";
  }
  for (double tv : ay.ticks()) {
    const double v = log_y_ ? std::log10(tv) : tv;
    if (v < ay.lo - 1e-9 || v > ay.hi + 1e-9) continue;
    const double py = py0 + (v - ay.lo) / (ay.hi - ay.lo) * (py1 - py0);
    f << "<line x1=\"" << px0 << "\" y1=\"" << py << "\" x2=\"" << px1
      << "\" y2=\"" << py << "\" stroke=\"#dddddd\"/>\n";
    f << "<text x=\"" << px0 - 6 << "\" y=\"" << py + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << tick_label(tv, log_y_) << "</text>\n";
  }
  f << "<rect x=\"" << px0 << "\" y=\"" << py1 << "\" width=\"" << px1 - px0
    << "\" height=\"" << py0 - py1
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  f << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << kH - 16
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
    << xlabel_ << "</text>\n";
  f << "<text x=\"18\" y=\"" << (py0 + py1) / 2
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       "transform=\"rotate(-90 18 " << (py0 + py1) / 2 << ")\">" << ylabel_
    << "</text>\n";

  size_t ci = 0;
  double ly = py1 + 16;
  for (const auto& s : series_) {
    const char* color = kColors[ci % (sizeof kColors / sizeof kColors[0])];
    std::ostringstream pts;
    bool pen_down = false;
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double xv = s.x[i], yv = s.y[i];
      const bool ok = std::isfinite(xv) && std::isfinite(yv) &&
                      (!log_x_ || xv > 0) && (!log_y_ || yv > 0);
      if (!ok) { pen_down = false; continue; }
      pts << (pen_down ? " L " : " M ") << ax.map(xv, px0, px1) << ' '
          << ay.map(yv, py0, py1);
      pen_down = true;
    }
    f << "<path d=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\""
      << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    if (!s.name.empty()) {
      f << "<line x1=\"" << px1 - 150 << "\" y1=\"" << ly << "\" x2=\""
        << px1 - 120 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
      f << "<text x=\"" << px1 - 114 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name
        << "</text>\n";
      ly += 16;
    }
    ++ci;
  }
  f << "</svg>\n";
  if (!f) throw io_error("short write on " + path);
}

}  // namespace dimerlab
