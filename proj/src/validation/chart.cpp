#include "egoexo/validation/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace egoexo::validation {
namespace {

constexpr double kW = 640, kH = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2, 5 x 10^k step giving about `target` ticks.
double nice_step(double range, int target) {
  const double raw = range / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (const double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

void write_error_chart_svg(std::ostream& out, const std::vector<ChartSeries>& series, const std::string& title) {
  double fmin = 1e300, fmax = -1e300, emax = 0.0;
  for (const auto& s : series)
    for (const auto& p : s.curve.samples) {
      if (p.count == 0) continue;
      fmin = std::min(fmin, static_cast<double>(p.f));
      fmax = std::max(fmax, static_cast<double>(p.f));
      emax = std::max(emax, p.max_error);
    }
  if (fmin > fmax) fmin = 0, fmax = 1;
  if (fmax == fmin) fmin -= 1, fmax += 1;
  if (!(emax > 0.0)) emax = 1.0;
  const double ystep = nice_step(emax, 5);
  emax = std::ceil(emax / ystep) * ystep;

  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto X = [&](double f) { return kLeft + (f - fmin) / (fmax - fmin) * pw; };
  auto Y = [&](double e) { return kTop + ph - e / emax * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
  out << "<g stroke=\"#999\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
      << "\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n";
  out << "</g>\n";
  for (double e = 0.0; e <= emax * (1 + 1e-9); e += ystep) {
    out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << fmt("%.2f", Y(e)) << "\" y2=\""
        << fmt("%.2f", Y(e)) << "\" stroke=\"#eee\"/>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt("%.2f", Y(e) + 4) << "\" text-anchor=\"end\">"
        << fmt("%g", e) << "</text>\n";
  }
  const double xstep = nice_step(fmax - fmin, 6);
  for (double f = std::ceil(fmin / xstep) * xstep; f <= fmax + 1e-9; f += xstep)
    out << "<text x=\"" << fmt("%.2f", X(f)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
        << fmt("%g", f) << "</text>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">EOB distance f (frames)</text>\n";
  out << "<text transform=\"translate(16," << kTop + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">reprojection error (px)</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    std::string mean_pts, max_pts;
    for (const auto& p : series[i].curve.samples) {
      if (p.count == 0) continue;
      mean_pts += fmt("%.2f", X(static_cast<double>(p.f))) + "," + fmt("%.2f", Y(p.mean_error)) + " ";
      max_pts += fmt("%.2f", X(static_cast<double>(p.f))) + "," + fmt("%.2f", Y(p.max_error)) + " ";
      out << "<circle cx=\"" << fmt("%.2f", X(static_cast<double>(p.f))) << "\" cy=\""
          << fmt("%.2f", Y(p.mean_error)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << mean_pts << "\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" stroke-dasharray=\"4 3\" points=\""
        << max_pts << "\"/>\n";
    const double ly = kTop + 14 + 16 * static_cast<double>(i);
    out << "<line x1=\"" << kLeft + 12 << "\" x2=\"" << kLeft + 32 << "\" y1=\"" << ly - 4 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + 38 << "\" y=\"" << ly << "\">" << escape(series[i].label)
        << " (mean solid, max dashed)</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace egoexo::validation
