#include "svg.hpp"

#include <algorithm>
#include <sstream>

#include "fpsa/errors.hpp"

namespace fpsa::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kPanel = 160.0;
constexpr double kLeft = 90.0;
constexpr double kTop = 30.0;
constexpr double kGap = 30.0;
constexpr std::size_t kColumns = 700;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

std::string svg_traces(const std::string& title, const std::string& x_label, const std::vector<double>& x,
                       const std::vector<SvgSeries>& series) {
  if (x.size() < 2) throw ContractError("svg_traces needs at least two samples");
  for (const auto& s : series) {
    if (s.y.size() != x.size()) throw ContractError("svg_traces: series '" + s.name + "' length mismatch");
  }
  const double plot_w = kWidth - kLeft - 20.0;
  const double height = kTop + static_cast<double>(series.size()) * (kPanel + kGap) + 20.0;
  const double x0 = x.front(), x1 = x.back();

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << escape(title) << "</text>\n";

  for (std::size_t p = 0; p < series.size(); ++p) {
    const auto& y = series[p].y;
    const double top = kTop + static_cast<double>(p) * (kPanel + kGap);
    auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) hi = lo + 1.0;
    auto px = [&](double t) { return kLeft + (t - x0) / (x1 - x0) * plot_w; };
    auto py = [&](double v) { return top + kPanel - (v - lo) / (hi - lo) * kPanel; };

    os << "<rect x=\"" << kLeft << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << kPanel
       << "\" fill=\"none\" stroke=\"#999\"/>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << fmt(hi) << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << top + kPanel << "\" text-anchor=\"end\">" << fmt(lo) << "</text>\n";
    os << "<text x=\"" << kLeft + 4 << "\" y=\"" << top + 12 << "\">" << escape(series[p].name) << "</text>\n";

    os << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1\" points=\"";
    const std::size_t n = x.size();
    const std::size_t cols = std::min(n, kColumns);
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t a = c * n / cols, b = std::max(a + 1, (c + 1) * n / cols);
      auto [mn, mx] = std::minmax_element(y.begin() + static_cast<std::ptrdiff_t>(a), y.begin() + static_cast<std::ptrdiff_t>(b));
      const bool rising = mn < mx;
      const auto first = rising ? mn : mx, second = rising ? mx : mn;
      os << fmt(px(x[static_cast<std::size_t>(first - y.begin())])) << ',' << fmt(py(*first)) << ' ';
      if (first != second) os << fmt(px(x[static_cast<std::size_t>(second - y.begin())])) << ',' << fmt(py(*second)) << ' ';
    }
    os << "\"/>\n";
  }
  const double bottom = kTop + static_cast<double>(series.size()) * (kPanel + kGap) - kGap;
  os << "<text x=\"" << kLeft << "\" y=\"" << bottom + 14 << "\">" << fmt(x0) << "</text>\n";
  os << "<text x=\"" << kLeft + plot_w << "\" y=\"" << bottom + 14 << "\" text-anchor=\"end\">" << fmt(x1) << "</text>\n";
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << bottom + 14 << "\" text-anchor=\"middle\">" << escape(x_label)
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace fpsa::cli
