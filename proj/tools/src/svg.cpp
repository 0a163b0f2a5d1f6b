#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace clustvar::cli {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

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

void line(std::ostringstream& out, double x1, double y1, double x2, double y2) {
  out << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\""
      << num(y2) << "\"/>\n";
}

// A tick step of 1, 2 or 5 times a power of ten giving about five ticks.
double tick_step(double range) {
  if (range <= 0) return 1.0;
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string dendrogram_svg(const Hierarchy& h) {
  const std::size_t p = h.n_leaves();
  const auto& merges = h.merges();

  // Leaf order from a left-first walk of the tree.
  std::vector<std::size_t> order;
  const std::function<void(std::size_t)> walk = [&](std::size_t node) {
    if (node < p) {
      order.push_back(node);
      return;
    }
    walk(merges[node - p].left);
    walk(merges[node - p].right);
  };
  walk(p + merges.size() - 1);

  const double spacing = 28.0, left = 60.0, top = 30.0, plot_h = 320.0, label_h = 110.0;
  const double width = left + spacing * static_cast<double>(p) + 20.0;
  const double height = top + plot_h + label_h;
  double max_h = 0.0;
  for (const auto& m : merges) max_h = std::max(max_h, m.height);
  if (max_h <= 0) max_h = 1.0;
  auto y_of = [&](double v) { return top + plot_h * (1.0 - v / max_h); };

  std::vector<double> x(p + merges.size());
  std::vector<double> y(p + merges.size(), y_of(0.0));
  for (std::size_t i = 0; i < order.size(); ++i) x[order[i]] = left + spacing * (static_cast<double>(i) + 0.5);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  out << "<g stroke=\"#888\">\n";
  line(out, left - 10, top, left - 10, top + plot_h);
  out << "</g>\n<g text-anchor=\"end\">\n";
  const double step = tick_step(max_h);
  for (double t = 0.0; t <= max_h + 1e-12; t += step) {
    out << "<text x=\"" << num(left - 14) << "\" y=\"" << num(y_of(t) + 4) << "\">" << num(t) << "</text>\n";
  }
  out << "</g>\n<g stroke=\"black\" fill=\"none\">\n";
  for (std::size_t t = 0; t < merges.size(); ++t) {
    const auto& m = merges[t];
    const std::size_t node = p + t;
    y[node] = y_of(m.height);
    x[node] = (x[m.left] + x[m.right]) / 2.0;
    line(out, x[m.left], y[m.left], x[m.left], y[node]);
    line(out, x[m.right], y[m.right], x[m.right], y[node]);
    line(out, x[m.left], y[node], x[m.right], y[node]);
  }
  out << "</g>\n<g>\n";
  for (std::size_t leaf : order) {
    const double lx = x[leaf], ly = top + plot_h + 8;
    out << "<text x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" transform=\"rotate(60 " << num(lx) << ' '
        << num(ly) << ")\">" << escape(h.leaves()[leaf]) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string stability_curve_svg(const StabilityResult& r) {
  const double left = 60.0, top = 20.0, plot_w = 420.0, plot_h = 260.0;
  const double width = left + plot_w + 30.0, height = top + plot_h + 50.0;
  const auto& ks = r.cluster_counts;
  const double k0 = static_cast<double>(ks.front()), k1 = static_cast<double>(ks.back());
  auto x_of = [&](double k) { return left + (k1 > k0 ? plot_w * (k - k0) / (k1 - k0) : plot_w / 2); };
  double lo = 0.0;
  for (double v : r.mean_adjusted_rand) lo = std::min(lo, std::floor(v * 10.0) / 10.0);
  auto y_of = [&](double v) { return top + plot_h * (1.0 - (v - lo) / (1.0 - lo)); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g stroke=\"#888\">\n";
  line(out, left, top + plot_h, left + plot_w, top + plot_h);
  line(out, left, top, left, top + plot_h);
  out << "</g>\n<g text-anchor=\"middle\">\n";
  for (std::size_t k : ks) {
    out << "<text x=\"" << num(x_of(static_cast<double>(k))) << "\" y=\"" << num(top + plot_h + 16) << "\">" << k
        << "</text>\n";
  }
  out << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(top + plot_h + 36)
      << "\">number of clusters</text>\n";
  out << "</g>\n<g text-anchor=\"end\">\n";
  const double step = tick_step(1.0 - lo);
  for (double t = lo; t <= 1.0 + 1e-12; t += step) {
    out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y_of(t) + 4) << "\">" << num(t) << "</text>\n";
  }
  out << "</g>\n<polyline fill=\"none\" stroke=\"black\" points=\"";
  for (std::size_t c = 0; c < ks.size(); ++c) {
    out << (c ? " " : "") << num(x_of(static_cast<double>(ks[c]))) << ',' << num(y_of(r.mean_adjusted_rand[c]));
  }
  out << "\"/>\n<g fill=\"black\">\n";
  for (std::size_t c = 0; c < ks.size(); ++c) {
    out << "<circle r=\"3\" cx=\"" << num(x_of(static_cast<double>(ks[c]))) << "\" cy=\""
        << num(y_of(r.mean_adjusted_rand[c])) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace clustvar::cli
