#include "glcorner/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "glcorner/errors.hpp"

namespace glcorner {

namespace {

// viridis anchors
constexpr std::array<std::array<double, 3>, 5> kMap{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98},
                                                     {253, 231, 37}}};
constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string colour(double u) {
  u = std::clamp(u, 0.0, 1.0) * (kMap.size() - 1);
  size_t i = std::min(static_cast<size_t>(u), kMap.size() - 2);
  double f = u - i;
  auto c = [&](int k) { return static_cast<int>(std::lround(kMap[i][k] * (1 - f) + kMap[i + 1][k] * f)); };
  return fmt::format("#{:02x}{:02x}{:02x}", c(0), c(1), c(2));
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '<') out += "&lt;";
    else if (ch == '>') out += "&gt;";
    else if (ch == '&') out += "&amp;";
    else out += ch;
  }
  return out;
}

std::string tick(double v) { return fmt::format("{:.3g}", v); }

}  // namespace

std::string svg_heatmap(const std::vector<Vec2>& nodes, const std::vector<std::array<int, 3>>& tris,
                        const std::vector<double>& values, const std::string& title, int pixels) {
  if (values.size() != nodes.size()) throw UsageError("heatmap values do not match nodes");
  if (nodes.empty() || tris.empty() || pixels < 8) throw UsageError("heatmap needs a non-empty mesh");
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const Vec2& p : nodes) x0 = std::min(x0, p.x), x1 = std::max(x1, p.x), y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
  const double vmin = *std::min_element(values.begin(), values.end());
  const double vmax = *std::max_element(values.begin(), values.end());
  const double span = vmax > vmin ? vmax - vmin : 1.0;
  const int W = pixels;
  const double px = (x1 - x0) / W;
  const int H = std::max(1, static_cast<int>(std::ceil((y1 - y0) / px)));
  constexpr int kLevels = 64;
  std::vector<int> img(static_cast<size_t>(W) * H, -1);
  for (const auto& t : tris) {
    const Vec2 &a = nodes[t[0]], &b = nodes[t[1]], &c = nodes[t[2]];
    double det = cross(b - a, c - a);
    if (det == 0.0) continue;
    int i0 = std::max(0, static_cast<int>((std::min({a.x, b.x, c.x}) - x0) / px));
    int i1 = std::min(W - 1, static_cast<int>((std::max({a.x, b.x, c.x}) - x0) / px));
    int j0 = std::max(0, static_cast<int>((y1 - std::max({a.y, b.y, c.y})) / px));
    int j1 = std::min(H - 1, static_cast<int>((y1 - std::min({a.y, b.y, c.y})) / px));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        Vec2 q{x0 + (i + 0.5) * px, y1 - (j + 0.5) * px};
        double l1 = cross(q - a, c - a) / det, l2 = cross(b - a, q - a) / det, l0 = 1 - l1 - l2;
        if (l0 < -1e-12 || l1 < -1e-12 || l2 < -1e-12) continue;
        double v = l0 * values[t[0]] + l1 * values[t[1]] + l2 * values[t[2]];
        img[static_cast<size_t>(j) * W + i] = std::clamp(static_cast<int>((v - vmin) / span * kLevels), 0, kLevels - 1);
      }
  }
  const int margin = 40, bar = 60;
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" shape-rendering=\"crispEdges\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n<g transform=\"translate({},{})\">\n",
      W + 2 * margin + bar, H + 2 * margin, margin, escape(title), margin, margin);
  for (int j = 0; j < H; ++j) {
    int i = 0;
    while (i < W) {
      int lvl = img[static_cast<size_t>(j) * W + i], k = i;
      while (k < W && img[static_cast<size_t>(j) * W + k] == lvl) ++k;
      if (lvl >= 0)
        s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"1\" fill=\"{}\"/>\n", i, j, k - i,
                         colour((lvl + 0.5) / kLevels));
      i = k;
    }
  }
  s += "</g>\n";
  const int bx = W + margin + 15, bh = std::max(H, 40);
  for (int q = 0; q < kLevels; ++q)
    s += fmt::format("<rect x=\"{}\" y=\"{:.2f}\" width=\"14\" height=\"{:.2f}\" fill=\"{}\"/>\n", bx,
                     margin + bh * (1.0 - (q + 1.0) / kLevels), bh / static_cast<double>(kLevels) + 0.5,
                     colour((q + 0.5) / kLevels));
  s += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n", bx + 18,
                   margin + 10, tick(vmax));
  s += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n", bx + 18,
                   margin + bh, tick(vmin));
  s += "</svg>\n";
  return s;
}

std::string svg_lines(const std::vector<Series>& series, const PlotSpec& spec) {
  const double W = 640, H = 420, L = 70, R = 20, T = 40 + 16.0 * spec.notes.size(), B = 50;
  auto tx = [&](double v) { return spec.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.logy ? std::log10(v) : v; };
  auto ok = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.logx || x > 0) && (!spec.logy || y > 0);
  };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& se : series)
    for (size_t i = 0; i < se.x.size() && i < se.y.size(); ++i)
      if (ok(se.x[i], se.y[i])) {
        x0 = std::min(x0, tx(se.x[i])), x1 = std::max(x1, tx(se.x[i]));
        y0 = std::min(y0, ty(se.y[i])), y1 = std::max(y1, ty(se.y[i]));
      }
  if (!std::isfinite(x0)) throw UsageError("plot has no finite points");
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  double padx = 0.04 * (x1 - x0), pady = 0.06 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  auto X = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  auto Y = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{}\" y=\"22\" font-size=\"14\">{}</text>\n",
      W, H, L, escape(spec.title));
  for (size_t k = 0; k < spec.notes.size(); ++k)
    s += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n", L, 38 + 16 * k, escape(spec.notes[k]));
  s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", L, T,
                   W - L - R, H - T - B);
  for (int q = 0; q <= 4; ++q) {
    double ux = x0 + (x1 - x0) * q / 4, uy = y0 + (y1 - y0) * q / 4;
    double vx = spec.logx ? std::pow(10.0, ux) : ux, vy = spec.logy ? std::pow(10.0, uy) : uy;
    s += fmt::format("<text x=\"{:.1f}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n", X(vx),
                     H - B + 14, tick(vx));
    s += fmt::format("<text x=\"{}\" y=\"{:.1f}\" font-size=\"10\" text-anchor=\"end\">{}</text>\n", L - 4,
                     Y(vy) + 3, tick(vy));
  }
  s += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n", (L + W - R) / 2,
                   H - 12, escape(spec.xlabel));
  s += fmt::format("<text x=\"14\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
                   (T + H - B) / 2, (T + H - B) / 2, escape(spec.ylabel));
  for (size_t k = 0; k < series.size(); ++k) {
    const auto& se = series[k];
    const char* col = kPalette[k % kPalette.size()];
    std::string pts;
    for (size_t i = 0; i < se.x.size() && i < se.y.size(); ++i)
      if (ok(se.x[i], se.y[i])) pts += fmt::format("{:.2f},{:.2f} ", X(se.x[i]), Y(se.y[i]));
    s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{}/>\n", pts, col,
                     se.dashed ? " stroke-dasharray=\"5,4\"" : "");
    if (se.markers)
      for (size_t i = 0; i < se.x.size() && i < se.y.size(); ++i)
        if (ok(se.x[i], se.y[i]))
          s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", X(se.x[i]), Y(se.y[i]), col);
    s += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{}\">{}</text>\n", W - R - 150, T + 16 + 14 * k,
                     col, escape(se.label));
  }
  s += "</svg>\n";
  return s;
}

}  // namespace glcorner
