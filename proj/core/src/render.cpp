#include "fairpost/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fairpost/csv.hpp"

namespace fairpost {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 48.0;

struct Axis {
  double lo = 0.0, hi = 1.0;

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi <= lo) hi = lo + 1.0;
    const double span = hi - lo;
    lo -= 0.05 * span;
    hi += 0.05 * span;
  }
  double to_px(double v, double px_lo, double px_hi) const {
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

class Svg {
 public:
  explicit Svg(const std::string& path) : out_(path) {
    if (!out_) throw ParseError("cannot write file '" + path + "'");
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
         << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
         << kHeight << "\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    axes();
  }
  ~Svg() { out_ << "</svg>\n"; }

  void circle(double x, double y, const std::string& color) {
    out_ << "<circle cx=\"" << x << "\" cy=\"" << y
         << "\" r=\"2.5\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
  }
  void line(double x0, double y0, double x1, double y1,
            const std::string& color, double width) {
    out_ << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
         << "\" y2=\"" << y1 << "\" stroke=\"" << color
         << "\" stroke-width=\"" << width << "\"/>\n";
  }
  void text(double x, double y, const std::string& s) {
    out_ << "<text x=\"" << x << "\" y=\"" << y
         << "\" font-size=\"12\" font-family=\"sans-serif\">" << s
         << "</text>\n";
  }

 private:
  void axes() {
    line(kMargin, kHeight - kMargin, kWidth - kMargin, kHeight - kMargin,
         "black", 1.0);
    line(kMargin, kMargin, kMargin, kHeight - kMargin, "black", 1.0);
  }
  std::ofstream out_;
};

const char* cell_color(int y, int a) {
  static const char* colors[4] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
  return colors[2 * y + a];
}

}  // namespace

void render_scatter(const BiasScores& scores, const LabeledDataset* ds,
                    const ModificationRule* rule, const std::string& out_path) {
  if (scores.K != 2) {
    throw std::invalid_argument("render_scatter requires K=2 scores");
  }
  if (ds && ds->n != scores.n) {
    throw std::invalid_argument("render_scatter: dataset size mismatch");
  }
  Axis ax, ay;
  for (std::size_t i = 0; i < scores.n; ++i) {
    ax.include(scores.score(i, 0));
    ay.include(scores.score(i, 1));
  }
  ax.pad();
  ay.pad();

  Svg svg(out_path);
  svg.text(kWidth / 2 - 10, kHeight - kMargin / 3, "s0");
  svg.text(kMargin / 3, kHeight / 2, "s1");
  const double px_lo = kMargin, px_hi = kWidth - kMargin;
  const double py_lo = kHeight - kMargin, py_hi = kMargin;
  const std::vector<std::uint8_t>* attr = nullptr;
  if (ds && !ds->attribute_names.empty()) attr = &ds->attribute_values[0];
  for (std::size_t i = 0; i < scores.n; ++i) {
    const char* color = "#1f77b4";
    if (ds) {
      const int y = ds->labels[i];
      const int a = attr ? (*attr)[i] : 0;
      color = cell_color(y, a);
    }
    svg.circle(ax.to_px(scores.score(i, 0), px_lo, px_hi),
               ay.to_px(scores.score(i, 1), py_lo, py_hi), color);
  }

  if (rule && rule->K() == 2) {
    // Separating line {z0 s0 + z1 s1 = 1}, clipped to the view box.
    const double z0 = rule->z[0], z1 = rule->z[1];
    std::vector<std::pair<double, double>> pts;
    auto try_point = [&](double s0, double s1) {
      if (s0 >= ax.lo && s0 <= ax.hi && s1 >= ay.lo && s1 <= ay.hi) {
        pts.emplace_back(s0, s1);
      }
    };
    if (z1 != 0.0) {
      try_point(ax.lo, (1.0 - z0 * ax.lo) / z1);
      try_point(ax.hi, (1.0 - z0 * ax.hi) / z1);
    }
    if (z0 != 0.0) {
      try_point((1.0 - z1 * ay.lo) / z0, ay.lo);
      try_point((1.0 - z1 * ay.hi) / z0, ay.hi);
    }
    if (pts.size() >= 2) {
      svg.line(ax.to_px(pts[0].first, px_lo, px_hi),
               ay.to_px(pts[0].second, py_lo, py_hi),
               ax.to_px(pts[1].first, px_lo, px_hi),
               ay.to_px(pts[1].second, py_lo, py_hi), "red", 1.5);
    }
  }
}

void render_frontier(const std::vector<FrontierPoint>& points,
                     const std::string& out_path) {
  if (points.empty()) {
    throw std::invalid_argument("render_frontier: no points");
  }
  Axis ax, ay;
  ax.lo = 1.0;
  ax.hi = 0.0;
  ay.lo = 1.0;
  ay.hi = 0.0;
  for (const auto& p : points) {
    const EvalReport& r = p.test_report ? *p.test_report : p.val_report;
    ax.include(r.cc);
    ay.include(r.accuracy);
  }
  ax.pad();
  ay.pad();

  Svg svg(out_path);
  svg.text(kWidth / 2 - 30, kHeight - kMargin / 3, "criterion");
  svg.text(kMargin / 3, kHeight / 2, "acc");
  const double px_lo = kMargin, px_hi = kWidth - kMargin;
  const double py_lo = kHeight - kMargin, py_hi = kMargin;

  double prev_x = 0.0, prev_y = 0.0;
  bool have_prev = false;
  for (const auto& p : points) {
    const EvalReport& r = p.test_report ? *p.test_report : p.val_report;
    const double x = ax.to_px(r.cc, px_lo, px_hi);
    const double y = ay.to_px(r.accuracy, py_lo, py_hi);
    if (have_prev) svg.line(prev_x, prev_y, x, y, "#1f77b4", 1.5);
    svg.circle(x, y, "#1f77b4");
    svg.text(x + 4, y - 4, "d=" + format_double(p.delta));
    prev_x = x;
    prev_y = y;
    have_prev = true;
  }
}

}  // namespace fairpost
