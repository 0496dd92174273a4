#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace curveflow::cli {

namespace {

std::string f6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct Box {
  double xmin = std::numeric_limits<double>::max();
  double xmax = std::numeric_limits<double>::lowest();
  double ymin = std::numeric_limits<double>::max();
  double ymax = std::numeric_limits<double>::lowest();

  void add(const Vec2& p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
};

/// World-to-pixel map: uniform scale, y flipped, 5% margin.
struct Transform {
  double scale, x0, y0;

  static Transform fit(const Box& box, int size) {
    const double w = std::max(box.xmax - box.xmin, 1e-30);
    const double h = std::max(box.ymax - box.ymin, 1e-30);
    const double s = 0.9 * size / std::max(w, h);
    Transform t;
    t.scale = s;
    t.x0 = 0.5 * size - s * 0.5 * (box.xmin + box.xmax);
    t.y0 = 0.5 * size + s * 0.5 * (box.ymin + box.ymax);
    return t;
  }
  double px(double x) const { return scale * x + x0; }
  double py(double y) const { return y0 - scale * y; }
};

void append_polygon(std::ostringstream& out, const PolygonalCurve& curve,
                    const Transform& t, const char* color, double width,
                    const char* dash) {
  out << "<polygon points=\"";
  bool first = true;
  for (const auto& p : curve.nodes()) {
    if (!first) out << ' ';
    first = false;
    out << f6(t.px(p.x)) << ',' << f6(t.py(p.y));
  }
  out << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
      << f6(width) << "\"";
  if (dash) out << " stroke-dasharray=\"" << dash << "\"";
  out << "/>\n";
}

std::string svg_open(int w, int h) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out.str();
}

}  // namespace

std::string snapshots_svg(const std::vector<Snapshot>& snapshots,
                          const RenderOptions& options) {
  const int size = options.frame_size;
  std::ostringstream out;
  out << svg_open(size, size);
  if (!snapshots.empty()) {
    Box box;
    for (const auto& s : snapshots) {
      for (const auto& p : s.curve.nodes()) box.add(p);
    }
    const Transform t = Transform::fit(box, size);
    const std::size_t n = snapshots.size();
    for (std::size_t i = 0; i < n; ++i) {
      const bool first = (i == 0);
      const bool last = (i + 1 == n);
      if (!options.overlay && !last) continue;
      const char* color = first ? "#1f4e9e" : (last ? "#c0392b" : "#8a8a8a");
      const char* dash = (first || last) ? nullptr : "4,4";
      append_polygon(out, snapshots[i].curve, t, color, options.stroke_width,
                     dash);
    }
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<std::string> frame_svgs(const std::vector<Snapshot>& snapshots,
                                    const RenderOptions& options) {
  const int size = options.frame_size;
  Box box;
  for (const auto& s : snapshots) {
    for (const auto& p : s.curve.nodes()) box.add(p);
  }
  const Transform t = Transform::fit(box, size);
  std::vector<std::string> frames;
  frames.reserve(snapshots.size());
  for (const auto& s : snapshots) {
    std::ostringstream out;
    out << svg_open(size, size);
    append_polygon(out, s.curve, t, "#1f4e9e", options.stroke_width, nullptr);
    out << "<text x=\"8\" y=\"18\" font-size=\"12\" fill=\"#444444\">t="
        << f6(s.t) << "</text>\n</svg>\n";
    frames.push_back(out.str());
  }
  return frames;
}

std::string convergence_svg(const std::vector<ConvergenceEntry>& table,
                            const RenderOptions& options) {
  const int size = options.frame_size;
  std::ostringstream out;
  out << svg_open(size, size);

  std::vector<const ConvergenceEntry*> pts;
  for (const auto& e : table) {
    if (e.error > 0.0 && e.h > 0.0) pts.push_back(&e);
  }
  if (pts.size() >= 2) {
    Box box;
    for (const auto* e : pts) {
      box.add({std::log10(e->h), std::log10(e->error)});
    }
    // keep the slope-2 guide visually at slope 2: no anisotropic stretch
    const Transform t = Transform::fit(box, size);

    // one polyline per checkpoint time, ordered by time
    std::map<double, std::vector<const ConvergenceEntry*>> by_time;
    for (const auto* e : pts) by_time[e->t].push_back(e);
    const char* colors[] = {"#1f4e9e", "#c0392b", "#1e8449", "#7d3c98",
                            "#b7950b"};
    int ci = 0;
    for (auto& [time, group] : by_time) {
      std::sort(group.begin(), group.end(),
                [](const ConvergenceEntry* a, const ConvergenceEntry* b) {
                  return a->h > b->h;
                });
      const char* color = colors[ci++ % 5];
      out << "<polyline points=\"";
      for (std::size_t i = 0; i < group.size(); ++i) {
        if (i) out << ' ';
        out << f6(t.px(std::log10(group[i]->h))) << ','
            << f6(t.py(std::log10(group[i]->error)));
      }
      out << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << f6(options.stroke_width) << "\"/>\n";
      for (const auto* e : group) {
        out << "<circle cx=\"" << f6(t.px(std::log10(e->h))) << "\" cy=\""
            << f6(t.py(std::log10(e->error))) << "\" r=\"3\" fill=\"" << color
            << "\"/>\n";
      }
      out << "<text x=\"" << f6(t.px(std::log10(group.back()->h)) + 6)
          << "\" y=\"" << f6(t.py(std::log10(group.back()->error)))
          << "\" font-size=\"11\" fill=\"" << color << "\">t=" << f6(time)
          << "</text>\n";
    }

    // slope-2 guide anchored at the coarsest point of the first group
    const auto* anchor = by_time.begin()->second.front();
    const double lh1 = std::log10(anchor->h);
    const double lh0 = lh1 - 1.0;
    const double le1 = std::log10(anchor->error) + 0.3;
    out << "<line x1=\"" << f6(t.px(lh0)) << "\" y1=\"" << f6(t.py(le1 - 2.0))
        << "\" x2=\"" << f6(t.px(lh1)) << "\" y2=\"" << f6(t.py(le1))
        << "\" stroke=\"#444444\" stroke-width=\"1\" "
           "stroke-dasharray=\"6,3\"/>\n"
        << "<text x=\"" << f6(t.px(lh1) + 4) << "\" y=\"" << f6(t.py(le1))
        << "\" font-size=\"11\" fill=\"#444444\">slope 2</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace curveflow::cli
