#include "mems/runner/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mems/error.hpp"

namespace mems::runner {

namespace {

constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-300) {
      const double d = std::max(std::abs(lo) * 0.05, 1e-12);
      lo -= d;
      hi += d;
    }
  }
};

const Series* find(const ResultRecord& r, const std::string& name) {
  const auto it = r.series.find(name);
  if (it == r.series.end() || it->second.rows() == 0) return nullptr;
  return &it->second;
}

const std::vector<double>* column(const Series& s, const std::string& name) {
  for (std::size_t c = 0; c < s.columns.size(); ++c)
    if (s.columns[c] == name) return &s.data[c];
  return nullptr;
}

}  // namespace

std::string render_svg(const Plot& p) {
  Range xr, yr;
  for (const auto& l : p.lines) {
    for (double v : l.x) xr.add(v);
    for (double v : l.y) yr.add(v);
  }
  for (const auto& m : p.vertical_markers) xr.add(m.first);
  xr.pad();
  yr.pad();
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) + "\" height=\"" + num(kH) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kW / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(p.title) + "</text>\n";
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    s += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(kTop + ph + 16) + "\" text-anchor=\"middle\">" + tick(xv) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(sy(yv) + 4) + "\" text-anchor=\"end\">" + tick(yv) + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kH - 10) + "\" text-anchor=\"middle\">" + escape(p.xlabel) + "</text>\n";
  s += "<text x=\"14\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
       num(kTop + ph / 2) + ")\">" + escape(p.ylabel) + "</text>\n";

  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const auto& l = p.lines[i];
    const std::string color = kColors[i % std::size(kColors)];
    const std::size_t n = std::min(l.x.size(), l.y.size());
    if (l.markers) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(l.x[k]) || !std::isfinite(l.y[k])) continue;
        s += "<circle cx=\"" + num(sx(l.x[k])) + "\" cy=\"" + num(sy(l.y[k])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
    } else {
      s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(l.x[k]) || !std::isfinite(l.y[k])) continue;
        s += num(sx(l.x[k])) + "," + num(sy(l.y[k])) + " ";
      }
      s += "\"/>\n";
    }
    s += "<text x=\"" + num(kLeft + pw - 8) + "\" y=\"" + num(kTop + 16 + 14 * i) + "\" text-anchor=\"end\" fill=\"" +
         color + "\">" + escape(l.label) + "</text>\n";
  }
  for (const auto& [x, label] : p.vertical_markers) {
    s += "<line x1=\"" + num(sx(x)) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(sx(x)) + "\" y2=\"" + num(kTop + ph) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    s += "<text x=\"" + num(sx(x) + 4) + "\" y=\"" + num(kTop + ph - 6) + "\" fill=\"gray\">" + escape(label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::vector<std::pair<std::string, Plot>> plan_plots(const ResultRecord& r) {
  std::vector<std::pair<std::string, Plot>> out;
  if (const Series* s = find(r, "time")) {
    const auto* t = column(*s, "t");
    if (const auto* sup = column(*s, "sup_u"); t && sup)
      out.push_back({"sup_u", {"max of u over the domain", "t", "sup u", {{"sup u", *t, *sup, false}}, {}}});
    if (const auto* e = column(*s, "E"); t && e)
      out.push_back({"moment", {"eigenfunction moment", "t", "E(t)", {{"E", *t, *e, false}}, {}}});
    const auto* dir = column(*s, "dirichlet");
    const auto* dis = column(*s, "dissipation_cum");
    const auto* pot = column(*s, "nonlocal_pot");
    if (t && dir && dis && pot) {
      std::vector<double> lyap(t->size());
      for (std::size_t i = 0; i < lyap.size(); ++i) lyap[i] = (*dir)[i] + (*dis)[i] + (*pot)[i];
      out.push_back({"energy",
                     {"energy balance", "t", "energy",
                      {{"dirichlet", *t, *dir, false}, {"dissipation", *t, *dis, false},
                       {"potential", *t, *pot, false}, {"sum", *t, lyap, false}},
                      {}}});
    }
  }
  if (const Series* s = find(r, "branch")) {
    const auto* l = column(*s, "lambda");
    const auto* w = column(*s, "sup_w");
    if (l && w) {
      Plot p{"minimal-solution branch", "lambda", "max w", {{"minimal solutions", *l, *w, true}}, {}};
      if (const auto it = r.scalars.find("lambda_star"); it != r.scalars.end())
        p.vertical_markers.push_back({it->second.value, "fold"});
      out.push_back({"bifurcation", std::move(p)});
    }
  }
  if (const Series* s = find(r, "quench")) {
    const auto* l = column(*s, "lambda");
    const auto* tq = column(*s, "T");
    if (l && tq) {
      Plot p{"quenching time", "lambda", "T", {{"measured", *l, *tq, true}}, {}};
      const auto c = r.scalars.find("fit_C");
      const auto l0 = r.scalars.find("fit_lambda0");
      if (c != r.scalars.end() && l0 != r.scalars.end() && c->second.value > 0.0) {
        PlotLine fit{"C / (lambda - lambda0)", {}, {}, false};
        const double lo = std::max(l->front(), l0->second.value + 1e-3 * (l->back() - l->front()));
        for (int i = 0; i <= 100; ++i) {
          const double x = lo + (l->back() - lo) * i / 100.0;
          fit.x.push_back(x);
          fit.y.push_back(c->second.value / (x - l0->second.value));
        }
        p.lines.push_back(std::move(fit));
      }
      out.push_back({"quench_times", std::move(p)});
    }
  }
  return out;
}

std::vector<std::filesystem::path> emit_plots(const ResultRecord& r, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& [stem, plot] : plan_plots(r)) {
    const auto file = dir / (stem + ".svg");
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + file.string());
    out << render_svg(plot);
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + file.string());
    written.push_back(file);
  }
  return written;
}

}  // namespace mems::runner
