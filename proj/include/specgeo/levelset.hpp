// Marching-squares level-set extraction on chart grids, with Riemannian
// polyline lengths.
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <vector>

#include "specgeo/norms.hpp"
#include "specgeo/surface.hpp"

namespace specgeo {

struct Polyline {
  std::vector<Point> points;
  bool closed = false;
  double length = 0.0;
};

struct LevelGrid {
  double x1a = 0.0, x1b = 0.0;
  double x2a = 0.0, x2b = 0.0;
  int n1 = 0, n2 = 0;
  bool periodic1 = false, periodic2 = false;

  double h1() const { return (x1b - x1a) / n1; }
  double h2() const { return (x2b - x2a) / n2; }
};

// Default extraction grid for a surface chart.
inline LevelGrid default_grid(const ModelSurface& surface, int grid_n) {
  switch (surface.kind()) {
    case ModelSurface::Kind::FlatTorus:
      return {0.0, surface.periods()[0], 0.0, surface.periods()[1],
              grid_n, grid_n, true,  true};
    case ModelSurface::Kind::Sphere: {
      // Pole caps of one cell height are excluded from the marching grid;
      // their level-curve content vanishes with the cap size.
      double margin = kPi / grid_n;
      return {margin, kPi - margin, 0.0, kTwoPi, grid_n, grid_n, false, true};
    }
    case ModelSurface::Kind::Revolution: {
      double L = surface.profile().length;
      double margin = L / grid_n;
      return {margin, L - margin, 0.0, kTwoPi, grid_n, grid_n, false, true};
    }
  }
  return {};
}

namespace detail {

// Canonical edge id: (horizontal? , node i, node j) with periodic wrap.
struct EdgeId {
  int type;  // 0: edge from node (i,j) to (i+1,j); 1: to (i,j+1)
  int i, j;
  bool operator<(const EdgeId& o) const {
    if (type != o.type) return type < o.type;
    if (i != o.i) return i < o.i;
    return j < o.j;
  }
};

struct EdgeCut {
  Point p;
};

inline double segment_length(const ModelSurface& surface, Point a, Point b) {
  Point mid{0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2)};
  Vec2 g = surface.metric_diag(mid);
  double d1 = a.x1 - b.x1, d2 = a.x2 - b.x2;
  return std::sqrt(g[0] * d1 * d1 + g[1] * d2 * d2);
}

}  // namespace detail

// Contour polylines of {field = level} on the grid. Edge crossings are
// refined by bisection/secant along the grid edge; saddle cells are resolved
// by the field value at the cell center.
inline std::vector<Polyline> extract_level_set(const ScalarField& field,
                                               const ModelSurface& surface,
                                               double level,
                                               const LevelGrid& grid) {
  if (grid.n1 < 8 || grid.n2 < 8)
    throw std::invalid_argument("extract_level_set: grid too coarse");
  int n1 = grid.n1, n2 = grid.n2;
  int m1 = grid.periodic1 ? n1 : n1 + 1;
  int m2 = grid.periodic2 ? n2 : n2 + 1;
  double h1 = grid.h1(), h2 = grid.h2();

  auto node_x1 = [&](int i) { return grid.x1a + h1 * i; };
  auto node_x2 = [&](int j) { return grid.x2a + h2 * j; };

  std::vector<double> vals(static_cast<std::size_t>(m1) * m2);
  double scale = 0.0;
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m2; ++j) {
      double v = field({node_x1(i), node_x2(j)}) - level;
      if (v == 0.0) v = 1e-300;  // break exact-zero corner ambiguity
      vals[static_cast<std::size_t>(i) * m2 + j] = v;
      scale = std::max(scale, std::abs(v));
    }
  auto val = [&](int i, int j) {
    if (grid.periodic1) i %= n1;
    if (grid.periodic2) j %= n2;
    return vals[static_cast<std::size_t>(i) * m2 + j];
  };

  double tol = 1e-10 * std::max(scale, 1e-300);
  // Refined crossing on the edge from (xa) to (xb), f(xa), f(xb) of opposite sign.
  auto refine = [&](Point pa, Point pb, double fa, double fb) -> Point {
    double lo = 0.0, hi = 1.0;
    auto at = [&](double t) {
      return Point{pa.x1 + t * (pb.x1 - pa.x1), pa.x2 + t * (pb.x2 - pa.x2)};
    };
    double flo = fa, fhi = fb;
    double t = flo / (flo - fhi);
    for (int it = 0; it < 80; ++it) {
      t = std::clamp(t, lo + 1e-15, hi - 1e-15);
      double fm = field(at(t)) - level;
      if (std::abs(fm) <= tol) return at(t);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = t;
        flo = fm;
      } else {
        hi = t;
        fhi = fm;
      }
      // secant proposal with bisection fallback
      double ts = lo + (hi - lo) * flo / (flo - fhi);
      t = (ts > lo && ts < hi) ? ts : 0.5 * (lo + hi);
    }
    return at(0.5 * (lo + hi));
  };

  std::map<detail::EdgeId, Point> cuts;
  auto cut_point = [&](detail::EdgeId e) -> Point {
    auto it = cuts.find(e);
    if (it != cuts.end()) return it->second;
    Point pa{node_x1(e.i), node_x2(e.j)};
    Point pb = e.type == 0 ? Point{node_x1(e.i + 1), node_x2(e.j)}
                           : Point{node_x1(e.i), node_x2(e.j + 1)};
    double fa = val(e.i, e.j);
    double fb = e.type == 0 ? val(e.i + 1, e.j) : val(e.i, e.j + 1);
    Point p = refine(pa, pb, fa, fb);
    cuts.emplace(e, p);
    return p;
  };
  auto canon_edge = [&](detail::EdgeId e) {
    if (grid.periodic1) e.i %= n1;
    if (grid.periodic2) e.j %= n2;
    return e;
  };

  // Per cell, emit pairs of crossed edges.
  struct Seg {
    detail::EdgeId a, b;
  };
  std::vector<Seg> segs;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      double f00 = val(i, j), f10 = val(i + 1, j);
      double f01 = val(i, j + 1), f11 = val(i + 1, j + 1);
      int code = (f00 > 0) | ((f10 > 0) << 1) | ((f11 > 0) << 2) | ((f01 > 0) << 3);
      if (code == 0 || code == 15) continue;
      detail::EdgeId bottom = canon_edge({0, i, j});
      detail::EdgeId top = canon_edge({0, i, j + 1});
      detail::EdgeId left = canon_edge({1, i, j});
      detail::EdgeId right = canon_edge({1, i + 1, j});
      auto emit = [&](detail::EdgeId a, detail::EdgeId b) { segs.push_back({a, b}); };
      switch (code) {
        case 1: case 14: emit(bottom, left); break;
        case 2: case 13: emit(bottom, right); break;
        case 4: case 11: emit(right, top); break;
        case 8: case 7: emit(left, top); break;
        case 3: case 12: emit(left, right); break;
        case 6: case 9: emit(bottom, top); break;
        case 5: case 10: {
          // Saddle: resolve by the field value at the cell center.
          double fc = field({node_x1(i) + 0.5 * h1, node_x2(j) + 0.5 * h2}) - level;
          bool center_pos = fc > 0;
          bool connect_00_side = (code == 5) == center_pos;
          if (connect_00_side) {
            emit(bottom, right);
            emit(left, top);
          } else {
            emit(bottom, left);
            emit(right, top);
          }
          break;
        }
      }
    }

  // Stitch segments into polylines via shared edges.
  std::map<detail::EdgeId, std::vector<int>> by_edge;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    by_edge[segs[s].a].push_back(s);
    by_edge[segs[s].b].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<Polyline> out;
  for (int s0 = 0; s0 < static_cast<int>(segs.size()); ++s0) {
    if (used[s0]) continue;
    // Walk both directions from s0.
    std::vector<detail::EdgeId> chain;
    chain.push_back(segs[s0].a);
    chain.push_back(segs[s0].b);
    used[s0] = true;
    bool closed = false;
    for (int dir = 0; dir < 2; ++dir) {
      while (true) {
        detail::EdgeId tip = dir == 0 ? chain.back() : chain.front();
        int next = -1;
        for (int cand : by_edge[tip])
          if (!used[cand]) {
            next = cand;
            break;
          }
        if (next < 0) break;
        used[next] = true;
        detail::EdgeId other =
            (segs[next].a < tip || tip < segs[next].a) ? segs[next].a : segs[next].b;
        // pick the endpoint that differs from tip
        if (!(segs[next].a < tip) && !(tip < segs[next].a)) other = segs[next].b;
        if (dir == 0)
          chain.push_back(other);
        else
          chain.insert(chain.begin(), other);
        if (!(chain.front() < chain.back()) && !(chain.back() < chain.front()) &&
            chain.size() > 2) {
          closed = true;
          break;
        }
      }
      if (closed) break;
    }
    Polyline pl;
    pl.closed = closed;
    std::size_t npts = chain.size() - (closed ? 1 : 0);
    for (std::size_t idx = 0; idx < npts; ++idx) pl.points.push_back(cut_point(chain[idx]));
    // Segment lengths with periodic wrap (consecutive cuts sit in one cell,
    // possibly across the periodic seam).
    auto seg_len = [&](Point a, Point b) {
      double d1 = b.x1 - a.x1, d2 = b.x2 - a.x2;
      if (grid.periodic1) d1 = wrap_diff(b.x1, a.x1, grid.x1b - grid.x1a);
      if (grid.periodic2) d2 = wrap_diff(b.x2, a.x2, grid.x2b - grid.x2a);
      Point mid = surface.canonical({a.x1 + 0.5 * d1, a.x2 + 0.5 * d2});
      Vec2 g = surface.metric_diag(mid);
      return std::sqrt(g[0] * d1 * d1 + g[1] * d2 * d2);
    };
    for (std::size_t idx = 0; idx + 1 < pl.points.size(); ++idx)
      pl.length += seg_len(pl.points[idx], pl.points[idx + 1]);
    if (closed && pl.points.size() > 1)
      pl.length += seg_len(pl.points.back(), pl.points.front());
    if (pl.points.size() >= 2) out.push_back(std::move(pl));
  }
  return out;
}

inline std::vector<Polyline> extract_level_set(const ScalarField& field,
                                               const ModelSurface& surface,
                                               double level, int grid_n) {
  if (grid_n < 64) throw std::invalid_argument("extract_level_set: grid_n >= 64");
  return extract_level_set(field, surface, level, default_grid(surface, grid_n));
}

inline double total_length(const std::vector<Polyline>& polylines) {
  double acc = 0.0;
  for (const auto& p : polylines) acc += p.length;
  return acc;
}

// CSV export: curve_id, vertex_index, coord1, coord2.
inline void export_polylines_csv(const std::vector<Polyline>& polylines,
                                 std::ostream& os) {
  os << "curve_id,vertex_index,coord1,coord2\n";
  char buf[96];
  for (std::size_t c = 0; c < polylines.size(); ++c)
    for (std::size_t v = 0; v < polylines[c].points.size(); ++v) {
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g\n", c, v,
                    polylines[c].points[v].x1, polylines[c].points[v].x2);
      os << buf;
    }
}

}  // namespace specgeo
