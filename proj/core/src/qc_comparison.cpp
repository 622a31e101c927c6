#include "graftlab/qc_comparison.hpp"

#include <algorithm>
#include <cmath>

#include "graftlab/error.hpp"

namespace graftlab {

const char* to_string(MeshMetric m) {
  switch (m) {
    case MeshMetric::euclidean: return "euclidean";
    case MeshMetric::upper_half_plane: return "upper_half_plane";
    case MeshMetric::thurston_cylinder: return "thurston_cylinder";
  }
  return "unknown";
}

GridPiece make_piece(std::string name, int nx, int ny, MeshMetric metric, const PieceParam& source,
                     const PieceParam& target) {
  if (nx < 1 || ny < 1) throw ValidationError("mesh piece needs at least one cell per direction");
  GridPiece p{std::move(name), nx, ny, metric, {}, {}};
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double s = static_cast<double>(i) / nx;
      const double t = static_cast<double>(j) / ny;
      p.source.push_back(source(s, t));
      p.target.push_back(target(s, t));
    }
  }
  return p;
}

int MeshMap::cells() const {
  int n = 0;
  for (const auto& p : pieces) n += p.cells();
  return n;
}

namespace {

struct Mat2 {
  double a, b, c, d;
};

// Bilinear partials at the centre of cell (i, j), columns d/ds and d/dt.
Mat2 cell_jacobian(const std::vector<Vec2>& v, const GridPiece& p, int i, int j) {
  const Vec2& p0 = v[static_cast<std::size_t>(p.vertex(i, j))];
  const Vec2& p1 = v[static_cast<std::size_t>(p.vertex(i + 1, j))];
  const Vec2& p2 = v[static_cast<std::size_t>(p.vertex(i + 1, j + 1))];
  const Vec2& p3 = v[static_cast<std::size_t>(p.vertex(i, j + 1))];
  return {0.5 * (p1.x - p0.x + p2.x - p3.x), 0.5 * (p3.x - p0.x + p2.x - p1.x),
          0.5 * (p1.y - p0.y + p2.y - p3.y), 0.5 * (p3.y - p0.y + p2.y - p1.y)};
}

double det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

std::vector<Vec2> trace(const GridPiece& p, Side side) {
  std::vector<Vec2> out;
  switch (side) {
    case Side::left:
      for (int j = 0; j <= p.ny; ++j) out.push_back(p.target[static_cast<std::size_t>(p.vertex(0, j))]);
      break;
    case Side::right:
      for (int j = 0; j <= p.ny; ++j) out.push_back(p.target[static_cast<std::size_t>(p.vertex(p.nx, j))]);
      break;
    case Side::bottom:
      for (int i = 0; i <= p.nx; ++i) out.push_back(p.target[static_cast<std::size_t>(p.vertex(i, 0))]);
      break;
    case Side::top:
      for (int i = 0; i <= p.nx; ++i) out.push_back(p.target[static_cast<std::size_t>(p.vertex(i, p.ny))]);
      break;
  }
  return out;
}

}  // namespace

DilatationReport dilatation(const MeshMap& m) {
  DilatationReport rep;
  if (m.cells() == 0) throw ValidationError("mesh map has no cells");
  rep.min_stretch = INFINITY;
  rep.max_stretch = 0.0;
  rep.sup_K = 1.0;
  double total = 0.0;
  int cell_id = 0;
  for (const auto& p : m.pieces) {
    const auto n = static_cast<std::size_t>((p.nx + 1) * (p.ny + 1));
    if (p.source.size() != n || p.target.size() != n) throw ValidationError("piece " + p.name + " has wrong vertex count");
    PieceDilatation pd{p.name, 1.0, 0.0, INFINITY, 0.0};
    for (int j = 0; j < p.ny; ++j) {
      for (int i = 0; i < p.nx; ++i, ++cell_id) {
        const Mat2 js = cell_jacobian(p.source, p, i, j);
        const Mat2 jt = cell_jacobian(p.target, p, i, j);
        const double ds = det(js);
        const double scale = std::max({std::abs(js.a), std::abs(js.b), std::abs(js.c), std::abs(js.d)});
        if (!(ds > 1e-14 * scale * scale)) {
          throw ValidationError("degenerate source cell " + std::to_string(cell_id) + " in piece " + p.name);
        }
        // Df = jt * js^-1
        const Mat2 inv{js.d / ds, -js.b / ds, -js.c / ds, js.a / ds};
        const Mat2 df{jt.a * inv.a + jt.b * inv.c, jt.a * inv.b + jt.b * inv.d, jt.c * inv.a + jt.d * inv.c,
                      jt.c * inv.b + jt.d * inv.d};
        if (!(det(df) > 0.0)) {
          throw GeometryError("orientation-reversing cell " + std::to_string(cell_id) + " in piece " + p.name);
        }
        const double q = std::hypot(0.5 * (df.a + df.d), 0.5 * (df.c - df.b));
        const double r = std::hypot(0.5 * (df.a - df.d), 0.5 * (df.c + df.b));
        const double k = (q + r) / (q - r);
        double density = 1.0;
        if (p.metric == MeshMetric::upper_half_plane) {
          double yc = 0.0;
          for (int dj = 0; dj < 2; ++dj) {
            for (int di = 0; di < 2; ++di) yc += 0.25 * p.source[static_cast<std::size_t>(p.vertex(i + di, j + dj))].y;
          }
          density = 1.0 / yc;
        }
        rep.K.push_back(k);
        pd.sup_K = std::max(pd.sup_K, k);
        pd.mean_K += k;
        pd.min_stretch = std::min(pd.min_stretch, (q - r) / density);
        pd.max_stretch = std::max(pd.max_stretch, (q + r) / density);
      }
    }
    total += pd.mean_K;
    pd.mean_K /= p.cells();
    rep.sup_K = std::max(rep.sup_K, pd.sup_K);
    rep.min_stretch = std::min(rep.min_stretch, pd.min_stretch);
    rep.max_stretch = std::max(rep.max_stretch, pd.max_stretch);
    rep.pieces.push_back(pd);
  }
  rep.mean_K = total / static_cast<double>(rep.K.size());
  return rep;
}

MeshMap compose(const MeshMap& outer, const MeshMap& inner, double tol) {
  if (outer.pieces.size() != inner.pieces.size()) throw ValidationError("composed maps have different piece counts");
  MeshMap out;
  for (std::size_t k = 0; k < inner.pieces.size(); ++k) {
    const GridPiece& a = inner.pieces[k];
    const GridPiece& b = outer.pieces[k];
    if (a.nx != b.nx || a.ny != b.ny) throw ValidationError("composed pieces " + a.name + " have different grids");
    for (std::size_t v = 0; v < a.target.size(); ++v) {
      if (std::hypot(a.target[v].x - b.source[v].x, a.target[v].y - b.source[v].y) > tol) {
        throw ValidationError("outer source does not match inner target in piece " + a.name);
      }
    }
    out.pieces.push_back({a.name, a.nx, a.ny, a.metric, a.source, b.target});
  }
  return out;
}

MeshMap assemble_piecewise(const std::vector<MeshMap>& maps, const std::vector<Seam>& seams, double tol) {
  MeshMap out;
  for (const auto& m : maps) out.pieces.insert(out.pieces.end(), m.pieces.begin(), m.pieces.end());
  const int n = static_cast<int>(out.pieces.size());
  for (std::size_t s = 0; s < seams.size(); ++s) {
    const Seam& seam = seams[s];
    if (seam.piece_a < 0 || seam.piece_a >= n || seam.piece_b < 0 || seam.piece_b >= n) {
      throw ValidationError("seam " + std::to_string(s) + " refers to a missing piece");
    }
    const auto ta = trace(out.pieces[static_cast<std::size_t>(seam.piece_a)], seam.side_a);
    auto tb = trace(out.pieces[static_cast<std::size_t>(seam.piece_b)], seam.side_b);
    if (ta.size() != tb.size()) throw ValidationError("seam " + std::to_string(s) + " joins sides of different lengths");
    if (seam.reversed) std::reverse(tb.begin(), tb.end());
    double worst = 0.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < ta.size(); ++i) {
      const double d = std::hypot(ta[i].x - tb[i].x, ta[i].y - tb[i].y);
      if (d > worst) {
        worst = d;
        at = i;
      }
    }
    if (worst > tol) {
      throw GeometryError("boundary mismatch on seam " + std::to_string(s) + " (" +
                          out.pieces[static_cast<std::size_t>(seam.piece_a)].name + " / " +
                          out.pieces[static_cast<std::size_t>(seam.piece_b)].name + ") at vertex " +
                          std::to_string(at) + ": distance " + std::to_string(worst));
    }
  }
  return out;
}

namespace {

// Horizontal slice v0 <= v <= v1 of r grafted by a strip of width g along its
// middle vertical leaf. Global columns 0..2 nh + ns run across the leaf.
struct GraftedSlice {
  HypRectangle r;
  double g = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
  int nh = 0;
  int ns = 0;
  int ny = 0;

  [[nodiscard]] int columns() const { return 2 * nh + ns; }
  [[nodiscard]] double v(int row) const { return v0 + (v1 - v0) * row / ny; }
  [[nodiscard]] double leaf_length(int row) const { return r.width / (r.y0 * std::exp(v(row))) + g; }

  // Arc position of a column along the leaf, from the left edge.
  [[nodiscard]] double arc(int col, int row) const {
    const double y = r.y0 * std::exp(v(row));
    const double half = 0.5 * r.width / y;
    if (col <= nh) return half * col / nh;
    if (col <= nh + ns) return half + g * (col - nh) / ns;
    return half + g + half * (col - nh - ns) / nh;
  }

  // Source coordinates in the chart of the piece owning the column range.
  [[nodiscard]] Vec2 source(int piece, int col, int row) const {
    const double y = r.y0 * std::exp(v(row));
    if (piece == 0) return {r.x0 + 0.5 * r.width * col / nh, y};
    if (piece == 1) return {g * (col - nh) / ns, v(row) - v0};
    return {r.x0 + 0.5 * r.width + 0.5 * r.width * (col - nh - ns) / nh, y};
  }

  template <class Target>
  [[nodiscard]] std::array<GridPiece, 3> pieces(const std::string& prefix, Target target) const {
    const std::array<const char*, 3> names{"left", "strip", "right"};
    const std::array<int, 3> first{0, nh, nh + ns};
    const std::array<int, 3> width{nh, ns, nh};
    std::array<GridPiece, 3> out;
    for (int p = 0; p < 3; ++p) {
      GridPiece& gp = out[static_cast<std::size_t>(p)];
      gp.name = prefix + names[static_cast<std::size_t>(p)];
      gp.nx = width[static_cast<std::size_t>(p)];
      gp.ny = ny;
      gp.metric = p == 1 ? MeshMetric::thurston_cylinder : MeshMetric::upper_half_plane;
      for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= gp.nx; ++i) {
          const int col = first[static_cast<std::size_t>(p)] + i;
          gp.source.push_back(source(p, col, j));
          gp.target.push_back(target(col, j));
        }
      }
    }
    return out;
  }
};

std::vector<Seam> slice_seams(int base) {
  return {{base, Side::right, base + 1, Side::left, false}, {base + 1, Side::right, base + 2, Side::left, false}};
}

}  // namespace

MeshMap straighten_rectangle(const HypRectangle& r, double target_width, int n) {
  if (!(r.width > 0.0) || !(r.height > 0.0) || !(r.y0 > 0.0)) throw GeometryError("degenerate hyperbolic rectangle");
  if (!(target_width > 0.0)) throw ValidationError("target width must be positive");
  if (n < 2) throw ValidationError("mesh size must be at least 2");
  const GraftedSlice sl{r, target_width, 0.0, r.height, n / 2, n, n};
  const auto ps = sl.pieces("", [&](int col, int row) {
    return Vec2{target_width * sl.arc(col, row) / sl.leaf_length(row), sl.v(row)};
  });
  MeshMap m;
  m.pieces.assign(ps.begin(), ps.end());
  return assemble_piecewise({m}, slice_seams(0));
}

double OneSkeletonMap::map_point(int edge, double t) const {
  if (edge < 0 || edge >= static_cast<int>(ratios.size())) throw ValidationError("edge index out of range");
  return ratios[static_cast<std::size_t>(edge)] * t;
}

OneSkeletonMap one_skeleton_map(const OneSkeleton& source, const OneSkeleton& target) {
  if (source.vertices != target.vertices || source.edges.size() != target.edges.size()) {
    throw ValidationError("one-skeletons are not isomorphic: different vertex or edge counts");
  }
  if (source.edges.empty()) throw ValidationError("one-skeleton has no edges");
  OneSkeletonMap out;
  out.min_ratio = INFINITY;
  for (std::size_t e = 0; e < source.edges.size(); ++e) {
    const auto& a = source.edges[e];
    const auto& b = target.edges[e];
    if (a.from != b.from || a.to != b.to) {
      throw ValidationError("one-skeletons are not isomorphic: edge " + std::to_string(e) + " has different endpoints");
    }
    if (a.from < 0 || a.from >= source.vertices || a.to < 0 || a.to >= source.vertices) {
      throw ValidationError("edge " + std::to_string(e) + " refers to a missing vertex");
    }
    if (!(a.length > 0.0) || !(b.length > 0.0)) throw ValidationError("edge " + std::to_string(e) + " has nonpositive length");
    const double q = b.length / a.length;
    out.ratios.push_back(q);
    out.min_ratio = std::min(out.min_ratio, q);
    out.max_ratio = std::max(out.max_ratio, q);
  }
  return out;
}

namespace {

// Harmonic extension of boundary values for the five-point Laplacian in
// Thurston coordinates (arc length along leaves, height).
std::vector<Vec2> harmonic_fill(std::vector<Vec2> v, const GraftedSlice& sl) {
  const int cols = sl.columns();
  const int rows = sl.ny;
  auto at = [&](int i, int j) -> Vec2& { return v[static_cast<std::size_t>(j * (cols + 1) + i)]; };
  const double dv = (sl.v1 - sl.v0) / rows;
  const double omega = 2.0 / (1.0 + std::sin(M_PI / std::max(cols, rows)));
  for (int it = 0; it < 200000; ++it) {
    double change = 0.0;
    for (int j = 1; j < rows; ++j) {
      for (int i = 1; i < cols; ++i) {
        const double hl = sl.arc(i, j) - sl.arc(i - 1, j);
        const double hr = sl.arc(i + 1, j) - sl.arc(i, j);
        const double wl = 2.0 / (hl * (hl + hr));
        const double wr = 2.0 / (hr * (hl + hr));
        const double wv = 1.0 / (dv * dv);
        const double wsum = wl + wr + 2.0 * wv;
        Vec2& p = at(i, j);
        const double nx = (wl * at(i - 1, j).x + wr * at(i + 1, j).x + wv * (at(i, j - 1).x + at(i, j + 1).x)) / wsum;
        const double ny = (wl * at(i - 1, j).y + wr * at(i + 1, j).y + wv * (at(i, j - 1).y + at(i, j + 1).y)) / wsum;
        const double dx = omega * (nx - p.x);
        const double dy = omega * (ny - p.y);
        p.x += dx;
        p.y += dy;
        change = std::max({change, std::abs(dx), std::abs(dy)});
      }
    }
    if (change < 1e-13) return v;
  }
  throw NumericalError("harmonic fill did not converge");
}

}  // namespace

HexagonMapResult hexagon_map(const GraftedHexagon& source, const FlatHexagon& target, int n) {
  if (!(source.depth > 0.0) || !(source.graft > 0.0) || source.central_depth < 0.0 ||
      !(source.central_depth < source.depth)) {
    throw ValidationError("grafted hexagon needs depth > central_depth >= 0 and graft > 0");
  }
  if (!(target.m > 0.0) || !(target.r > 0.0) || target.central < 0.0 || !(target.central < target.r)) {
    throw ValidationError("flat hexagon needs m > 0 and r > central >= 0");
  }
  if ((source.central_depth == 0.0) != (target.central == 0.0)) {
    throw ValidationError("central pieces do not match: exactly one of them is degenerate");
  }
  if (n < 2) throw ValidationError("mesh size must be at least 2");
  const double a = target.m / 3.0;
  const HypRectangle cusp{0.0, 1.0, 1.0, source.depth};
  const bool has_central = source.central_depth > 0.0;
  const double uc = source.central_depth;
  const double c = target.central;

  std::vector<MeshMap> parts;
  std::vector<Seam> seams;
  for (int k = 0; k < 3; ++k) {
    const std::string prefix = "prong" + std::to_string(k) + "/";
    const int base = static_cast<int>(parts.size()) * 3;
    if (has_central) {
      const GraftedSlice sl{cusp, source.graft, 0.0, uc, n / 2, n, n};
      const int cols = sl.columns();
      std::vector<Vec2> bnd(static_cast<std::size_t>((cols + 1) * (n + 1)));
      for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= cols; ++i) {
          const double frac = sl.arc(i, j) / sl.leaf_length(j);
          const double h = c * sl.v(j) / uc;
          Vec2& p = bnd[static_cast<std::size_t>(j * (cols + 1) + i)];
          if (j == 0 || j == n) {
            p = {-a + 2.0 * a * frac, h};
          } else if (i == 0 || i == cols) {
            p = {i == 0 ? -a : a, h};
          } else {
            p = {-a + 2.0 * a * frac, h};  // initial guess
          }
        }
      }
      const auto filled = harmonic_fill(std::move(bnd), sl);
      const auto ps = sl.pieces(prefix + "central/", [&](int col, int row) {
        return filled[static_cast<std::size_t>(row * (cols + 1) + col)];
      });
      MeshMap m;
      m.pieces.assign(ps.begin(), ps.end());
      parts.push_back(std::move(m));
      for (const Seam& s : slice_seams(base)) seams.push_back(s);
    }
    const GraftedSlice sl{cusp, source.graft, uc, source.depth, n / 2, n, n};
    const auto ps = sl.pieces(prefix + "outer/", [&](int col, int row) {
      const double frac = sl.arc(col, row) / sl.leaf_length(row);
      return Vec2{-a + 2.0 * a * frac, c + (sl.v(row) - uc) * (target.r - c) / (source.depth - uc)};
    });
    MeshMap m;
    m.pieces.assign(ps.begin(), ps.end());
    const int outer_base = static_cast<int>(parts.size()) * 3;
    parts.push_back(std::move(m));
    for (const Seam& s : slice_seams(outer_base)) seams.push_back(s);
    if (has_central) {
      for (int p = 0; p < 3; ++p) seams.push_back({base + p, Side::top, outer_base + p, Side::bottom, false});
    }
  }
  HexagonMapResult res;
  res.map = assemble_piecewise(parts, seams);
  res.report = dilatation(res.map);
  return res;
}

}  // namespace graftlab
