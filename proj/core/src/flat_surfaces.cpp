#include "graftlab/flat_surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "graftlab/error.hpp"

namespace graftlab {

namespace {

std::string edge_name(EdgeRef e) {
  return "polygon " + std::to_string(e.polygon) + " edge " + std::to_string(e.edge);
}

int mod(int i, int n) { return ((i % n) + n) % n; }

// 0 for angles in [0, pi) measured from u, 1 for [pi, 2 pi).
int half(const Point2& u, const Point2& v) {
  const int c = cross(u, v).sign();
  if (c > 0) return 0;
  if (c < 0) return 1;
  return dot(u, v).sign() > 0 ? 0 : 1;
}

// Counter-clockwise angle from u to a is smaller than from u to b.
bool angle_less(const Point2& u, const Point2& a, const Point2& b) {
  const int ha = half(u, a), hb = half(u, b);
  if (ha != hb) return ha < hb;
  return cross(a, b).sign() > 0;
}

bool same_direction(const Point2& a, const Point2& b) {
  return cross(a, b).sign() == 0 && dot(a, b).sign() > 0;
}

}  // namespace

EdgeRef HalfTranslationSurface::partner(EdgeRef e) const {
  return partner_.at(static_cast<std::size_t>(e.polygon)).at(static_cast<std::size_t>(e.edge));
}

GluingKind HalfTranslationSurface::kind(EdgeRef e) const {
  return kind_.at(static_cast<std::size_t>(e.polygon)).at(static_cast<std::size_t>(e.edge));
}

int HalfTranslationSurface::vertex_class_of(CornerRef c) const {
  return class_of_.at(static_cast<std::size_t>(c.polygon)).at(static_cast<std::size_t>(c.vertex));
}

std::vector<int> HalfTranslationSurface::singular_classes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].singular()) out.push_back(static_cast<int>(i));
  }
  return out;
}

HalfTranslationSurface build_surface(const SurfaceInput& in) {
  HalfTranslationSurface s;
  if (in.polygons.empty()) throw ValidationError("surface has no polygons");
  s.polygons_ = in.polygons;
  s.gluings_ = in.gluings;
  const std::size_t np = s.polygons_.size();
  s.partner_.resize(np);
  s.kind_.resize(np);
  s.class_of_.resize(np);
  QuadNumber area(0);
  int total_edges = 0;
  for (std::size_t p = 0; p < np; ++p) {
    const auto& poly = s.polygons_[p];
    const int n = static_cast<int>(poly.size());
    if (n < 3) throw ValidationError("polygon " + std::to_string(p) + " has fewer than 3 vertices");
    QuadNumber twice(0);
    for (int i = 0; i < n; ++i) {
      const Point2& a = poly[static_cast<std::size_t>(i)];
      const Point2& b = poly[static_cast<std::size_t>(mod(i + 1, n))];
      if (a == b) throw ValidationError("polygon " + std::to_string(p) + " has a zero-length edge");
      twice += cross(a, b);
    }
    if (twice.sign() <= 0) {
      throw ValidationError("polygon " + std::to_string(p) + " is not counter-clockwise");
    }
    area += twice / QuadNumber(2);
    total_edges += n;
    s.partner_[p].assign(static_cast<std::size_t>(n), EdgeRef{-1, -1});
    s.kind_[p].assign(static_cast<std::size_t>(n), GluingKind::translation);
    s.class_of_[p].assign(static_cast<std::size_t>(n), -1);
  }
  auto check_ref = [&](EdgeRef e) {
    if (e.polygon < 0 || static_cast<std::size_t>(e.polygon) >= np || e.edge < 0 ||
        static_cast<std::size_t>(e.edge) >= s.polygons_[static_cast<std::size_t>(e.polygon)].size()) {
      throw ValidationError("gluing refers to missing " + edge_name(e));
    }
  };
  auto edge_vec = [&](EdgeRef e) {
    const auto& poly = s.polygons_[static_cast<std::size_t>(e.polygon)];
    const int n = static_cast<int>(poly.size());
    return poly[static_cast<std::size_t>(mod(e.edge + 1, n))] - poly[static_cast<std::size_t>(e.edge)];
  };
  for (const Gluing& g : s.gluings_) {
    check_ref(g.from);
    check_ref(g.to);
    if (g.from == g.to) throw ValidationError("gluing pairs " + edge_name(g.from) + " with itself");
    for (EdgeRef e : {g.from, g.to}) {
      if (s.partner_[static_cast<std::size_t>(e.polygon)][static_cast<std::size_t>(e.edge)].polygon >= 0) {
        throw ValidationError("gluing is not an involution: " + edge_name(e) + " is glued twice");
      }
    }
    const Point2 u = edge_vec(g.from), v = edge_vec(g.to);
    const bool ok = g.kind == GluingKind::translation ? (u == -v) : (u == v);
    if (!ok) {
      throw ValidationError("incongruent edges: " + edge_name(g.from) + " and " + edge_name(g.to) + " (" +
                            (g.kind == GluingKind::translation ? "translation" : "flip") + ")");
    }
    s.partner_[static_cast<std::size_t>(g.from.polygon)][static_cast<std::size_t>(g.from.edge)] = g.to;
    s.partner_[static_cast<std::size_t>(g.to.polygon)][static_cast<std::size_t>(g.to.edge)] = g.from;
    s.kind_[static_cast<std::size_t>(g.from.polygon)][static_cast<std::size_t>(g.from.edge)] = g.kind;
    s.kind_[static_cast<std::size_t>(g.to.polygon)][static_cast<std::size_t>(g.to.edge)] = g.kind;
  }
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t e = 0; e < s.partner_[p].size(); ++e) {
      if (s.partner_[p][e].polygon < 0) {
        throw ValidationError("unglued " + edge_name({static_cast<int>(p), static_cast<int>(e)}));
      }
    }
  }

  // Link traversal: leaving corner (p, i) across edge i - 1 lands on the
  // corner at the start of its partner.
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t i = 0; i < s.polygons_[p].size(); ++i) {
      if (s.class_of_[p][i] >= 0) continue;
      VertexClass vc;
      vc.k = 0;
      CornerRef c{static_cast<int>(p), static_cast<int>(i)};
      const int id = static_cast<int>(s.classes_.size());
      while (s.class_of_[static_cast<std::size_t>(c.polygon)][static_cast<std::size_t>(c.vertex)] < 0) {
        s.class_of_[static_cast<std::size_t>(c.polygon)][static_cast<std::size_t>(c.vertex)] = id;
        vc.corners.push_back(c);
        const auto& poly = s.polygons_[static_cast<std::size_t>(c.polygon)];
        const int n = static_cast<int>(poly.size());
        const Point2& v = poly[static_cast<std::size_t>(c.vertex)];
        const Point2 u = poly[static_cast<std::size_t>(mod(c.vertex + 1, n))] - v;
        const Point2 w = poly[static_cast<std::size_t>(mod(c.vertex - 1, n))] - v;
        // Horizontal rays in the half-open corner arc [u, w).
        for (const Point2& h : {Point2{QuadNumber(1), QuadNumber(0)}, Point2{QuadNumber(-1), QuadNumber(0)}}) {
          if (same_direction(u, h) || angle_less(u, h, w)) ++vc.k;
        }
        c = CornerRef{s.partner(EdgeRef{c.polygon, mod(c.vertex - 1, n)}).polygon,
                      s.partner(EdgeRef{c.polygon, mod(c.vertex - 1, n)}).edge};
      }
      if (!(c == vc.corners.front())) {
        throw ValidationError("vertex link does not close up at polygon " + std::to_string(p) + " vertex " +
                              std::to_string(i));
      }
      if (vc.k < 1) throw ValidationError("cone angle is not a positive multiple of pi");
      s.classes_.push_back(std::move(vc));
    }
  }
  for (const CornerRef& c : in.marked_singular) {
    if (c.polygon < 0 || static_cast<std::size_t>(c.polygon) >= np || c.vertex < 0 ||
        static_cast<std::size_t>(c.vertex) >= s.polygons_[static_cast<std::size_t>(c.polygon)].size()) {
      throw ValidationError("marked singular point refers to a missing corner");
    }
    const VertexClass& vc = s.classes_[static_cast<std::size_t>(s.vertex_class_of(c))];
    if (vc.k < 3) {
      throw ValidationError("marked singular point at polygon " + std::to_string(c.polygon) + " vertex " +
                            std::to_string(c.vertex) + " has cone angle " + std::to_string(vc.k) + " pi");
    }
  }
  s.marked_ = in.marked_singular;
  s.euler_ = static_cast<int>(s.classes_.size()) - total_edges / 2 + static_cast<int>(np);
  s.area_ = area;
  int deficit = 0;
  for (const VertexClass& vc : s.classes_) deficit += vc.k - 2;
  if (deficit != -2 * s.euler_) throw ValidationError("Gauss-Bonnet check failed");
  return s;
}

QuadNumber foliation_length(const HalfTranslationSurface& s, const LinearFoliation& v) {
  if (v.direction.x.sign() == 0 && v.direction.y.sign() == 0) {
    throw ValidationError("foliation direction must be nonzero");
  }
  return s.area();
}

namespace {

HalfTranslationSurface transform(const HalfTranslationSurface& s, const QuadNumber& a, const QuadNumber& b,
                                 const QuadNumber& c, const QuadNumber& d) {
  // (x, y) -> (a x + b y, c x + d y); orientation preserving linear maps keep
  // every gluing valid.
  SurfaceInput in;
  for (const auto& poly : s.polygons()) {
    std::vector<Point2> q;
    q.reserve(poly.size());
    for (const Point2& p : poly) q.push_back({a * p.x + b * p.y, c * p.x + d * p.y});
    in.polygons.push_back(std::move(q));
  }
  in.gluings = s.gluings();
  in.marked_singular = s.marked_singular();
  return build_surface(in);
}

}  // namespace

HalfTranslationSurface stretch_exact(const HalfTranslationSurface& s, const QuadNumber& factor) {
  if (factor.sign() <= 0) throw ValidationError("stretch factor must be positive");
  return transform(s, factor, QuadNumber(0), QuadNumber(0), QuadNumber(1));
}

HalfTranslationSurface stretch(const HalfTranslationSurface& s, double t) {
  if (t == 0.0) return s;
  return stretch_exact(s, QuadNumber(rational_from_double(std::exp(t))));
}

HalfTranslationSurface teichmueller_stretch(const HalfTranslationSurface& s, double t) {
  if (t == 0.0) return s;
  return transform(s, QuadNumber(rational_from_double(std::exp(t / 2))), QuadNumber(0), QuadNumber(0),
                   QuadNumber(rational_from_double(std::exp(-t / 2))));
}

HalfTranslationSurface shear_to_vertical(const HalfTranslationSurface& s, const Point2& direction) {
  if (direction.y.sign() == 0) {
    if (direction.x.sign() == 0) throw ValidationError("direction must be nonzero");
    // Quarter turn.
    return transform(s, QuadNumber(0), QuadNumber(-1), QuadNumber(1), QuadNumber(0));
  }
  const QuadNumber c = direction.x / direction.y;
  if (c.sign() == 0) return s;
  return transform(s, QuadNumber(1), -c, QuadNumber(0), QuadNumber(1));
}

SaddleConnectionError::SaddleConnectionError(const std::string& what, int from, int to, QuadNumber len,
                                             bool vert)
    : GeometryError(what), from_class(from), to_class(to), length(std::move(len)), vertical(vert) {}

// ---------------------------------------------------------------------------
// Decomposition machinery. Directions are axis-parallel unit vectors in the
// frame of the current polygon; flips negate them.

struct ProngSeg {
  int polygon;
  int prong;
  QuadNumber x, ya, yb;        // ya < yb
  QuadNumber dist_a, dist_b;   // distance from the singular point at ya, yb
};

struct CutSeg {
  int polygon;
  int cut;
  QuadNumber y, xa, xb;        // xa < xb
  QuadNumber off_a;            // offset at xa
  int sigma;                   // cut frame = sigma * polygon frame
};

struct FatTraintrackDecomposition::Data {
  std::vector<ProngSeg> prong_segs;
  std::vector<CutSeg> cut_segs;
  std::vector<std::vector<int>> prong_segs_in;  // per polygon
  std::vector<std::vector<int>> cut_segs_in;
  std::map<Port, int> rect_of_port;
};

namespace {

using Data = FatTraintrackDecomposition::Data;

struct Pos {
  int polygon = 0;
  Point2 z;
  int vertex = -1;  // polygon vertex index when z is a corner
};

struct Exit {
  QuadNumber t;
  int edge = -1;
  int vertex = -1;
};

Point2 axis(int dx, int dy) { return {QuadNumber(dx), QuadNumber(dy)}; }

class Tracer {
 public:
  explicit Tracer(const HalfTranslationSurface& s, std::vector<EdgeRef>* log = nullptr) : s_(s), log_(log) {}

  const std::vector<Point2>& poly(int p) const { return s_.polygons()[static_cast<std::size_t>(p)]; }

  Exit find_exit(const Pos& pos, const Point2& d) const {
    const auto& P = poly(pos.polygon);
    const int n = static_cast<int>(P.size());
    std::optional<Exit> best;
    auto consider = [&](Exit e) {
      if (!best || e.t < best->t || (e.t == best->t && e.vertex >= 0 && best->vertex < 0)) best = std::move(e);
    };
    for (int i = 0; i < n; ++i) {
      if (i == pos.vertex) continue;
      const Point2 rel = P[static_cast<std::size_t>(i)] - pos.z;
      if (cross(d, rel).sign() == 0 && dot(d, rel).sign() > 0) consider({dot(d, rel), -1, i});
    }
    for (int i = 0; i < n; ++i) {
      if (pos.vertex >= 0 && (i == pos.vertex || i == mod(pos.vertex - 1, n))) continue;
      const Point2& a = P[static_cast<std::size_t>(i)];
      const Point2 e = P[static_cast<std::size_t>(mod(i + 1, n))] - a;
      const Point2 nrm{e.y, -e.x};
      const QuadNumber dn = dot(d, nrm);
      if (dn.sign() <= 0) continue;
      const QuadNumber t = dot(nrm, a - pos.z) / dn;
      if (t.sign() < 0) continue;
      const Point2 c = pos.z + t * d;
      const QuadNumber sp = dot(c - a, e);
      if (sp.sign() <= 0 || sp >= dot(e, e)) continue;  // vertices handled above
      consider({t, i, -1});
    }
    if (!best) throw GeometryError("internal: ray leaves polygon " + std::to_string(pos.polygon) + " nowhere");
    return *best;
  }

  // Crosses edge `edge` at point c; returns the position in the partner polygon
  // and updates the direction.
  Pos cross_edge(int polygon, int edge, const Point2& c, Point2& d) const {
    const EdgeRef e{polygon, edge};
    if (log_) log_->push_back(e);
    const EdgeRef f = s_.partner(e);
    const auto& P = poly(polygon);
    const auto& Q = poly(f.polygon);
    const Point2& start_e = P[static_cast<std::size_t>(edge)];
    const Point2& end_f = Q[static_cast<std::size_t>(mod(f.edge + 1, static_cast<int>(Q.size())))];
    if (s_.kind(e) == GluingKind::translation) return {f.polygon, c + (end_f - start_e), -1};
    d = -d;
    return {f.polygon, (start_e + end_f) - c, -1};
  }

  // Continues a straight ray through a regular vertex. Returns the corner to
  // leave from and updates the direction.
  Pos through_vertex(int polygon, int vertex, Point2& d) const {
    const Point2 r = -d;  // incoming ray, seen from the vertex
    CornerRef c{polygon, vertex};
    int sigma = 1;
    bool first = true;
    for (int guard = 0; guard < 4096; ++guard) {
      const auto& P = poly(c.polygon);
      const int n = static_cast<int>(P.size());
      const Point2& v = P[static_cast<std::size_t>(c.vertex)];
      const Point2 u = P[static_cast<std::size_t>(mod(c.vertex + 1, n))] - v;
      const Point2 w = P[static_cast<std::size_t>(mod(c.vertex - 1, n))] - v;
      const Point2 target = sigma > 0 ? d : -d;
      bool inside;
      if (first) {
        const Point2 rl = r;  // same frame in the arrival corner
        inside = !angle_less(rl, w, target);
      } else {
        inside = same_direction(u, target) || same_direction(w, target) || angle_less(u, target, w);
      }
      if (inside) {
        d = target;
        return {c.polygon, v, c.vertex};
      }
      first = false;
      const EdgeRef out{c.polygon, mod(c.vertex - 1, n)};
      if (log_) log_->push_back(out);
      if (s_.kind(out) == GluingKind::flip) sigma = -sigma;
      const EdgeRef f = s_.partner(out);
      c = {f.polygon, f.edge};
    }
    throw GeometryError("internal: vertex link sweep did not terminate");
  }

  int class_of(int polygon, int vertex) const { return s_.vertex_class_of({polygon, vertex}); }
  bool singular(int polygon, int vertex) const {
    return s_.vertex_classes()[static_cast<std::size_t>(class_of(polygon, vertex))].singular();
  }

 private:
  const HalfTranslationSurface& s_;
  std::vector<EdgeRef>* log_;
};

constexpr int kMaxSteps = 200000;

struct LeafHit {
  Port port;
  QuadNumber offset;
  QuadNumber height;
  Pos pos;        // arrival point
  int sigma = 1;  // cut frame there
};

int side_sign(int s) { return s > 0 ? 1 : -1; }

// Follows the vertical leaf through (polygon, z) with polygon direction dy
// until it meets a cut.
LeafHit flow_to_cut(const Tracer& tr, const Data& data, const std::vector<Cut>& cuts, Pos pos, int dy) {
  Point2 d = axis(0, dy);
  QuadNumber travelled(0);
  for (int step = 0; step < kMaxSteps; ++step) {
    const Exit ex = tr.find_exit(pos, d);
    std::optional<std::pair<QuadNumber, int>> hit;
    for (int id : data.cut_segs_in[static_cast<std::size_t>(pos.polygon)]) {
      const CutSeg& cs = data.cut_segs[static_cast<std::size_t>(id)];
      if (pos.z.x < cs.xa || pos.z.x > cs.xb) continue;
      const QuadNumber t = (cs.y - pos.z.y) * QuadNumber(side_sign(d.y.sign()));
      if (t.sign() <= 0) continue;
      if (!hit || t < hit->first) hit = std::make_pair(t, id);
    }
    if (hit && hit->first <= ex.t) {
      const CutSeg& cs = data.cut_segs[static_cast<std::size_t>(hit->second)];
      const int arrive_dy = d.y.sign();
      const int side = -arrive_dy * cs.sigma;
      const QuadNumber off = cs.off_a + QuadNumber(cs.sigma) * (pos.z.x - cs.xa);
      Port port{cs.cut, side, PieceKind::whole};
      if (side < 0) {
        if (off.sign() == 0) throw GeometryError("vertical leaf runs into a prong tip");
        port.piece = off.sign() < 0 ? PieceKind::left : PieceKind::right;
      }
      (void)cuts;
      const Pos at{pos.polygon, {pos.z.x, cs.y}, -1};
      return {port, off, travelled + hit->first, at, cs.sigma};
    }
    travelled += ex.t;
    const Point2 c = pos.z + ex.t * d;
    if (ex.vertex >= 0) {
      if (tr.singular(pos.polygon, ex.vertex)) {
        throw GeometryError("vertical leaf from a cut runs into a singular point");
      }
      pos = tr.through_vertex(pos.polygon, ex.vertex, d);
    } else {
      pos = tr.cross_edge(pos.polygon, ex.edge, c, d);
    }
  }
  throw GeometryError("vertical leaf does not return to the cuts");
}

std::pair<QuadNumber, QuadNumber> piece_range(const Cut& c, PieceKind k) {
  switch (k) {
    case PieceKind::whole: return {-c.left, c.right};
    case PieceKind::left: return {-c.left, QuadNumber(0)};
    case PieceKind::right: return {QuadNumber(0), c.right};
  }
  return {QuadNumber(0), QuadNumber(0)};
}

// Point of cut `cut` at `offset`.
std::pair<Pos, int> point_on_cut(const Data& data, int cut, const QuadNumber& offset) {
  for (const CutSeg& cs : data.cut_segs) {
    if (cs.cut != cut) continue;
    const QuadNumber off_b = cs.off_a + QuadNumber(cs.sigma) * (cs.xb - cs.xa);
    const QuadNumber lo = min(cs.off_a, off_b), hi = max(cs.off_a, off_b);
    if (offset < lo || offset > hi) continue;
    const QuadNumber x = cs.xa + QuadNumber(cs.sigma) * (offset - cs.off_a);
    return {Pos{cs.polygon, {x, cs.y}, -1}, cs.sigma};
  }
  throw GeometryError("internal: offset outside the cut");
}

}  // namespace

FatTraintrackDecomposition decompose_sheared(std::shared_ptr<const HalfTranslationSurface> sp,
                                             const Point2& direction, const QuadNumber& radius) {
  const HalfTranslationSurface& s = *sp;
  if (radius.sign() <= 0) throw ValidationError("decomposition radius must be positive");
  const std::vector<int> sing = s.singular_classes();
  if (sing.empty()) throw GeometryError("no singular points; decomposition undefined");
  const Tracer tr(s);
  auto data = std::make_shared<Data>();
  data->prong_segs_in.resize(s.polygons().size());
  data->cut_segs_in.resize(s.polygons().size());

  FatTraintrackDecomposition out;
  out.surface_ = sp;
  out.direction_ = direction;
  out.radius_ = radius;

  // Prongs.
  std::vector<int> tip_sigma;
  for (int cls : sing) {
    const VertexClass& vc = s.vertex_classes()[static_cast<std::size_t>(cls)];
    int index = 0;
    for (const CornerRef& c : vc.corners) {
      const auto& P = s.polygons()[static_cast<std::size_t>(c.polygon)];
      const int n = static_cast<int>(P.size());
      const Point2& v = P[static_cast<std::size_t>(c.vertex)];
      const Point2 u = P[static_cast<std::size_t>(mod(c.vertex + 1, n))] - v;
      const Point2 w = P[static_cast<std::size_t>(mod(c.vertex - 1, n))] - v;
      for (int dy : {1, -1}) {
        Point2 d = axis(0, dy);
        if (!(same_direction(u, d) || angle_less(u, d, w))) continue;
        const int prong_id = static_cast<int>(out.prongs_.size());
        Pos pos{c.polygon, v, c.vertex};
        QuadNumber done(0);
        bool finished = false;
        for (int step = 0; step < kMaxSteps && !finished; ++step) {
          const Exit ex = tr.find_exit(pos, d);
          const QuadNumber remaining = radius - done;
          auto record = [&](const QuadNumber& len) {
            if (len.sign() == 0) return;
            const QuadNumber y0 = pos.z.y, y1 = pos.z.y + len * d.y;
            const QuadNumber d0 = done, d1 = done + len;
            ProngSeg seg{pos.polygon, prong_id, pos.z.x, y0, y1, d0, d1};
            if (y1 < y0) seg = {pos.polygon, prong_id, pos.z.x, y1, y0, d1, d0};
            data->prong_segs_in[static_cast<std::size_t>(pos.polygon)].push_back(
                static_cast<int>(data->prong_segs.size()));
            data->prong_segs.push_back(seg);
          };
          if (ex.t < remaining || (ex.t == remaining && ex.vertex >= 0)) {
            record(ex.t);
            done += ex.t;
            const Point2 c2 = pos.z + ex.t * d;
            if (ex.vertex >= 0) {
              if (tr.singular(pos.polygon, ex.vertex)) {
                throw SaddleConnectionError("vertical saddle connection of length " + to_string(done) +
                                                " within radius " + to_string(radius),
                                            cls, tr.class_of(pos.polygon, ex.vertex), done, true);
              }
              if (ex.t == remaining) {
                throw GeometryError("prong tip lands on a polygon vertex; choose another radius");
              }
              pos = tr.through_vertex(pos.polygon, ex.vertex, d);
            } else {
              pos = tr.cross_edge(pos.polygon, ex.edge, c2, d);
            }
          } else {
            record(remaining);
            pos.z = pos.z + remaining * d;
            pos.vertex = -1;
            finished = true;
          }
        }
        if (!finished) throw GeometryError("prong tracing did not terminate");
        out.prongs_.push_back({cls, index++, pos.polygon, pos.z});
        tip_sigma.push_back(d.y.sign());
      }
    }
    if (index != vc.k) throw GeometryError("internal: prong count differs from the cone angle");
  }

  // Cuts.
  const int N = static_cast<int>(out.prongs_.size());
  out.cuts_.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const Prong& pr = out.prongs_[static_cast<std::size_t>(i)];
    for (int dir : {1, -1}) {
      Point2 d = axis(tip_sigma[static_cast<std::size_t>(i)] * dir, 0);
      Pos pos{pr.end_polygon, pr.end, -1};
      QuadNumber off(0);
      bool done = false;
      for (int step = 0; step < kMaxSteps && !done; ++step) {
        const Exit ex = tr.find_exit(pos, d);
        const int dx = d.x.sign();
        const int sigma = dx * dir;
        std::optional<std::pair<QuadNumber, int>> hit;
        for (int id : data->prong_segs_in[static_cast<std::size_t>(pos.polygon)]) {
          const ProngSeg& ps = data->prong_segs[static_cast<std::size_t>(id)];
          if (pos.z.y < ps.ya || pos.z.y > ps.yb) continue;
          const QuadNumber t = (ps.x - pos.z.x) * QuadNumber(dx);
          if (t.sign() <= 0) continue;
          if (!hit || t < hit->first) hit = std::make_pair(t, id);
        }
        auto record = [&](const QuadNumber& len) {
          if (len.sign() == 0) return;
          const QuadNumber x1 = pos.z.x + len * QuadNumber(dx);
          CutSeg cs{pos.polygon, i, pos.z.y, pos.z.x, x1, off, sigma};
          if (x1 < pos.z.x) cs = {pos.polygon, i, pos.z.y, x1, pos.z.x, off + QuadNumber(dir) * len, sigma};
          data->cut_segs_in[static_cast<std::size_t>(pos.polygon)].push_back(
              static_cast<int>(data->cut_segs.size()));
          data->cut_segs.push_back(cs);
        };
        if (hit && hit->first <= ex.t) {
          const ProngSeg& ps = data->prong_segs[static_cast<std::size_t>(hit->second)];
          const QuadNumber dist =
              ps.yb == ps.ya ? ps.dist_a : ps.dist_a + (pos.z.y - ps.ya) * (ps.dist_b - ps.dist_a) / (ps.yb - ps.ya);
          if (dist.sign() == 0) {
            const int to = out.prongs_[static_cast<std::size_t>(ps.prong)].vertex_class;
            throw SaddleConnectionError("horizontal saddle connection from a prong tip", pr.vertex_class, to,
                                        abs(off) + hit->first, false);
          }
          if (dist == radius) {
            throw GeometryError("horizontal segment joins two prong tips; choose another radius");
          }
          record(hit->first);
          off += QuadNumber(dir) * hit->first;
          Cut& cut = out.cuts_[static_cast<std::size_t>(i)];
          if (dir > 0) {
            cut.right = off;
            cut.right_hit_prong = ps.prong;
          } else {
            cut.left = -off;
            cut.left_hit_prong = ps.prong;
          }
          done = true;
          break;
        }
        record(ex.t);
        off += QuadNumber(dir) * ex.t;
        const Point2 c2 = pos.z + ex.t * d;
        if (ex.vertex >= 0) {
          if (tr.singular(pos.polygon, ex.vertex)) {
            throw SaddleConnectionError("horizontal saddle connection from a prong tip", pr.vertex_class,
                                        tr.class_of(pos.polygon, ex.vertex), abs(off), false);
          }
          pos = tr.through_vertex(pos.polygon, ex.vertex, d);
        } else {
          pos = tr.cross_edge(pos.polygon, ex.edge, c2, d);
        }
      }
      if (!done) throw GeometryError("horizontal leaf misses prongs (radius too small)");
    }
  }

  // Rectangles: follow the leaf from the middle of every piece.
  std::vector<Port> ports;
  for (int i = 0; i < N; ++i) {
    ports.push_back({i, 1, PieceKind::whole});
    ports.push_back({i, -1, PieceKind::left});
    ports.push_back({i, -1, PieceKind::right});
  }
  std::map<Port, std::pair<Port, QuadNumber>> partner;
  for (const Port& p : ports) {
    const auto [lo, hi] = piece_range(out.cuts_[static_cast<std::size_t>(p.cut)], p.piece);
    const QuadNumber mid = (lo + hi) / QuadNumber(2);
    auto [pos, sigma] = point_on_cut(*data, p.cut, mid);
    const LeafHit h = flow_to_cut(tr, *data, out.cuts_, pos, p.side * sigma);
    partner[p] = {h.port, h.height};
  }
  for (const Port& p : ports) {
    const auto& [q, h] = partner[p];
    if (!(partner[q].first == p)) throw GeometryError("internal: branch ends do not pair up");
    if (!(p < q)) continue;
    const auto [plo, phi] = piece_range(out.cuts_[static_cast<std::size_t>(p.cut)], p.piece);
    const auto [qlo, qhi] = piece_range(out.cuts_[static_cast<std::size_t>(q.cut)], q.piece);
    if (phi - plo != qhi - qlo) throw GeometryError("internal: branch ends have different widths");
    out.rects_.push_back({phi - plo, h, {p, q}});
  }
  std::sort(out.rects_.begin(), out.rects_.end(),
            [](const Rectangle& a, const Rectangle& b) { return a.ends < b.ends; });
  for (std::size_t r = 0; r < out.rects_.size(); ++r) {
    for (const Port& p : out.rects_[r].ends) data->rect_of_port[p] = static_cast<int>(r);
  }
  std::vector<Switch> sw;
  for (int i = 0; i < N; ++i) {
    sw.push_back({data->rect_of_port.at({i, 1, PieceKind::whole}),
                  {data->rect_of_port.at({i, -1, PieceKind::left}),
                   data->rect_of_port.at({i, -1, PieceKind::right})}});
  }
  out.track_ = std::make_shared<TrainTrack>(static_cast<int>(out.rects_.size()), std::move(sw));
  out.data_ = std::move(data);
  return out;
}

FatTraintrackDecomposition traintrack_decomposition(const HalfTranslationSurface& s, const Point2& direction,
                                                    const QuadNumber& radius) {
  auto sheared = std::make_shared<const HalfTranslationSurface>(shear_to_vertical(s, direction));
  return decompose_sheared(std::move(sheared), direction, radius);
}

QuadWeights FatTraintrackDecomposition::widths() const {
  QuadWeights w;
  for (const Rectangle& r : rects_) w.push_back(r.width);
  return w;
}

QuadNumber FatTraintrackDecomposition::min_height() const {
  QuadNumber m = rects_.at(0).height;
  for (const Rectangle& r : rects_) m = min(m, r.height);
  return m;
}

QuadNumber FatTraintrackDecomposition::min_width() const {
  QuadNumber m = rects_.at(0).width;
  for (const Rectangle& r : rects_) m = min(m, r.width);
  return m;
}

int FatTraintrackDecomposition::locate(int polygon, const Point2& p) const {
  const Tracer tr(*surface_);
  const LeafHit h = flow_to_cut(tr, *data_, cuts_, Pos{polygon, p, -1}, 1);
  return data_->rect_of_port.at(h.port);
}

std::pair<Port, QuadNumber> FatTraintrackDecomposition::follow_leaf(const Port& port,
                                                                    const QuadNumber& offset) const {
  const Tracer tr(*surface_);
  auto [pos, sigma] = point_on_cut(*data_, port.cut, offset);
  const LeafHit h = flow_to_cut(tr, *data_, cuts_, pos, port.side * sigma);
  return {h.port, h.offset};
}

namespace {

// Moves `len` along direction d (updated on flips); returns the end point.
Pos move_along(const Tracer& tr, Pos pos, Point2& d, QuadNumber len) {
  for (int step = 0; step < kMaxSteps; ++step) {
    if (len.sign() == 0) return pos;
    const Exit ex = tr.find_exit(pos, d);
    if (len < ex.t) return {pos.polygon, pos.z + len * d, -1};
    const Point2 c = pos.z + ex.t * d;
    len = len - ex.t;
    if (ex.vertex >= 0) {
      if (tr.singular(pos.polygon, ex.vertex)) throw GeometryError("path along a cut runs into a singular point");
      if (len.sign() == 0) throw GeometryError("carried curve passes a polygon vertex; radius not generic");
      pos = tr.through_vertex(pos.polygon, ex.vertex, d);
    } else {
      pos = tr.cross_edge(pos.polygon, ex.edge, c, d);
    }
  }
  throw GeometryError("internal: path along a cut does not end");
}

}  // namespace

std::vector<EdgeRef> carried_curve_crossings(const FatTraintrackDecomposition& d, const std::vector<int>& branches) {
  const auto& rects = d.rectangles();
  if (branches.empty()) throw ValidationError("carried curve: empty branch sequence");
  for (int b : branches) {
    if (b < 0 || static_cast<std::size_t>(b) >= rects.size()) {
      throw ValidationError("carried curve: branch " + std::to_string(b) + " out of range");
    }
  }
  // Entry end of every branch; consecutive branches meet at one cut from
  // opposite sides.
  const std::size_t m = branches.size();
  auto port = [&](std::size_t i, int end) -> const Port& {
    return rects[static_cast<std::size_t>(branches[i % m])].ends[static_cast<std::size_t>(end)];
  };
  std::vector<int> entry(m, -1);
  std::function<bool(std::size_t)> orient = [&](std::size_t i) -> bool {
    if (i == m) {
      const Port& out = port(m - 1, 1 - entry[m - 1]);
      const Port& in = port(0, entry[0]);
      return out.cut == in.cut && out.side != in.side;
    }
    for (int e : {0, 1}) {
      const Port& in = port(i, e);
      if (i > 0) {
        const Port& out = port(i - 1, 1 - entry[i - 1]);
        if (out.cut != in.cut || out.side == in.side) continue;
      }
      entry[i] = e;
      if (orient(i + 1)) return true;
    }
    return false;
  };
  if (!orient(0)) throw ValidationError("carried curve: branches do not form a closed path on the track");

  std::vector<EdgeRef> log;
  const Tracer tr(d.surface(), &log);
  const Data& data = *d.data_;
  auto mid = [&](const Port& p) {
    const auto [lo, hi] = piece_range(d.cuts()[static_cast<std::size_t>(p.cut)], p.piece);
    return (lo + hi) / QuadNumber(2);
  };
  const Port& first = port(0, entry[0]);
  auto [start, sigma] = point_on_cut(data, first.cut, mid(first));
  Pos pos = start;
  for (std::size_t i = 0; i < m; ++i) {
    const LeafHit h = flow_to_cut(tr, data, d.cuts(), pos, port(i, entry[i]).side * sigma);
    const QuadNumber target = mid(port(i + 1, entry[(i + 1) % m]));
    const int dir = (target - h.offset).sign();
    sigma = h.sigma;
    pos = h.pos;
    if (dir != 0) {
      Point2 dd = axis(h.sigma * dir, 0);
      pos = move_along(tr, pos, dd, dir > 0 ? target - h.offset : h.offset - target);
      sigma = dd.x.sign() * dir;
    }
  }
  if (pos.polygon != start.polygon || !(pos.z == start.z)) {
    // Same point seen from the other side of an edge.
    const Tracer quiet(d.surface());
    const auto& P = d.surface().polygons()[static_cast<std::size_t>(pos.polygon)];
    const int n = static_cast<int>(P.size());
    bool closed = false;
    for (int e = 0; e < n && !closed; ++e) {
      const Point2& a = P[static_cast<std::size_t>(e)];
      const Point2 v = P[static_cast<std::size_t>(mod(e + 1, n))] - a;
      const Point2 rel = pos.z - a;
      if (cross(v, rel).sign() != 0 || dot(v, rel).sign() <= 0 || dot(v, rel) >= dot(v, v)) continue;
      Point2 dd = axis(0, 1);
      const Pos q = quiet.cross_edge(pos.polygon, e, pos.z, dd);
      if (q.polygon == start.polygon && q.z == start.z) {
        log.push_back({pos.polygon, e});
        closed = true;
      }
    }
    if (!closed) throw GeometryError("internal: carried curve does not close up");
  }
  return log;
}

namespace {

int rate(const Rectangle& r) {
  int v = 0;
  for (const Port& p : r.ends) v += p.side > 0 ? -1 : 1;
  return v;
}

// Decomposition at a radius, or nothing when the radius is non-generic
// (tips on singular horizontal leaves or joined by a horizontal segment).
std::optional<FatTraintrackDecomposition> try_decompose(const std::shared_ptr<const HalfTranslationSurface>& s,
                                                        const Point2& direction, const QuadNumber& r) {
  try {
    return decompose_sheared(s, direction, r);
  } catch (const SaddleConnectionError& e) {
    if (e.vertical) throw;
  } catch (const GeometryError&) {
  }
  return std::nullopt;
}

bool same_combinatorics(const FatTraintrackDecomposition& a, const FatTraintrackDecomposition& b) {
  if (a.rectangles().size() != b.rectangles().size()) return false;
  for (std::size_t i = 0; i < a.rectangles().size(); ++i) {
    if (a.rectangles()[i].ends != b.rectangles()[i].ends) return false;
  }
  return true;
}

// Radius at which the current chamber ends: the first shrinking branch closes.
QuadNumber chamber_end(const FatTraintrackDecomposition& d) {
  std::optional<QuadNumber> delta;
  for (const Rectangle& r : d.rectangles()) {
    if (rate(r) < 0) {
      const QuadNumber h = r.height / QuadNumber(2);
      if (!delta || h < *delta) delta = h;
    }
  }
  if (!delta) throw GeometryError("no shrinking branch; the foliation is not minimal");
  return d.radius() + *delta;
}

struct EventCrossing {
  QuadNumber event;
  FatTraintrackDecomposition before;
  FatTraintrackDecomposition after;
  QuadNumber grow_min;
  QuadNumber shrink_min;
};

// Decompositions just before and just after the end of d's chamber, at most
// `max_eps` away from the event.
EventCrossing cross_event(const std::shared_ptr<const HalfTranslationSurface>& s, const FatTraintrackDecomposition& d,
                          QuadNumber max_eps) {
  const QuadNumber event = chamber_end(d);
  QuadNumber eps = min((event - d.radius()) / QuadNumber(8), max_eps);
  for (int attempt = 0; attempt < 64; ++attempt, eps = eps / QuadNumber(2)) {
    auto before = try_decompose(s, d.direction(), event - eps);
    if (!before) continue;
    if (!same_combinatorics(*before, d)) throw GeometryError("internal: chamber ends earlier than predicted");
    // Asymmetric so that no prong tip lands on an old cut.
    auto after = try_decompose(s, d.direction(), event + eps / QuadNumber(2));
    if (!after) continue;
    std::optional<QuadNumber> grow_min, shrink_min;
    for (const Rectangle& r : after->rectangles()) {
      const int k = rate(r);
      if (k > 0 && (!grow_min || r.height < *grow_min)) grow_min = r.height;
      if (k < 0 && (!shrink_min || r.height < *shrink_min)) shrink_min = r.height;
    }
    if (!grow_min || !shrink_min) continue;
    if (*grow_min < eps) continue;  // another change right after the event
    return {event, std::move(*before), std::move(*after), *grow_min, *shrink_min};
  }
  throw GeometryError("could not resolve the next splitting event");
}

using Matrix = std::vector<std::vector<std::int64_t>>;

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

// Counts the fine branches crossing a tie of every coarse branch. Only
// meaningful across a single event with short prong extensions.
Matrix tie_carrying(const FatTraintrackDecomposition& coarse, const Data& cd, const FatTraintrackDecomposition& fine,
                    const Data& fd) {
  const std::size_t B = coarse.rectangles().size();
  if (fine.rectangles().size() != B) throw GeometryError("branch counts differ");
  Matrix m(B, std::vector<std::int64_t>(B, 0));
  for (std::size_t b = 0; b < B; ++b) {
    const Port& tie = coarse.rectangles()[b].ends[0];
    const auto [lo, hi] = piece_range(coarse.cuts()[static_cast<std::size_t>(tie.cut)], tie.piece);
    std::vector<QuadNumber> splits{lo, hi};
    for (const CutSeg& cs : cd.cut_segs) {
      if (cs.cut != tie.cut) continue;
      for (int id : fd.prong_segs_in[static_cast<std::size_t>(cs.polygon)]) {
        const ProngSeg& ps = fd.prong_segs[static_cast<std::size_t>(id)];
        if (cs.y < ps.ya || cs.y > ps.yb || ps.x < cs.xa || ps.x > cs.xb) continue;
        const QuadNumber off = cs.off_a + QuadNumber(cs.sigma) * (ps.x - cs.xa);
        if (lo < off && off < hi) splits.push_back(off);
      }
    }
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
    for (std::size_t k = 0; k + 1 < splits.size(); ++k) {
      const QuadNumber mid = (splits[k] + splits[k + 1]) / QuadNumber(2);
      const Pos pos = point_on_cut(cd, tie.cut, mid).first;
      const int r = fine.locate(pos.polygon, pos.z);
      if (fine.rectangles()[static_cast<std::size_t>(r)].width != splits[k + 1] - splits[k]) {
        throw GeometryError("internal: fine branch does not cross the coarse tie completely");
      }
      ++m[b][static_cast<std::size_t>(r)];
    }
  }
  return m;
}

}  // namespace

SplitStep carrying_step(const FatTraintrackDecomposition& coarse, const FatTraintrackDecomposition& fine) {
  if (coarse.surface_ != fine.surface_) {
    throw ValidationError("carrying needs two decompositions of the same sheared surface");
  }
  if (!(coarse.radius() < fine.radius())) throw ValidationError("carrying needs a strictly larger radius");
  const int B = static_cast<int>(coarse.rectangles().size());
  SplitStep step = SplitStep::identity(B);
  FatTraintrackDecomposition cur = coarse;
  for (int guard = 0; guard < 4096; ++guard) {
    if (fine.radius() < chamber_end(cur)) {
      if (!same_combinatorics(cur, fine)) throw GeometryError("internal: radius inside the chamber disagrees");
      for (std::size_t i = 0; i < fine.rectangles().size(); ++i) {
        if (fine.rectangles()[i].width != cur.rectangles()[i].width) {
          throw GeometryError("internal: widths vary inside a chamber");
        }
      }
      step.target_switches = fine.track().switch_matrix();
      return step;
    }
    if (fine.radius() == chamber_end(cur)) throw GeometryError("target radius sits on a splitting event");
    EventCrossing ev = cross_event(cur.surface_, cur, fine.radius() - chamber_end(cur));
    step.carrying = multiply(step.carrying, tie_carrying(ev.before, *ev.before.data_, ev.after, *ev.after.data_));
    cur = std::move(ev.after);
  }
  throw GeometryError("too many splitting events between the two radii");
}

FatTraintrackDecomposition next_chamber(const FatTraintrackDecomposition& d) {
  EventCrossing ev = cross_event(d.surface_, d, chamber_end(d) - d.radius());
  // Heights are linear in the radius inside the chamber; balance the
  // shortest growing and shrinking branches.
  const QuadNumber target = ev.after.radius() + (ev.shrink_min - ev.grow_min) / QuadNumber(4);
  const QuadNumber step = ev.shrink_min / QuadNumber(256);
  for (int k = 0; k < 16; ++k) {
    const QuadNumber shift = QuadNumber((k + 1) / 2) * step * QuadNumber(k % 2 == 0 ? -1 : 1);
    auto next = try_decompose(d.surface_, d.direction(), target + shift);
    if (!next) continue;
    if (!same_combinatorics(*next, ev.after)) throw GeometryError("internal: split target left the chamber");
    return std::move(*next);
  }
  throw GeometryError("no generic radius inside the next chamber");
}

FatTraintrackDecomposition split(const FatTraintrackDecomposition& d) {
  FatTraintrackDecomposition cur = next_chamber(d);
  for (int k = 0; k < 256; ++k) {
    if (cur.min_height() > d.min_height()) return cur;
    cur = next_chamber(cur);
  }
  throw GeometryError("minimum branch height does not grow");
}

QuadNumber PolygonalDecomposition::area() const {
  QuadNumber a(0);
  for (const Hexagon& h : hexagons) a += h.area;
  for (const PolygonalRectangle& r : rectangles) a += r.width * r.height;
  return a;
}

PolygonalDecomposition polygonal_decomposition(const FatTraintrackDecomposition& d) {
  PolygonalDecomposition out;
  out.min_width = d.min_width();
  const QuadNumber band = QuadNumber(2) * out.min_width / QuadNumber(3);
  std::map<int, int> prongs_at;
  for (const Prong& p : d.prongs()) ++prongs_at[p.vertex_class];
  for (const auto& [cls, k] : prongs_at) {
    Hexagon h;
    h.vertex_class = cls;
    h.prongs = k;
    h.horizontal_edge = band;
    h.vertical_edge = QuadNumber(2) * d.radius();
    h.area = QuadNumber(k) * band * d.radius();
    out.hexagons.push_back(h);
  }
  for (std::size_t b = 0; b < d.rectangles().size(); ++b) {
    const Rectangle& r = d.rectangles()[b];
    out.rectangles.push_back({static_cast<int>(b), r.width - band, r.height});
  }
  return out;
}

}  // namespace graftlab
