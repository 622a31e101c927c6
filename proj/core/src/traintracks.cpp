#include "graftlab/traintracks.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include "graftlab/error.hpp"

namespace graftlab {

TrainTrack::TrainTrack(int branches, std::vector<Switch> switches)
    : branches_(branches), switches_(std::move(switches)) {
  if (branches_ <= 0) throw ValidationError("train track needs at least one branch");
  std::vector<int> ends(static_cast<std::size_t>(branches_), 0);
  for (const Switch& s : switches_) {
    for (int b : {s.in, s.out[0], s.out[1]}) {
      if (b < 0 || b >= branches_) throw ValidationError("switch refers to unknown branch");
      ++ends[static_cast<std::size_t>(b)];
    }
  }
  for (int b = 0; b < branches_; ++b) {
    const int e = ends[static_cast<std::size_t>(b)];
    if (e != 0 && e != 2) {
      throw ValidationError("branch " + std::to_string(b) + " has " + std::to_string(e) +
                            " ends; expected 2");
    }
  }
}

std::vector<std::vector<int>> TrainTrack::switch_matrix() const {
  std::vector<std::vector<int>> a(switches_.size(), std::vector<int>(static_cast<std::size_t>(branches_), 0));
  for (std::size_t i = 0; i < switches_.size(); ++i) {
    const Switch& s = switches_[i];
    a[i][static_cast<std::size_t>(s.in)] += 1;
    a[i][static_cast<std::size_t>(s.out[0])] -= 1;
    a[i][static_cast<std::size_t>(s.out[1])] -= 1;
  }
  return a;
}

namespace {

template <class V>
bool balanced(const TrainTrack& t, const V& w) {
  if (static_cast<int>(w.size()) != t.branches()) {
    throw ValidationError("weight vector has " + std::to_string(w.size()) + " entries, track has " +
                          std::to_string(t.branches()) + " branches");
  }
  for (const Switch& s : t.switches()) {
    const auto& in = w[static_cast<std::size_t>(s.in)];
    if (in != w[static_cast<std::size_t>(s.out[0])] + w[static_cast<std::size_t>(s.out[1])]) return false;
  }
  return true;
}

BigInt floor_of(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (q * denominator(r) > numerator(r)) --q;
  return q;
}

BigInt ceil_of(const Rational& r) { return -floor_of(-r); }

// Round half to even.
BigInt round_even(const Rational& r) {
  const BigInt f = floor_of(r);
  const Rational frac = r - Rational(f);
  if (frac < Rational(1, 2)) return f;
  if (frac > Rational(1, 2)) return f + 1;
  return (f % 2 == 0) ? f : f + 1;
}

// Bounds-consistent search for an integer point of {A n = 0, lo <= n <= hi}.
class BoxSearch {
 public:
  BoxSearch(const std::vector<std::vector<int>>& a, std::vector<std::vector<std::int64_t>> order)
      : a_(a), order_(std::move(order)) {}

  std::optional<IntWeights> solve(IntWeights lo, IntWeights hi) {
    if (!propagate(lo, hi)) return std::nullopt;
    return dfs(lo, hi);
  }

 private:
  bool propagate(IntWeights& lo, IntWeights& hi) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& row : a_) {
        std::int64_t smin = 0, smax = 0;
        for (std::size_t b = 0; b < row.size(); ++b) {
          if (row[b] > 0) { smin += row[b] * lo[b]; smax += row[b] * hi[b]; }
          if (row[b] < 0) { smin += row[b] * hi[b]; smax += row[b] * lo[b]; }
        }
        if (smin > 0 || smax < 0) return false;
        for (std::size_t b = 0; b < row.size(); ++b) {
          const std::int64_t c = row[b];
          if (c == 0) continue;
          // Range of the other terms.
          const std::int64_t own_min = c > 0 ? c * lo[b] : c * hi[b];
          const std::int64_t own_max = c > 0 ? c * hi[b] : c * lo[b];
          const std::int64_t rest_min = smin - own_min;
          const std::int64_t rest_max = smax - own_max;
          // c * n_b in [-rest_max, -rest_min].
          std::int64_t nlo, nhi;
          if (c > 0) {
            nlo = div_ceil(-rest_max, c);
            nhi = div_floor(-rest_min, c);
          } else {
            nlo = div_ceil(rest_min, -c);
            nhi = div_floor(rest_max, -c);
          }
          if (nlo > lo[b]) { lo[b] = nlo; changed = true; }
          if (nhi < hi[b]) { hi[b] = nhi; changed = true; }
          if (lo[b] > hi[b]) return false;
          if (changed) break;
        }
        if (changed) break;
      }
    }
    return true;
  }

  static std::int64_t div_floor(std::int64_t p, std::int64_t q) {
    std::int64_t r = p / q;
    if ((p % q != 0) && ((p < 0) != (q < 0))) --r;
    return r;
  }
  static std::int64_t div_ceil(std::int64_t p, std::int64_t q) { return -div_floor(-p, q); }

  std::optional<IntWeights> dfs(const IntWeights& lo, const IntWeights& hi) const {
    std::size_t pick = lo.size();
    for (std::size_t b = 0; b < lo.size(); ++b) {
      if (lo[b] < hi[b]) { pick = b; break; }
    }
    if (pick == lo.size()) return lo;
    for (std::int64_t v : order_[pick]) {
      if (v < lo[pick] || v > hi[pick]) continue;
      IntWeights l2 = lo, h2 = hi;
      l2[pick] = h2[pick] = v;
      if (!propagate(l2, h2)) continue;
      if (auto r = dfs(l2, h2)) return r;
    }
    return std::nullopt;
  }

  const std::vector<std::vector<int>>& a_;
  std::vector<std::vector<std::int64_t>> order_;
};

}  // namespace

bool check_switch(const TrainTrack& t, const WeightVector& w) { return balanced(t, w); }
bool check_switch(const TrainTrack& t, const IntWeights& n) { return balanced(t, n); }

namespace {

struct Echelon {
  std::vector<std::vector<Rational>> rows;  // reduced, one per pivot
  std::vector<int> pivots;
  std::vector<int> free;
};

Echelon echelon(const TrainTrack& t) {
  const auto m = t.switch_matrix();
  const int nb = t.branches();
  std::vector<std::vector<Rational>> a;
  for (const auto& row : m) a.emplace_back(row.begin(), row.end());
  Echelon e;
  std::size_t r = 0;
  for (int c = 0; c < nb; ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][static_cast<std::size_t>(c)] == 0) ++p;
    if (p == a.size()) {
      e.free.push_back(c);
      continue;
    }
    std::swap(a[p], a[r]);
    const Rational piv = a[r][static_cast<std::size_t>(c)];
    for (auto& x : a[r]) x /= piv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][static_cast<std::size_t>(c)] == 0) continue;
      const Rational f = a[i][static_cast<std::size_t>(c)];
      for (int j = 0; j < nb; ++j) a[i][static_cast<std::size_t>(j)] -= f * a[r][static_cast<std::size_t>(j)];
    }
    e.pivots.push_back(c);
    ++r;
  }
  a.resize(r);
  e.rows = std::move(a);
  return e;
}

}  // namespace

std::vector<int> free_branches(const TrainTrack& t) { return echelon(t).free; }

WeightVector complete_balanced(const TrainTrack& t, const WeightVector& free_values) {
  const Echelon e = echelon(t);
  if (free_values.size() != e.free.size()) throw ValidationError("wrong number of free weights");
  WeightVector w(static_cast<std::size_t>(t.branches()), Rational(0));
  for (std::size_t i = 0; i < e.free.size(); ++i) w[static_cast<std::size_t>(e.free[i])] = free_values[i];
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    Rational v = 0;
    for (int f : e.free) v -= e.rows[i][static_cast<std::size_t>(f)] * w[static_cast<std::size_t>(f)];
    w[static_cast<std::size_t>(e.pivots[i])] = v;
  }
  return w;
}

IntegralApproximation integral_approximation(const TrainTrack& t, const WeightVector& w) {
  if (!check_switch(t, w)) throw ValidationError("weight vector violates the switch conditions");
  const int B = t.branches();
  const auto nb = static_cast<std::size_t>(B);

  // Candidate values per branch, closest first; ties broken toward the
  // half-even rounding, then toward the smaller value.
  std::vector<std::vector<std::int64_t>> order(nb);
  std::vector<Rational> candidates;
  for (std::size_t b = 0; b < nb; ++b) {
    const BigInt lo = std::max(BigInt(1), ceil_of(w[b] - B));
    const BigInt hi = floor_of(w[b] + B);
    const BigInt r = round_even(w[b]);
    std::vector<std::int64_t> vals;
    for (BigInt k = lo; k <= hi; ++k) {
      vals.push_back(k.convert_to<std::int64_t>());
      const Rational d = Rational(k) - w[b];
      candidates.push_back(d < 0 ? Rational(-d) : d);
    }
    const Rational wb = w[b];
    const auto rr = r.convert_to<std::int64_t>();
    std::stable_sort(vals.begin(), vals.end(), [&](std::int64_t x, std::int64_t y) {
      const Rational dx = Rational(abs(Rational(x) - wb));
      const Rational dy = Rational(abs(Rational(y) - wb));
      if (dx != dy) return dx < dy;
      if ((x == rr) != (y == rr)) return x == rr;
      return x < y;
    });
    order[b] = std::move(vals);
  }
  if (candidates.empty()) {
    throw GeometryError("no positive integer weights within the deviation bound; pre-scale the weights");
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const auto a = t.switch_matrix();
  BoxSearch search(a, order);
  auto feasible = [&](const Rational& D) -> std::optional<IntWeights> {
    IntWeights lo(nb), hi(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      lo[b] = std::max(BigInt(1), ceil_of(w[b] - D)).convert_to<std::int64_t>();
      hi[b] = floor_of(w[b] + D).convert_to<std::int64_t>();
      if (lo[b] > hi[b]) return std::nullopt;
    }
    return search.solve(lo, hi);
  };

  // Feasibility is monotone in D; bisect over the sorted candidate deviations.
  std::size_t lo = 0, hi = candidates.size();
  std::optional<IntWeights> best;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (auto r = feasible(candidates[mid])) {
      best = std::move(r);
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == candidates.size()) {
    throw GeometryError("no positive integer weights within the deviation bound; pre-scale the weights");
  }
  if (!best) best = feasible(candidates[lo]);

  IntegralApproximation out;
  out.weights = *best;
  out.k_impl = B;
  out.max_deviation = 0;
  for (std::size_t b = 0; b < nb; ++b) {
    const Rational d = Rational(abs(Rational(out.weights[b]) - w[b]));
    if (d > out.max_deviation) out.max_deviation = d;
  }
  return out;
}

namespace {

struct End {
  int sw = -1;
  int role = 0;  // 0 = in, 1 = out[0], 2 = out[1]
};

std::vector<std::array<End, 2>> branch_ends(const TrainTrack& t) {
  std::vector<std::array<End, 2>> ends(static_cast<std::size_t>(t.branches()));
  std::vector<int> seen(static_cast<std::size_t>(t.branches()), 0);
  for (std::size_t s = 0; s < t.switches().size(); ++s) {
    const Switch& sw = t.switches()[s];
    const std::array<int, 3> slots{sw.in, sw.out[0], sw.out[1]};
    for (int r = 0; r < 3; ++r) {
      const auto b = static_cast<std::size_t>(slots[static_cast<std::size_t>(r)]);
      ends[b][static_cast<std::size_t>(seen[b]++)] = {static_cast<int>(s), r};
    }
  }
  return ends;
}

std::vector<int> canonical_cycle(std::vector<int> seq) {
  std::vector<int> best = seq;
  for (int dir = 0; dir < 2; ++dir) {
    for (std::size_t r = 0; r < seq.size(); ++r) {
      std::rotate(seq.begin(), seq.begin() + 1, seq.end());
      if (seq < best) best = seq;
    }
    std::reverse(seq.begin(), seq.end());
  }
  return best;
}

}  // namespace

WeightedMultiloop weights_to_multiloop(const TrainTrack& t, const IntWeights& n) {
  if (!check_switch(t, n)) throw ValidationError("integer weights violate the switch conditions");
  for (std::int64_t v : n) {
    if (v < 0) throw ValidationError("multiloop weights must be nonnegative");
  }
  const auto ends = branch_ends(t);
  const auto nb = static_cast<std::size_t>(t.branches());
  // visited[b][k]: strand k of branch b, indexed as seen from end 0.
  std::vector<std::vector<bool>> visited(nb);
  for (std::size_t b = 0; b < nb; ++b) visited[b].assign(static_cast<std::size_t>(n[b]), false);

  std::map<std::vector<int>, std::int64_t> counts;
  for (std::size_t b0 = 0; b0 < nb; ++b0) {
    if (ends[b0][0].sw < 0) {
      if (n[b0] > 0) counts[{static_cast<int>(b0)}] += n[b0];
      continue;
    }
    for (std::int64_t k0 = 0; k0 < n[b0]; ++k0) {
      if (visited[b0][static_cast<std::size_t>(k0)]) continue;
      std::vector<int> seq;
      std::size_t b = b0;
      int from = 0;  // end we leave from
      std::int64_t k = k0;  // strand index seen from that end
      while (true) {
        const std::int64_t k_end0 = from == 0 ? k : n[b] - 1 - k;
        if (visited[b][static_cast<std::size_t>(k_end0)]) break;
        visited[b][static_cast<std::size_t>(k_end0)] = true;
        seq.push_back(static_cast<int>(b));
        // Arrive at the other end; the strand order reverses.
        const End arrive = ends[b][static_cast<std::size_t>(1 - from)];
        const std::int64_t ka = n[b] - 1 - k;
        const Switch& sw = t.switches()[static_cast<std::size_t>(arrive.sw)];
        const std::int64_t n0 = n[static_cast<std::size_t>(sw.out[0])];
        int role2;
        std::int64_t k2;
        if (arrive.role == 0) {
          role2 = ka < n0 ? 1 : 2;
          k2 = ka < n0 ? ka : ka - n0;
        } else {
          role2 = 0;
          k2 = arrive.role == 1 ? ka : ka + n0;
        }
        const std::array<int, 3> slots{sw.in, sw.out[0], sw.out[1]};
        const auto b2 = static_cast<std::size_t>(slots[static_cast<std::size_t>(role2)]);
        // Which end of b2 sits at this slot.
        int end2 = 0;
        if (ends[b2][1].sw == arrive.sw && ends[b2][1].role == role2) end2 = 1;
        b = b2;
        from = end2;
        k = k2;
      }
      counts[canonical_cycle(seq)] += 1;
    }
  }
  WeightedMultiloop m;
  for (auto& [seq, w] : counts) m.loops.push_back({seq, w});
  return m;
}

IntWeights induced_weights(const TrainTrack& t, const WeightedMultiloop& m) {
  IntWeights w(static_cast<std::size_t>(t.branches()), 0);
  for (const Loop& l : m.loops) {
    for (int b : l.branches) {
      if (b < 0 || b >= t.branches()) throw ValidationError("loop refers to unknown branch");
      w[static_cast<std::size_t>(b)] += l.weight;
    }
  }
  return w;
}

SplitStep SplitStep::identity(int branches) {
  SplitStep s;
  s.carrying.assign(static_cast<std::size_t>(branches), std::vector<std::int64_t>(static_cast<std::size_t>(branches), 0));
  for (std::size_t i = 0; i < s.carrying.size(); ++i) s.carrying[i][i] = 1;
  return s;
}

namespace {

// Solves carrying * x = w together with the switch rows by exact elimination.
template <typename T>
std::vector<T> solve_carrying(const SplitStep& step, const std::vector<T>& w) {
  const std::size_t n = step.carrying.size();
  if (w.size() != n) throw ValidationError("weight vector size does not match the split step");
  const T zero(Rational(0));
  std::vector<std::vector<T>> m;
  for (std::size_t i = 0; i < n; ++i) {
    if (step.carrying[i].size() != n) throw ValidationError("carrying matrix is not square");
    std::vector<T> row(n + 1);
    for (std::size_t j = 0; j < n; ++j) row[j] = T(Rational(step.carrying[i][j]));
    row[n] = w[i];
    m.push_back(std::move(row));
  }
  for (const auto& sw : step.target_switches) {
    if (sw.size() != n) throw ValidationError("switch row size does not match the split step");
    std::vector<T> row(n + 1, zero);
    for (std::size_t j = 0; j < n; ++j) row[j] = T(Rational(sw[j]));
    m.push_back(std::move(row));
  }
  const std::size_t rows = m.size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n; ++c, ++r) {
    std::size_t p = r;
    while (p < rows && m[p][c] == zero) ++p;
    if (p == rows) throw NumericalError("singular carrying matrix");
    std::swap(m[p], m[r]);
    const T piv = m[r][c];
    for (std::size_t j = c; j <= n; ++j) m[r][j] = m[r][j] / piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == zero) continue;
      const T f = m[i][c];
      for (std::size_t j = c; j <= n; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
  }
  for (std::size_t i = n; i < rows; ++i) {
    if (m[i][n] != zero) throw NumericalError("weights are not carried by the split track");
  }
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n];
  return x;
}

}  // namespace

WeightVector transfer_weights(const SplitStep& step, const WeightVector& w) { return solve_carrying(step, w); }

QuadWeights transfer_weights(const SplitStep& step, const QuadWeights& w) { return solve_carrying(step, w); }

IntWeights transfer_weights(const SplitStep& step, const IntWeights& n) {
  WeightVector w(n.begin(), n.end());
  const WeightVector x = transfer_weights(step, w);
  IntWeights out;
  for (const Rational& r : x) {
    if (denominator(r) != 1) throw NumericalError("carrying matrix is not unimodular");
    out.push_back(numerator(r).convert_to<std::int64_t>());
  }
  return out;
}

}  // namespace graftlab
