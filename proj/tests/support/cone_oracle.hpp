#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "graftlab/flat_surfaces.hpp"

namespace graftlab::testing {

// Cone angles by union-find over glued corners and floating-point angle sums.
inline std::vector<int> brute_force_cone_angles(const SurfaceInput& in) {
  std::vector<std::pair<int, int>> corners;
  std::map<std::pair<int, int>, int> id;
  for (std::size_t p = 0; p < in.polygons.size(); ++p) {
    for (std::size_t v = 0; v < in.polygons[p].size(); ++v) {
      id[{static_cast<int>(p), static_cast<int>(v)}] = static_cast<int>(corners.size());
      corners.emplace_back(static_cast<int>(p), static_cast<int>(v));
    }
  }
  std::vector<int> parent(corners.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  auto size_of = [&](int p) { return static_cast<int>(in.polygons[static_cast<std::size_t>(p)].size()); };
  for (const Gluing& g : in.gluings) {
    const int a0 = id[{g.from.polygon, g.from.edge}];
    const int a1 = id[{g.from.polygon, (g.from.edge + 1) % size_of(g.from.polygon)}];
    const int b0 = id[{g.to.polygon, g.to.edge}];
    const int b1 = id[{g.to.polygon, (g.to.edge + 1) % size_of(g.to.polygon)}];
    parent[static_cast<std::size_t>(find(a0))] = find(b1);
    parent[static_cast<std::size_t>(find(a1))] = find(b0);
  }
  std::map<int, double> angle;
  for (std::size_t c = 0; c < corners.size(); ++c) {
    const auto& poly = in.polygons[static_cast<std::size_t>(corners[c].first)];
    const int n = static_cast<int>(poly.size());
    const int v = corners[c].second;
    const Point2& p = poly[static_cast<std::size_t>(v)];
    const Point2& nx = poly[static_cast<std::size_t>((v + 1) % n)];
    const Point2& pv = poly[static_cast<std::size_t>((v + n - 1) % n)];
    const double a1 = std::atan2((nx.y - p.y).to_double(), (nx.x - p.x).to_double());
    const double a2 = std::atan2((pv.y - p.y).to_double(), (pv.x - p.x).to_double());
    double a = a2 - a1;
    while (a <= 0) a += 2 * M_PI;
    angle[find(static_cast<int>(c))] += a;
  }
  std::vector<int> ks;
  for (const auto& [root, a] : angle) ks.push_back(static_cast<int>(std::lround(a / M_PI)));
  std::sort(ks.begin(), ks.end());
  return ks;
}

// Euler characteristic V - E + F with V counted by the same union-find.
inline int brute_force_euler(const SurfaceInput& in) {
  const int v = static_cast<int>(brute_force_cone_angles(in).size());
  return v - static_cast<int>(in.gluings.size()) + static_cast<int>(in.polygons.size());
}

}  // namespace graftlab::testing
