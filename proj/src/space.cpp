#include "msc/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace msc {

int Space::index(const std::string& id) const {
  auto it = index_of.find(id);
  if (it == index_of.end()) throw Error("unknown point id: " + id);
  return it->second;
}

namespace {

std::vector<std::vector<int>> neighbor_sets(const std::vector<double>& dist_flat, int n,
                                            double epsilon) {
  std::vector<std::vector<int>> nb(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (y != x && dist_flat[static_cast<size_t>(x) * n + y] <= epsilon) nb[x].push_back(y);
  return nb;
}

SpacePtr finish_space(std::vector<std::string> points, std::vector<double> dist_flat,
                      std::vector<double> weights, double epsilon) {
  auto sp = std::make_shared<Space>();
  const int n = static_cast<int>(points.size());
  sp->point_ids = std::move(points);
  sp->dist_flat = std::move(dist_flat);
  sp->weights = std::move(weights);
  sp->epsilon = epsilon;
  sp->neighbors = neighbor_sets(sp->dist_flat, n, epsilon);
  for (int i = 0; i < n; ++i) sp->index_of.emplace(sp->point_ids[i], i);
  return sp;
}

void check_basic(const std::vector<std::string>& points, const std::vector<double>& d,
                 const std::vector<double>& weights, double epsilon) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw InvalidSpace("a space needs at least one point");
  if (static_cast<int>(weights.size()) != n) throw InvalidSpace("weights size mismatch");
  if (static_cast<size_t>(n) * n != d.size()) throw InvalidSpace("distance matrix shape mismatch");
  if (!(epsilon > 0.0)) throw InvalidSpace("epsilon must be positive");
  {
    std::unordered_map<std::string, int> seen;
    for (int i = 0; i < n; ++i)
      if (!seen.emplace(points[i], i).second) throw InvalidSpace("duplicate point id: " + points[i]);
  }
  for (int i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0)) throw NonpositiveWeight(points[i]);
    if (d[static_cast<size_t>(i) * n + i] != 0.0)
      throw InvalidSpace("nonzero self-distance at " + points[i]);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dij = d[static_cast<size_t>(i) * n + j];
      const double dji = d[static_cast<size_t>(j) * n + i];
      if (dij != dji) throw AsymmetricDistance(points[i], points[j]);
      if (!(dij > 0.0)) throw ZeroDistanceDistinctPoints(points[i], points[j]);
      if (!std::isfinite(dij)) throw InvalidSpace("nonfinite distance");
    }
}

}  // namespace

void verify_triangles(const Space& s) {
  const int n = s.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      for (int z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        if (s.dist(x, z) > s.dist(x, y) + s.dist(y, z))
          throw TriangleViolation(s.point_ids[x], s.point_ids[y], s.point_ids[z]);
      }
    }
}

SpacePtr build_space(std::vector<std::string> points, const std::vector<std::vector<double>>& dist,
                     std::vector<double> weights, double epsilon) {
  const int n = static_cast<int>(points.size());
  std::vector<double> flat(static_cast<size_t>(n) * n, 0.0);
  if (static_cast<int>(dist.size()) != n) throw InvalidSpace("distance matrix shape mismatch");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(dist[i].size()) != n) throw InvalidSpace("distance matrix shape mismatch");
    for (int j = 0; j < n; ++j) flat[static_cast<size_t>(i) * n + j] = dist[i][j];
  }
  check_basic(points, flat, weights, epsilon);
  SpacePtr sp = finish_space(std::move(points), std::move(flat), std::move(weights), epsilon);
  verify_triangles(*sp);
  return sp;
}

SpacePtr build_space_trusted(std::vector<std::string> points, std::vector<double> dist_flat,
                             std::vector<double> weights, double epsilon) {
  check_basic(points, dist_flat, weights, epsilon);
  return finish_space(std::move(points), std::move(dist_flat), std::move(weights), epsilon);
}

SupportPtr full_support(const SpacePtr& s) {
  std::vector<int> all(s->size());
  for (int i = 0; i < s->size(); ++i) all[i] = i;
  return make_support(s, all, s->epsilon);
}

SupportPtr make_support(const SpacePtr& s, const std::vector<int>& subset) {
  return make_support(s, subset, s->epsilon);
}

SupportPtr make_support(const SpacePtr& s, const std::vector<int>& subset, double epsilon) {
  auto sup = std::make_shared<Support>();
  sup->space = s;
  sup->epsilon = epsilon;
  sup->member.assign(s->size(), 0);
  for (int x : subset) {
    if (x < 0 || x >= s->size()) throw Error("support index out of range");
    sup->member[x] = 1;
  }
  for (int x = 0; x < s->size(); ++x)
    if (sup->member[x]) sup->points.push_back(x);
  sup->nbrs_in.assign(s->size(), {});
  for (int x : sup->points)
    for (int y : sup->points)
      if (y != x && s->dist(x, y) <= epsilon) sup->nbrs_in[x].push_back(y);
  return sup;
}

bool subset_of(const Support& a, const Support& b) {
  if (a.space != b.space) return false;
  for (int x : a.points)
    if (!b.contains(x)) return false;
  return true;
}

ScalarField constant_field(const SpacePtr& s, double c) {
  return ScalarField{s, std::vector<double>(s->size(), c)};
}

double lipschitz_constant(const Space& s, const ScalarField& f) {
  double best = 0.0;
  for (int x = 0; x < s.size(); ++x)
    for (int y = x + 1; y < s.size(); ++y)
      best = std::max(best, std::abs(f.v[x] - f.v[y]) / s.dist(x, y));
  return best;
}

ScalarField mcshane_extend(const Space& s, const Support& sup, const std::vector<double>& values,
                           double L) {
  if (values.size() != sup.points.size()) throw Error("values must align with support points");
  const int k = static_cast<int>(sup.points.size());
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const double gap = std::abs(values[i] - values[j]);
      const double allowed = L * s.dist(sup.points[i], sup.points[j]);
      if (gap > allowed * (1.0 + 1e-12) + 1e-15)
        throw NotLipschitzOnSubset("values are not " + std::to_string(L) + "-Lipschitz between " +
                                   s.point_ids[sup.points[i]] + " and " + s.point_ids[sup.points[j]]);
    }
  ScalarField f{sup.space, std::vector<double>(s.size(), 0.0)};
  for (int x = 0; x < s.size(); ++x) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) m = std::min(m, values[i] + L * s.dist(x, sup.points[i]));
    f.v[x] = m;
  }
  // On the support the minimum is attained at the point itself.
  for (int i = 0; i < k; ++i) f.v[sup.points[i]] = values[i];
  return f;
}

ScalarField random_one_lipschitz(const SpacePtr& s, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = s->size();
  std::uniform_int_distribution<int> count(1, std::max(1, n / 2));
  const int k = count(rng);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<int> anchors(idx.begin(), idx.begin() + k);
  std::sort(anchors.begin(), anchors.end());

  double diam = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) diam = std::max(diam, s->dist(x, y));
  std::uniform_real_distribution<double> val(-std::max(diam, 1.0), std::max(diam, 1.0));
  std::vector<double> raw(k);
  for (double& r : raw) r = val(rng);
  // Clip to the largest 1-Lipschitz minorant over the anchors.
  std::vector<double> clipped(k);
  for (int i = 0; i < k; ++i) {
    double m = raw[i];
    for (int j = 0; j < k; ++j) m = std::min(m, raw[j] + s->dist(anchors[i], anchors[j]));
    clipped[i] = m;
  }
  SupportPtr sup = make_support(s, anchors);
  return mcshane_extend(*s, *sup, clipped, 1.0);
}

}  // namespace msc
