#include "msc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "msc/errors.hpp"

namespace msc {

namespace {

std::vector<std::string> point_names(const std::string& prefix, int n) {
  std::vector<std::string> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = prefix + std::to_string(i);
  return ids;
}

}  // namespace

SpacePtr random_space(Rng& rng, int n_min, int n_max) {
  std::uniform_int_distribution<int> size(n_min, n_max);
  const int n = size(rng);
  std::uniform_real_distribution<double> len(0.5, 2.0);

  // Shortest-path completion of random edge lengths on the complete graph.
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = len(rng);
      d[static_cast<size_t>(i) * n + j] = v;
      d[static_cast<size_t>(j) * n + i] = v;
    }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double via = d[static_cast<size_t>(i) * n + k] + d[static_cast<size_t>(k) * n + j];
        double& cur = d[static_cast<size_t>(i) * n + j];
        if (i != j && via < cur) cur = via;
      }

  std::vector<double> w(n);
  std::uniform_real_distribution<double> wd(0.5, 2.0);
  for (double& x : w) x = wd(rng);

  // Epsilon above every nearest-neighbor distance: nobody is isolated.
  double eps = 0.0;
  for (int i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (j != i) nearest = std::min(nearest, d[static_cast<size_t>(i) * n + j]);
    eps = std::max(eps, nearest);
  }
  std::uniform_real_distribution<double> stretch(1.0, 1.3);
  eps *= stretch(rng);

  return build_space_trusted(point_names("p", n), std::move(d), std::move(w), eps);
}

MetricMap random_positive_slope_map(Rng& rng, int n_min, int n_max) {
  SpacePtr X = random_space(rng, n_min, n_max);
  std::uniform_int_distribution<int> extra(0, 4);
  Rng rng2(rng());
  SpacePtr Y = random_space(rng2, X->size() + extra(rng), X->size() + 4 + extra(rng));
  std::vector<int> targets(Y->size());
  std::iota(targets.begin(), targets.end(), 0);
  std::shuffle(targets.begin(), targets.end(), rng);
  std::vector<int> assign(targets.begin(), targets.begin() + X->size());
  return make_metric_map(X, Y, std::move(assign));
}

MetricMap random_map(Rng& rng, int n_min, int n_max) {
  SpacePtr X = random_space(rng, n_min, n_max);
  Rng rng2(rng());
  SpacePtr Y = random_space(rng2, std::max(2, n_min / 2), n_max);
  std::uniform_int_distribution<int> pick(0, Y->size() - 1);
  std::vector<int> assign(X->size());
  for (int& a : assign) a = pick(rng);
  return make_metric_map(X, Y, std::move(assign));
}

std::pair<MetricMap, std::vector<double>> random_scalar_instance(Rng& rng, int n_min,
                                                                 int n_max) {
  SpacePtr X = random_space(rng, n_min, n_max);
  const int n = X->size();
  // Distinct values: an injective map keeps |Du| > 0 everywhere.
  std::uniform_real_distribution<double> jitter(0.05, 1.0);
  std::vector<double> vals(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += jitter(rng);
    vals[i] = acc;
  }
  std::shuffle(vals.begin(), vals.end(), rng);

  std::vector<double> dist(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dist[static_cast<size_t>(i) * n + j] = std::abs(vals[i] - vals[j]);
  double diam = 0.0;
  for (double v : dist) diam = std::max(diam, v);
  SpacePtr Y = build_space_trusted(point_names("v", n), std::move(dist),
                                   std::vector<double>(n, 1.0), diam);
  std::vector<int> assign(n);
  std::iota(assign.begin(), assign.end(), 0);
  return {make_metric_map(X, Y, std::move(assign)), vals};
}

ScalarField random_target_field(Rng& rng, const SpacePtr& target) {
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  ScalarField f = constant_field(target, 0.0);
  for (double& x : f.v) x = val(rng);
  return f;
}

std::pair<MetricMap, std::vector<double>> engineered_incompatible_instance() {
  // Path a-b-c-d; image edge (b,c) has length 4, beyond the overridden
  // target scale 1, so it cannot be represented in the mu-cotangent fiber.
  SpacePtr X = build_space({"a", "b", "c", "d"},
                           {{0, 1, 2, 3}, {1, 0, 1, 2}, {2, 1, 0, 1}, {3, 2, 1, 0}},
                           {1, 1, 1, 1}, 1.0);
  SpacePtr Y = build_space({"p", "q", "r"}, {{0, 1, 5}, {1, 0, 4}, {5, 4, 0}},
                           {1, 1, 1}, 5.0);
  MetricMap u = make_metric_map(X, Y, {0, 1, 2, 2}, 1.0);
  std::vector<double> m_y = {1.0, 1.0, 1.0};
  return {u, m_y};
}

std::vector<double> random_dominating_measure(Rng& rng, const MetricMap& u) {
  std::uniform_real_distribution<double> mass(0.2, 3.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<double> m(u.target->size(), 0.0);
  for (int q : u.mu.support) m[q] = mass(rng);
  for (int q = 0; q < u.target->size(); ++q)
    if (m[q] == 0.0 && coin(rng) < 0.5) m[q] = mass(rng);
  return m;
}

std::vector<std::vector<int>> random_local_family(Rng& rng, const SpacePtr& space) {
  const int n = space->size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  // Two overlapping proper subsets whose union is everything: a directed
  // diamond with no maximum among the proper members.
  std::uniform_int_distribution<int> cutd(1, std::max(1, n - 2));
  int cut = cutd(rng);
  std::uniform_int_distribution<int> overlapd(1, std::max(1, n / 3));
  const int overlap = overlapd(rng);
  std::vector<int> o1(perm.begin(), perm.begin() + std::min(n, cut + overlap));
  std::vector<int> o2(perm.begin() + cut, perm.end());
  std::sort(o1.begin(), o1.end());
  std::sort(o2.begin(), o2.end());
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);

  std::vector<std::vector<int>> fam;
  if (static_cast<int>(o1.size()) < n) fam.push_back(o1);
  if (static_cast<int>(o2.size()) < n && o2 != o1) fam.push_back(o2);
  fam.push_back(all);
  return fam;
}

InverseSystem random_tree_system(Rng& rng, const SpacePtr& space, int n_modules) {
  const int k = n_modules;
  SupportPtr full = full_support(space);
  std::uniform_int_distribution<int> dimd(0, 3);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_int_distribution<int> kindd(0, 2);

  std::vector<ModulePtr> mods(k);
  std::vector<std::vector<int>> dims(k, std::vector<int>(space->size()));
  for (int i = 0; i < k; ++i) {
    std::vector<std::vector<std::string>> labels(space->size());
    std::vector<FiberNorm> norms(space->size());
    for (int x = 0; x < space->size(); ++x) {
      const int d = dimd(rng);
      dims[i][x] = d;
      for (int c = 0; c < d; ++c) labels[x].push_back("c" + std::to_string(c));
      const NormKind kind = static_cast<NormKind>(kindd(rng));
      std::vector<double> w(d);
      std::uniform_real_distribution<double> wd(0.5, 2.0);
      for (double& v : w) v = wd(rng);
      norms[x] = FiberNorm::weighted(kind, std::move(w));
    }
    mods[i] = make_module(full, std::move(labels), std::move(norms));
  }

  // Rooted tree: node 0 is the top, parent[i] < i; order = ancestry.
  std::vector<int> parent(k, -1);
  for (int i = 1; i < k; ++i) {
    std::uniform_int_distribution<int> pd(0, i - 1);
    parent[i] = pd(rng);
  }
  std::vector<std::vector<char>> leq(k, std::vector<char>(k, 0));
  for (int i = 0; i < k; ++i) {
    leq[i][i] = 1;
    for (int a = parent[i]; a != -1; a = parent[a]) leq[i][a] = 1;
  }

  // Random contraction along each tree edge (child <= parent, so the
  // projection runs parent -> child); compositions along unique tree paths
  // satisfy the composition law by construction.
  auto random_contraction = [&](const ModulePtr& from, const ModulePtr& to) {
    std::vector<Mat> mats(space->size());
    for (int x = 0; x < space->size(); ++x) {
      Mat M(to->dim(x), from->dim(x));
      for (double& v : M.a) v = entry(rng);
      // Scale below operator norm 1: sum of basis-column norms dominates the
      // operator norm for all three fiber norm kinds.
      double upper = 0.0;
      for (int j = 0; j < M.cols; ++j) {
        std::vector<double> col(M.rows);
        for (int i2 = 0; i2 < M.rows; ++i2) col[i2] = M(i2, j);
        std::vector<double> e(M.cols, 0.0);
        e[j] = 1.0;
        double en = fiber_norm(from->norm[x], e);
        if (en > 0.0) upper += fiber_norm(to->norm[x], col) / en;
      }
      if (upper > 0.0)
        for (double& v : M.a) v *= 0.9 / upper;
      mats[x] = std::move(M);
    }
    return make_module_map(from, to, std::move(mats), constant_field(space, 1.0));
  };

  std::map<std::pair<int, int>, ModuleMap> edge;
  for (int i = 1; i < k; ++i)
    edge.emplace(std::make_pair(i, parent[i]), random_contraction(mods[parent[i]], mods[i]));

  InverseSystem s;
  s.modules = mods;
  s.leq = leq;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j || !leq[i][j]) continue;
      // Compose edge contractions along the unique tree path j -> ... -> i.
      std::vector<int> path;
      for (int a = i; a != j; a = parent[a]) path.push_back(a);
      ModuleMap acc = edge.at({path.back(), j});
      for (int t = static_cast<int>(path.size()) - 2; t >= 0; --t)
        acc = compose(edge.at({path[t], path[t + 1]}), acc);
      s.proj.emplace(std::make_pair(i, j), std::move(acc));
    }
  return s;
}

ModulePtr random_module(Rng& rng, const SpacePtr& space, int max_dim) {
  SupportPtr full = full_support(space);
  std::uniform_int_distribution<int> dimd(0, max_dim);
  std::uniform_int_distribution<int> kindd(0, 2);
  std::uniform_real_distribution<double> wd(0.5, 2.0);
  std::vector<std::vector<std::string>> labels(space->size());
  std::vector<FiberNorm> norms(space->size());
  for (int x = 0; x < space->size(); ++x) {
    const int d = dimd(rng);
    for (int c = 0; c < d; ++c) labels[x].push_back("c" + std::to_string(c));
    std::vector<double> w(d);
    for (double& v : w) v = wd(rng);
    norms[x] = FiberNorm::weighted(static_cast<NormKind>(kindd(rng)), std::move(w));
  }
  return make_module(full, std::move(labels), std::move(norms));
}

Element random_element(Rng& rng, const ModulePtr& m) {
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  Element e = zero_element(m);
  for (auto& fiber : e.coords)
    for (double& c : fiber) c = val(rng);
  return e;
}

}  // namespace msc
