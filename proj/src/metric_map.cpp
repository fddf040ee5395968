#include "msc/metric_map.hpp"

#include <algorithm>
#include <cmath>

#include "msc/errors.hpp"

namespace msc {

MetricMap make_metric_map(SpacePtr source, SpacePtr target, std::vector<int> assign,
                          std::optional<double> eps_y) {
  MetricMap m;
  m.source = std::move(source);
  m.target = std::move(target);
  m.assign = std::move(assign);
  const int n = m.source->size();
  if (static_cast<int>(m.assign.size()) != n) throw Error("assignment must be total");
  for (int x = 0; x < n; ++x)
    if (m.assign[x] < 0 || m.assign[x] >= m.target->size())
      throw Error("assignment target out of range at " + m.source->point_ids[x]);

  // |Du| over full-space neighborhoods.
  m.slope = constant_field(m.source, 0.0);
  for (int x = 0; x < n; ++x) {
    double s = 0.0;
    for (int y : m.source->nbrs(x))
      s = std::max(s, m.target->dist(m.u(x), m.u(y)) / m.source->dist(x, y));
    m.slope.v[x] = s;
  }

  if (eps_y) {
    m.eps_y = *eps_y;
    m.eps_auto = false;
    if (!(m.eps_y > 0.0)) throw Error("target_epsilon must be positive");
  } else {
    double e = 0.0;
    for (int x = 0; x < n; ++x)
      for (int y : m.source->nbrs(x)) e = std::max(e, m.target->dist(m.u(x), m.u(y)));
    m.eps_y = e > 0.0 ? e : m.target->epsilon;
    m.eps_auto = true;
  }

  m.mu.mass.assign(m.target->size(), 0.0);
  for (int x = 0; x < n; ++x)
    m.mu.mass[m.u(x)] += m.slope.v[x] * m.slope.v[x] * m.source->weights[x];
  for (int q = 0; q < m.target->size(); ++q) {
    if (m.mu.mass[q] > 0.0) m.mu.support.push_back(q);
    m.mu.total += m.mu.mass[q];
  }
  m.mu_supp = make_support(m.target, m.mu.support, m.eps_y);

  for (int x = 0; x < n; ++x) {
    if (!(m.slope.v[x] > 0.0)) continue;
    for (int y : m.source->nbrs(x)) {
      const int qy = m.u(y);
      if (qy == m.u(x)) continue;
      const bool representable =
          m.mu_supp->contains(qy) && m.target->dist(m.u(x), qy) <= m.eps_y;
      if (!representable) m.compat.violations.push_back({x, y});
    }
  }
  return m;
}

ScalarField mdug_slope(const MetricMap& u) { return u.slope; }

ScalarField mdug_oracle(const MetricMap& u, int n_random, uint64_t seed) {
  const int n = u.source->size();
  ScalarField best = constant_field(u.source, 0.0);
  SupportPtr src_full = full_support(u.source);
  auto absorb = [&](const ScalarField& f_on_y) {
    ScalarField comp = constant_field(u.source, 0.0);
    for (int x = 0; x < n; ++x) comp.v[x] = f_on_y.v[u.u(x)];
    ScalarField g = mwug(*src_full, comp);
    for (int x = 0; x < n; ++x) best.v[x] = std::max(best.v[x], g.v[x]);
  };
  for (int q = 0; q < u.target->size(); ++q) {
    ScalarField f = constant_field(u.target, 0.0);
    for (int p = 0; p < u.target->size(); ++p) f.v[p] = u.target->dist(p, q);
    absorb(f);
  }
  for (int r = 0; r < n_random; ++r) absorb(random_one_lipschitz(u.target, seed + r));
  return best;
}

const PushforwardMeasure& pushforward(const MetricMap& u) { return u.mu; }

const CompatibilityReport& compatibility(const MetricMap& u) { return u.compat; }

ScalarField target_mwug(const MetricMap& u, const ScalarField& f_on_target) {
  return mwug(*u.mu_supp, f_on_target);
}

Element pullback_differential(const MetricMap& u, const ScalarField& f_on_target,
                              const ModulePtr& cot_source) {
  const Space& X = *u.source;
  Element dg = zero_element(cot_source);
  for (int x : cot_source->base->points) {
    if (!(u.slope.v[x] > 0.0)) continue;
    const auto& nb = cot_source->base->nbrs_in[x];
    for (size_t i = 0; i < nb.size(); ++i) {
      const int y = nb[i];
      const int qy = u.u(y);
      if (qy == u.u(x)) continue;
      const bool representable =
          u.mu_supp->contains(qy) && u.target->dist(u.u(x), qy) <= u.eps_y;
      if (!representable) continue;  // zeroed; reported via compatibility
      dg.coords[x][i] = (f_on_target.v[qy] - f_on_target.v[u.u(x)]) / X.dist(x, y);
    }
  }
  return dg;
}

double lipschitz_constant_of_map(const MetricMap& u) {
  double best = 0.0;
  for (int x = 0; x < u.source->size(); ++x)
    for (int y = x + 1; y < u.source->size(); ++y)
      best = std::max(best, u.target->dist(u.u(x), u.u(y)) / u.source->dist(x, y));
  return best;
}

}  // namespace msc
