#pragma once

#include <cstdint>
#include <optional>

#include "msc/sobolev.hpp"

namespace msc {

/// Edge (x, y in N(x)) whose image cannot be represented in the pushforward
/// cotangent fiber at u(x): u(y) differs from u(x) and lies outside
/// supp(mu) intersected with the closed eps_Y-ball around u(x).
struct CompatViolation {
  int x = 0, y = 0;
};

struct CompatibilityReport {
  std::vector<CompatViolation> violations;
  bool ok() const { return violations.empty(); }
};

struct PushforwardMeasure {
  std::vector<double> mass;   // per target point
  std::vector<int> support;   // points of positive mass
  double total = 0.0;
};

/// Metric-valued Sobolev map with cached |Du|, pushforward measure
/// mu = u_*(|Du|^2 m), the support of mu at scale eps_y, and the edge
/// compatibility report.
struct MetricMap {
  SpacePtr source, target;
  std::vector<int> assign;
  double eps_y = 0.0;
  bool eps_auto = true;

  ScalarField slope;          // |Du|
  PushforwardMeasure mu;
  SupportPtr mu_supp;         // support of mu within the target, scale eps_y
  CompatibilityReport compat;

  int u(int x) const { return assign[x]; }
  PointMap point_map() const { return PointMap{source, target, assign}; }
};

/// Builds the map and all cached structure. When eps_y is not given it
/// defaults to the largest image-edge distance, which makes every instance
/// edge-compatible.
MetricMap make_metric_map(SpacePtr source, SpacePtr target, std::vector<int> assign,
                          std::optional<double> eps_y = std::nullopt);

/// |Du|(x) = max_{y in N(x)} d_Y(u(x), u(y)) / d_X(x, y).
ScalarField mdug_slope(const MetricMap& u);

/// Definitional route: pointwise sup of mwug(f o u) over the structured
/// family {d_Y(., q)} plus n_random seeded 1-Lipschitz McShane fields.
ScalarField mdug_oracle(const MetricMap& u, int n_random, uint64_t seed);

const PushforwardMeasure& pushforward(const MetricMap& u);

const CompatibilityReport& compatibility(const MetricMap& u);

/// Differential of the composite f o u for f given on supp(mu): quotient on
/// representable edges, zero on non-representable edges and on {|Du| = 0}.
/// Returns a covector field in the given cotangent module of the source.
Element pullback_differential(const MetricMap& u, const ScalarField& f_on_target,
                              const ModulePtr& cot_source);

/// |d_mu f| over supp(mu) at scale eps_y.
ScalarField target_mwug(const MetricMap& u, const ScalarField& f_on_target);

double lipschitz_constant_of_map(const MetricMap& u);

}  // namespace msc
