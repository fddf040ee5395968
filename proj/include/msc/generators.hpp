#pragma once

#include <random>

#include "msc/differential.hpp"
#include "msc/invlim.hpp"

namespace msc {

using Rng = std::mt19937_64;

/// Random finite metric space: positive edge lengths completed to a metric
/// by all-pairs shortest paths; epsilon large enough that no point is
/// isolated.
SpacePtr random_space(Rng& rng, int n_min, int n_max);

/// Random map with |Du| > 0 everywhere (injective into a larger random
/// target) and automatic target scale, hence edge-compatible.
MetricMap random_positive_slope_map(Rng& rng, int n_min = 5, int n_max = 30);

/// Random map allowed to collapse points (still edge-compatible: automatic
/// target scale).
MetricMap random_map(Rng& rng, int n_min = 5, int n_max = 30);

/// Random scalar-target instance: target points carry distinct reals and the
/// metric is |val - val'|. Returns the map and the per-target-point values.
std::pair<MetricMap, std::vector<double>> random_scalar_instance(Rng& rng, int n_min = 5,
                                                                 int n_max = 30);

/// Random values on the target (not Lipschitz-clipped), for chain-rule tests.
ScalarField random_target_field(Rng& rng, const SpacePtr& target);

/// The engineered incompatible instance: a 4-point path mapped onto a
/// 3-point target with one image edge longer than the overridden target
/// scale. Returns the map (nonempty compatibility report) and an m_Y
/// positive on all target points.
std::pair<MetricMap, std::vector<double>> engineered_incompatible_instance();

/// Random m_Y dominating the pushforward support of u (positive there, with
/// random extra support).
std::vector<double> random_dominating_measure(Rng& rng, const MetricMap& u);

/// Random directed covering family: {O1, O2, O1 u O2 = X} diamonds or
/// deeper chains; always contains the whole space.
std::vector<std::vector<int>> random_local_family(Rng& rng, const SpacePtr& space);

/// Random inverse system on a rooted tree order (3 to 5 modules, random
/// contraction projections composed along tree edges).
InverseSystem random_tree_system(Rng& rng, const SpacePtr& space, int n_modules);

/// Random module over the full support of the space (random fiber dims,
/// random closed-form norm kind and weights).
ModulePtr random_module(Rng& rng, const SpacePtr& space, int max_dim = 3);

Element random_element(Rng& rng, const ModulePtr& m);

}  // namespace msc
