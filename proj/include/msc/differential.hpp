#pragma once

#include "msc/invlim.hpp"
#include "msc/metric_map.hpp"

namespace msc {

/// The differential du of a metric-valued Sobolev map, materialized as
/// per-point matrices from the source edge fiber (sum norm) into the dual of
/// the pulled-back mu-cotangent fiber at u(x). Columns of non-representable
/// edges are zero; the norm identity |du| = |Du| then holds exactly on
/// edge-compatible instances and as an inequality otherwise.
struct Differential {
  MetricMap map;
  ModulePtr tangent_x;   // tangent module of the source, full support
  ModulePtr mu_cot;      // cotangent module of (Y, mu) at scale eps_y
  ModulePtr pb_cot;      // u^* mu_cot over {|Du| > 0}
  ModulePtr codomain;    // dual(pb_cot): fiber labels are mu-neighbors of u(x)
  std::vector<Mat> D;    // per source point
  ScalarField opnorm;    // pointwise operator norm (max column sum)
};

Differential build_du(const MetricMap& u);

ScalarField op_norm(const Differential& du);

/// du(v) for a tangent field v.
Element apply_du(const Differential& du, const Element& v);

/// ext([u^* d_mu f]) as an element of pb_cot (labels match the codomain).
Element lifted_target_differential(const Differential& du, const ScalarField& f_on_target);

/// Residual of the defining pairing <[u^* d_mu f], du(v)> = dg(v) for a
/// single f, maximized over points and fiber-basis fields v.
double pairing_residual(const Differential& du, const ScalarField& f_on_target);

// --- consistency with the scalar differential (target inside R) -----------

struct ScalarConsistencyReport {
  double max_pairing_residual = 0.0;  // I(du(v)) vs underline-d u(v)
  double max_norm_residual = 0.0;     // |du| vs |underline-d u|
  double max_iota_excess = 0.0;       // positive part of |I(W)| - |W|
};

/// Requires the target metric to agree with |val(q) - val(q')|; throws
/// TargetNotScalar otherwise.
ScalarConsistencyReport scalar_consistency(const Differential& du,
                                           const std::vector<double>& target_values);

// --- consistency with the bounded-deformation differential ----------------

struct BdReport {
  double lip = 0.0;                  // Lip(u)
  double mass_ratio = 0.0;           // max over supp mu of (u_* m)(q) / m_Y(q)
  double domination_excess = 0.0;    // positive part of mu - Lip^2 C m_Y
  double max_claim_residual = 0.0;   // hat-du(v) vs (u^* pi)^*(du(v))
  double max_conseq_excess = 0.0;    // positive part of |hat-du(v)| - |du(v)|
  double max_norm_gap = 0.0;         // | |hat-du(v)| - |du(v)| |
  double pi_test_residual = 0.0;     // pi(d_{mY} f) vs ext(d_mu f) on tests
  double pi_contraction_gap = 0.0;   // max of |omega| - |pi(omega)| on tests
  double samenorm_gap = 0.0;         // max of |Du| - |du| (op-norm route)
};

/// m_Y given as per-target-point masses, positive on a superset of supp mu.
BdReport bd_consistency(const Differential& du, const std::vector<double>& m_y,
                        int n_test_fields = 8, uint64_t seed = 7);

// --- local (inverse-limit) construction -----------------------------------

struct LocalBuild {
  std::vector<std::vector<int>> family;  // validated, ordered as given
  InverseSystem pulled;                  // Ext(u^* L0_{mu_Omega}(T*Y)) system
  InverseSystem cotangents;              // Ext(L0_Omega(T*X)) system
  InverseLimit pulled_limit;
  InverseLimit cotangent_limit;
  ModuleMap T;                           // limit map; du_loc is its adjoint
  ScalarField duloc_opnorm;
  double max_norm_residual = 0.0;        // |du_loc| vs |du|
  double max_pairing_residual = 0.0;     // generator pairings, limit vs global
};

/// Builds both inverse systems over a directed covering family, the limit
/// map T and the local differential, and checks coincidence with build_du.
LocalBuild local_build(const Differential& du, const std::vector<std::vector<int>>& family,
                       int n_random_fields = 2, uint64_t seed = 11);

/// Default family: chain of growing unions of closed balls, ending in the
/// whole space (directed and covering by construction).
std::vector<std::vector<int>> default_local_family(const SpacePtr& space);

}  // namespace msc
