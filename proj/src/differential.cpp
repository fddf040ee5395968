#include "msc/differential.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "msc/errors.hpp"

namespace msc {

namespace {

SupportPtr positive_set(const MetricMap& u) {
  std::vector<int> pts;
  for (int x = 0; x < u.source->size(); ++x)
    if (u.slope.v[x] > 0.0) pts.push_back(x);
  return make_support(u.source, pts);
}

}  // namespace

Differential build_du(const MetricMap& u) {
  Differential d;
  d.map = u;
  SupportPtr src_full = full_support(u.source);
  d.tangent_x = tangent_module(src_full);
  d.mu_cot = cotangent_module(u.mu_supp);
  d.pb_cot = pullback(d.mu_cot, u.point_map(), positive_set(u));
  d.codomain = dual(d.pb_cot);

  const int n = u.source->size();
  d.D.resize(n);
  d.opnorm = constant_field(u.source, 0.0);
  for (int x = 0; x < n; ++x) {
    const auto& cols = src_full->nbrs_in[x];
    const auto& rows = d.codomain->labels[x];  // mu-neighbors of u(x), as ids
    Mat M(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    if (!rows.empty()) {
      for (size_t j = 0; j < cols.size(); ++j) {
        const int y = cols[j];
        const int qy = u.u(y);
        if (qy == u.u(x)) continue;
        for (size_t i = 0; i < rows.size(); ++i) {
          if (u.target->point_ids[qy] != rows[i]) continue;
          M(static_cast<int>(i), static_cast<int>(j)) =
              u.target->dist(u.u(x), qy) / u.source->dist(x, y);
          break;
        }
      }
    }
    double on = 0.0;
    for (int j = 0; j < M.cols; ++j) {
      double col = 0.0;
      for (int i = 0; i < M.rows; ++i) col += std::abs(M(i, j));
      on = std::max(on, col);
    }
    d.opnorm.v[x] = on;
    d.D[x] = std::move(M);
  }
  return d;
}

ScalarField op_norm(const Differential& du) { return du.opnorm; }

Element apply_du(const Differential& du, const Element& v) {
  Element out = zero_element(du.codomain);
  for (int x = 0; x < du.map.source->size(); ++x)
    if (du.D[x].rows > 0) out.coords[x] = du.D[x].apply(v.coords[x]);
  return out;
}

Element lifted_target_differential(const Differential& du, const ScalarField& f_on_target) {
  Element dmuf = differential(du.mu_cot, f_on_target);
  return pullback_lift(du.pb_cot, du.map.point_map(), dmuf);
}

double pairing_residual(const Differential& du, const ScalarField& f_on_target) {
  const MetricMap& u = du.map;
  Element lifted = lifted_target_differential(du, f_on_target);
  ModulePtr cot_x = dual(du.tangent_x);
  Element dg = pullback_differential(u, f_on_target, cot_x);

  double worst = 0.0;
  for (int x = 0; x < u.source->size(); ++x) {
    const int deg = du.tangent_x->dim(x);
    for (int j = 0; j < deg; ++j) {
      // v = basis edge field e_j at x.
      double lhs = 0.0;
      for (int i = 0; i < du.D[x].rows; ++i) lhs += lifted.coords[x][i] * du.D[x](i, j);
      const double rhs = dg.coords[x][j];
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

ScalarConsistencyReport scalar_consistency(const Differential& du,
                                           const std::vector<double>& target_values) {
  const MetricMap& u = du.map;
  const Space& Y = *u.target;
  if (static_cast<int>(target_values.size()) != Y.size())
    throw TargetNotScalar("one real value per target point required");
  for (int q = 0; q < Y.size(); ++q)
    for (int p = q + 1; p < Y.size(); ++p) {
      const double want = std::abs(target_values[q] - target_values[p]);
      if (std::abs(want - Y.dist(q, p)) > 1e-12 * std::max(1.0, want))
        throw TargetNotScalar("target metric differs from |val - val'| between " +
                              Y.point_ids[q] + " and " + Y.point_ids[p]);
    }

  ScalarField ubar = constant_field(u.source, 0.0);
  for (int x = 0; x < u.source->size(); ++x) ubar.v[x] = target_values[u.u(x)];
  SupportPtr src_full = full_support(u.source);
  ModulePtr cot_x = cotangent_module(src_full);
  Element dbar = differential(cot_x, ubar);
  ScalarField dbar_norm = mwug(*src_full, ubar);

  ScalarConsistencyReport rep;
  for (int x = 0; x < u.source->size(); ++x) {
    const auto& rows = du.codomain->labels[x];
    std::vector<double> sign(rows.size(), 0.0);
    for (size_t i = 0; i < rows.size(); ++i) {
      const double gap = target_values[Y.index(rows[i])] - target_values[u.u(x)];
      sign[i] = gap > 0.0 ? 1.0 : (gap < 0.0 ? -1.0 : 0.0);
    }
    const int deg = du.tangent_x->dim(x);
    for (int j = 0; j < deg; ++j) {
      double iota = 0.0;
      for (int i = 0; i < du.D[x].rows; ++i) iota += sign[i] * du.D[x](i, j);
      rep.max_pairing_residual =
          std::max(rep.max_pairing_residual, std::abs(iota - dbar.coords[x][j]));
    }
    rep.max_norm_residual =
        std::max(rep.max_norm_residual, std::abs(du.opnorm.v[x] - dbar_norm.v[x]));
    // iota is a contraction from the sum-normed fiber to R.
    for (size_t i = 0; i < rows.size(); ++i)
      rep.max_iota_excess = std::max(rep.max_iota_excess, std::abs(sign[i]) - 1.0);
  }
  return rep;
}

BdReport bd_consistency(const Differential& du, const std::vector<double>& m_y,
                        int n_test_fields, uint64_t seed) {
  const MetricMap& u = du.map;
  const Space& Y = *u.target;
  if (static_cast<int>(m_y.size()) != Y.size())
    throw Error("m_Y must assign a mass to every target point");

  std::vector<int> my_pts;
  for (int q = 0; q < Y.size(); ++q) {
    if (m_y[q] < 0.0) throw Error("m_Y masses must be nonnegative");
    if (m_y[q] > 0.0) my_pts.push_back(q);
  }
  for (int q : u.mu.support)
    if (!(m_y[q] > 0.0))
      throw DominationFailure("supp mu not contained in supp m_Y at " + Y.point_ids[q]);

  BdReport rep;
  rep.lip = lipschitz_constant_of_map(u);

  // Discrete bounded-deformation bound mu <= Lip^2 C m_Y, C the mass ratio.
  std::vector<double> push_m(Y.size(), 0.0);
  for (int x = 0; x < u.source->size(); ++x) push_m[u.u(x)] += u.source->weights[x];
  for (int q : u.mu.support) rep.mass_ratio = std::max(rep.mass_ratio, push_m[q] / m_y[q]);
  for (int q = 0; q < Y.size(); ++q) {
    const double bound = rep.lip * rep.lip * rep.mass_ratio * m_y[q];
    rep.domination_excess = std::max(rep.domination_excess, u.mu.mass[q] - bound);
  }

  SupportPtr my_supp = make_support(u.target, my_pts, u.eps_y);
  ModulePtr my_cot = cotangent_module(my_supp);

  // hat-du by the same edge formula over supp m_Y.
  std::vector<int> nu_hat_pts;
  for (int x = 0; x < u.source->size(); ++x)
    if (my_supp->contains(u.u(x))) nu_hat_pts.push_back(x);
  SupportPtr nu_hat = make_support(u.source, nu_hat_pts);
  ModulePtr pb_hat = pullback(my_cot, u.point_map(), nu_hat);
  ModulePtr cod_hat = dual(pb_hat);

  const int n = u.source->size();
  std::vector<Mat> Dhat(n);
  ScalarField opnorm_hat = constant_field(u.source, 0.0);
  SupportPtr src_full = full_support(u.source);
  for (int x = 0; x < n; ++x) {
    const auto& cols = src_full->nbrs_in[x];
    const auto& rows = cod_hat->labels[x];
    Mat M(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
      const int qy = u.u(cols[j]);
      if (qy == u.u(x)) continue;
      for (size_t i = 0; i < rows.size(); ++i)
        if (Y.point_ids[qy] == rows[i]) {
          M(static_cast<int>(i), static_cast<int>(j)) =
              Y.dist(u.u(x), qy) / u.source->dist(x, cols[j]);
          break;
        }
    }
    double on = 0.0;
    for (int j = 0; j < M.cols; ++j) {
      double col = 0.0;
      for (int i = 0; i < M.rows; ++i) col += std::abs(M(i, j));
      on = std::max(on, col);
    }
    opnorm_hat.v[x] = on;
    Dhat[x] = std::move(M);
  }

  // pi: coordinate restriction on target fibers, pi(d_{mY} f) = ext(d_mu f).
  std::vector<Mat> pi(Y.size());
  for (int q = 0; q < Y.size(); ++q) {
    std::vector<std::string> outer, inner;
    if (my_supp->contains(q))
      for (int p : my_supp->nbrs_in[q]) outer.push_back(Y.point_ids[p]);
    if (u.mu_supp->contains(q))
      for (int p : u.mu_supp->nbrs_in[q]) inner.push_back(Y.point_ids[p]);
    pi[q] = restriction_matrix(outer, inner);
  }

  // Test family: structured distance fields plus seeded 1-Lipschitz fields.
  std::vector<ScalarField> tests;
  for (int q : u.mu.support) {
    ScalarField f = constant_field(u.target, 0.0);
    for (int p = 0; p < Y.size(); ++p) f.v[p] = Y.dist(p, q);
    tests.push_back(std::move(f));
  }
  for (int r = 0; r < n_test_fields; ++r)
    tests.push_back(random_one_lipschitz(u.target, seed + r));

  for (const ScalarField& f : tests) {
    Element dmy = differential(my_cot, f);
    Element dmu = differential(du.mu_cot, f);
    for (int q : my_supp->points) {
      std::vector<double> restricted = pi[q].apply(dmy.coords[q]);
      std::vector<double> want;
      if (u.mu_supp->contains(q)) want = dmu.coords[q];
      for (size_t i = 0; i < restricted.size(); ++i)
        rep.pi_test_residual =
            std::max(rep.pi_test_residual, std::abs(restricted[i] - want[i]));
      const double before = fiber_norm(my_cot->norm[q], dmy.coords[q]);
      const double after =
          u.mu_supp->contains(q) ? fiber_norm(du.mu_cot->norm[q], dmu.coords[q]) : 0.0;
      rep.pi_contraction_gap = std::max(rep.pi_contraction_gap, before - after);
    }
  }

  // (u^* pi)^*: zero-padding inclusion from the du codomain into cod_hat.
  for (int x = 0; x < n; ++x) {
    Mat incl = restriction_matrix(cod_hat->labels[x], du.codomain->labels[x]).transposed();
    const int deg = du.tangent_x->dim(x);
    for (int j = 0; j < deg; ++j) {
      std::vector<double> duv(du.D[x].rows), duv_hat(Dhat[x].rows);
      for (int i = 0; i < du.D[x].rows; ++i) duv[i] = du.D[x](i, j);
      for (int i = 0; i < Dhat[x].rows; ++i) duv_hat[i] = Dhat[x](i, j);
      std::vector<double> padded = incl.apply(duv);
      for (size_t i = 0; i < padded.size(); ++i)
        rep.max_claim_residual =
            std::max(rep.max_claim_residual, std::abs(padded[i] - duv_hat[i]));
      double nhat = 0.0, ndu = 0.0;
      for (double c : duv_hat) nhat += std::abs(c);
      for (double c : duv) ndu += std::abs(c);
      rep.max_conseq_excess = std::max(rep.max_conseq_excess, nhat - ndu);
      rep.max_norm_gap = std::max(rep.max_norm_gap, std::abs(nhat - ndu));
    }
    rep.samenorm_gap = std::max(rep.samenorm_gap, u.slope.v[x] - du.opnorm.v[x]);
  }
  return rep;
}

std::vector<std::vector<int>> default_local_family(const SpacePtr& space) {
  std::vector<std::vector<int>> family;
  std::set<int> acc;
  for (int x = 0; x < space->size(); ++x) {
    acc.insert(x);
    for (int y : space->nbrs(x)) acc.insert(y);
    std::vector<int> pts(acc.begin(), acc.end());
    if (!family.empty() && family.back() == pts) continue;
    family.push_back(std::move(pts));
  }
  return family;
}

LocalBuild local_build(const Differential& du, const std::vector<std::vector<int>>& family,
                       int n_random_fields, uint64_t seed) {
  const MetricMap& u = du.map;
  const SpacePtr X = u.source;
  const SpacePtr Y = u.target;
  const int nf = static_cast<int>(family.size());
  if (nf == 0) throw NotACover("empty family");

  std::vector<std::vector<char>> in(nf, std::vector<char>(X->size(), 0));
  for (int i = 0; i < nf; ++i)
    for (int x : family[i]) in[i][x] = 1;

  std::vector<char> covered(X->size(), 0);
  for (int i = 0; i < nf; ++i)
    for (int x : family[i]) covered[x] = 1;
  for (int x = 0; x < X->size(); ++x)
    if (!covered[x]) throw NotACover("family misses " + X->point_ids[x]);

  auto contains = [&](int i, int j) {  // family[j] subset of family[i]
    for (int x : family[j])
      if (!in[i][x]) return false;
    return true;
  };
  std::vector<std::vector<char>> leq(nf, std::vector<char>(nf, 0));
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j) leq[i][j] = contains(j, i) ? 1 : 0;
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j) {
      bool ub = false;
      for (int l = 0; l < nf && !ub; ++l) ub = leq[i][l] && leq[j][l];
      if (!ub) throw NotDirected("family members " + std::to_string(i) + " and " +
                                 std::to_string(j) + " have no common superset");
    }

  LocalBuild out;
  out.family = family;

  SupportPtr full_x = full_support(X);
  ModulePtr cot_full = cotangent_module(full_x);

  // Per-Omega structure.
  std::vector<SupportPtr> mu_supps(nf), nus(nf), om_supps(nf);
  std::vector<ModulePtr> a_mods(nf), b_mods(nf);
  for (int i = 0; i < nf; ++i) {
    std::vector<double> mass(Y->size(), 0.0);
    for (int x : family[i]) mass[u.u(x)] += u.slope.v[x] * u.slope.v[x] * X->weights[x];
    std::vector<int> supp;
    for (int q = 0; q < Y->size(); ++q)
      if (mass[q] > 0.0) supp.push_back(q);
    mu_supps[i] = make_support(Y, supp, u.eps_y);
    std::vector<int> nu_pts;
    for (int x : family[i])
      if (u.slope.v[x] > 0.0) nu_pts.push_back(x);
    std::sort(nu_pts.begin(), nu_pts.end());
    nus[i] = make_support(X, nu_pts);
    a_mods[i] = ext(pullback(cotangent_module(mu_supps[i]), u.point_map(), nus[i]), full_x);
    om_supps[i] = make_support(X, family[i], X->epsilon);
    b_mods[i] = ext(cotangent_module(om_supps[i]), full_x);
  }

  ScalarField ones = constant_field(X, 1.0);
  InverseSystem A, B;
  A.modules = a_mods;
  B.modules = b_mods;
  A.leq = leq;
  B.leq = leq;
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j) {
      if (i == j || !leq[i][j]) continue;
      std::vector<Mat> pa(X->size()), pb(X->size());
      for (int x = 0; x < X->size(); ++x) {
        pa[x] = restriction_matrix(a_mods[j]->labels[x], a_mods[i]->labels[x]);
        pb[x] = restriction_matrix(b_mods[j]->labels[x], b_mods[i]->labels[x]);
      }
      A.proj.emplace(std::make_pair(i, j),
                     make_module_map(a_mods[j], a_mods[i], std::move(pa), ones));
      B.proj.emplace(std::make_pair(i, j),
                     make_module_map(b_mods[j], b_mods[i], std::move(pb), ones));
    }

  // T_Omega: edge transport from pulled-back target covectors to source
  // covectors, bounded by |Du| (certified row-exactly, sup to sup).
  std::vector<ModuleMap> T(nf);
  for (int i = 0; i < nf; ++i) {
    std::vector<Mat> mats(X->size());
    for (int x = 0; x < X->size(); ++x) {
      const auto& rows = b_mods[i]->labels[x];   // neighbors of x inside Omega
      const auto& cols = a_mods[i]->labels[x];   // mu_Omega-neighbors of u(x)
      Mat M(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
      if (!cols.empty()) {
        for (size_t r = 0; r < rows.size(); ++r) {
          const int y = X->index(rows[r]);
          const int qy = u.u(y);
          if (qy == u.u(x)) continue;
          for (size_t c = 0; c < cols.size(); ++c)
            if (Y->point_ids[qy] == cols[c]) {
              M(static_cast<int>(r), static_cast<int>(c)) =
                  Y->dist(u.u(x), qy) / X->dist(x, y);
              break;
            }
        }
      }
      mats[x] = std::move(M);
    }
    T[i] = make_module_map(a_mods[i], b_mods[i], std::move(mats), u.slope);
  }

  out.pulled = std::move(A);
  out.cotangents = std::move(B);
  out.pulled_limit = inverse_limit(out.pulled);
  out.cotangent_limit = inverse_limit(out.cotangents);
  out.T = limit_map(out.pulled, out.cotangents, out.pulled_limit, out.cotangent_limit, T,
                    u.slope);

  // |du_loc|: operator norm of T at each point. The limit fiber norm equals
  // the sup norm of the top block (projections are contractions), so the
  // sup-to-sup row formula applies to T's matrix directly.
  out.duloc_opnorm = constant_field(X, 0.0);
  for (int x = 0; x < X->size(); ++x) {
    double on = 0.0;
    for (int r = 0; r < out.T.m[x].rows; ++r) {
      double row = 0.0;
      for (int c = 0; c < out.T.m[x].cols; ++c) row += std::abs(out.T.m[x](r, c));
      on = std::max(on, row);
    }
    out.duloc_opnorm.v[x] = on;
    out.max_norm_residual =
        std::max(out.max_norm_residual, std::abs(on - du.opnorm.v[x]));
  }

  // Pairing coincidence on generator families over each Omega: the limit
  // route T(omega) against the global pullback differential.
  std::vector<ScalarField> fields;
  std::set<int> seen;
  for (int i = 0; i < nf; ++i)
    for (int q : mu_supps[i]->points) seen.insert(q);
  for (int q : seen) {
    ScalarField f = constant_field(Y, 0.0);
    for (int p = 0; p < Y->size(); ++p) f.v[p] = Y->dist(p, q);
    fields.push_back(std::move(f));
  }
  for (int r = 0; r < n_random_fields; ++r)
    fields.push_back(random_one_lipschitz(Y, seed + r));

  std::vector<ModulePtr> mu_cots(nf);
  for (int i = 0; i < nf; ++i) mu_cots[i] = cotangent_module(mu_supps[i]);
  for (const ScalarField& f : fields) {
    std::vector<Element> fam;
    for (int i = 0; i < nf; ++i) {
      Element dmu_i = differential(mu_cots[i], f);
      Element lift = zero_element(a_mods[i]);
      for (int x : nus[i]->points) lift.coords[x] = dmu_i.coords[u.u(x)];
      fam.push_back(std::move(lift));
    }
    Element omega = limit_element_from_family(out.pulled_limit, out.pulled, fam);
    Element t_omega = apply(out.T, omega);
    Element dg = pullback_differential(u, f, cot_full);
    // Both live in cotangent coordinates of the full space.
    for (int x = 0; x < X->size(); ++x)
      for (size_t j = 0; j < dg.coords[x].size(); ++j)
        out.max_pairing_residual = std::max(
            out.max_pairing_residual, std::abs(t_omega.coords[x][j] - dg.coords[x][j]));
  }
  return out;
}

}  // namespace msc
