#include "msc/invlim.hpp"

#include <algorithm>
#include <cmath>

#include "msc/errors.hpp"

namespace msc {

const ModuleMap* InverseSystem::projection(int i, int j) const {
  auto it = proj.find({i, j});
  return it == proj.end() ? nullptr : &it->second;
}

int validate_system(const InverseSystem& s, double tol) {
  const int k = s.size();
  if (k == 0) throw Error("empty inverse system");
  if (static_cast<int>(s.leq.size()) != k) throw Error("relation table size mismatch");
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(s.leq[i].size()) != k) throw Error("relation table size mismatch");
    if (!s.leq[i][i]) throw Error("relation must be reflexive");
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && s.leq[i][j] && s.leq[j][i]) throw Error("relation must be antisymmetric");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l)
        if (s.leq[i][j] && s.leq[j][l] && !s.leq[i][l]) throw Error("relation must be transitive");

  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j || !s.leq[i][j]) continue;
      const ModuleMap* p = s.projection(i, j);
      if (!p) throw Error("missing projection for a related pair");
      if (p->source != s.modules[j] || p->target != s.modules[i])
        throw Error("projection endpoints do not match the system");
      for (double b : p->bound.v)
        if (b > 1.0 + tol) throw Error("system projections must be contractions");
      certify_bound(*p, tol);
    }

  // Directedness: every pair has an upper bound inside the family.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      bool ok = false;
      for (int l = 0; l < k && !ok; ++l) ok = s.leq[i][l] && s.leq[j][l];
      if (!ok)
        throw NotDirected("indices " + std::to_string(i) + " and " + std::to_string(j) +
                          " have no upper bound");
    }

  // Composition law, checked exhaustively on all chains i <= j <= l.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) {
        if (!(s.leq[i][j] && s.leq[j][l])) continue;
        if (i == j || j == l) continue;
        const ModuleMap* pij = s.projection(i, j);
        const ModuleMap* pjl = s.projection(j, l);
        const ModuleMap* pil = s.projection(i, l);
        if (max_matrix_diff(compose(*pij, *pjl), *pil) > tol)
          throw CompositionLawViolated("P_" + std::to_string(j) + "^" + std::to_string(i) +
                                       " o P_" + std::to_string(l) + "^" + std::to_string(j) +
                                       " != P_" + std::to_string(l) + "^" + std::to_string(i));
      }

  // A finite directed partial order has a maximum.
  for (int m = 0; m < k; ++m) {
    bool top = true;
    for (int i = 0; i < k; ++i) top = top && s.leq[i][m];
    if (top) return m;
  }
  throw NotDirected("no maximum element");
}

InverseLimit inverse_limit(const InverseSystem& s) {
  constexpr double kTol = 1e-9;
  const int top = validate_system(s, kTol);
  const int k = s.size();
  const SpacePtr space = s.modules[0]->base->space;
  const int n = space->size();

  InverseLimit lim;
  lim.top = top;

  // The limit fiber is the kernel of the compatibility constraints. The
  // canonical basis is the family (P_top^i e_t)_i per top-fiber coordinate;
  // we verify against the constraint matrix that nothing else is in the
  // kernel (kernel dimension equals the top fiber dimension).
  std::vector<Mat> basis(n);
  std::vector<std::vector<std::string>> labels(n);
  std::vector<FiberNorm> norms(n);
  std::vector<int> offsets(k, 0);

  for (int x = 0; x < n; ++x) {
    int total = 0;
    for (int i = 0; i < k; ++i) {
      offsets[i] = total;
      total += s.modules[i]->dim(x);
    }
    const int kd = s.modules[top]->dim(x);

    Mat B(total, kd);
    for (int i = 0; i < k; ++i) {
      Mat block = (i == top) ? Mat::identity(kd)
                             : (s.leq[i][top] ? s.projection(i, top)->m[x] : Mat());
      if (i != top && !s.leq[i][top]) throw NotDirected("top does not dominate the system");
      for (int r = 0; r < block.rows; ++r)
        for (int c = 0; c < kd; ++c) B(offsets[i] + r, c) = block(r, c);
    }

    // Constraint matrix: for every related pair i < j, P_ij v_j - v_i = 0.
    int crow = 0;
    for (const auto& [key, p] : s.proj) crow += p.m[x].rows;
    Mat C(crow, total);
    crow = 0;
    for (const auto& [key, p] : s.proj) {
      const auto [i, j] = key;
      const Mat& P = p.m[x];
      for (int r = 0; r < P.rows; ++r) {
        for (int c = 0; c < P.cols; ++c) C(crow + r, offsets[j] + c) = P(r, c);
        C(crow + r, offsets[i] + r) -= 1.0;
      }
      crow += P.rows;
    }
    const int kerdim = total - rank(C, 1e-10);
    if (kerdim != kd)
      throw CompositionLawViolated("compatibility kernel dimension " + std::to_string(kerdim) +
                                   " does not match the top fiber at " + space->point_ids[x]);
    // Canonical basis columns must satisfy the constraints.
    if (crow > 0 && kd > 0) {
      const Mat CB = C * B;
      double worst = 0.0;
      for (double v : CB.a) worst = std::max(worst, std::abs(v));
      if (worst > kTol)
        throw CompositionLawViolated("canonical limit basis violates the constraints at " +
                                     space->point_ids[x]);
    }

    basis[x] = B;
    labels[x].resize(kd);
    for (int t = 0; t < kd; ++t) labels[x][t] = "k" + std::to_string(t);
    FiberNorm nrm;
    nrm.kind = NormKind::MaxImage;
    for (int i = 0; i < k; ++i) {
      FiberNorm::Image im;
      im.map = (i == top) ? Mat::identity(kd) : s.projection(i, top)->m[x];
      im.kind = s.modules[i]->norm[x].kind;
      im.weights = s.modules[i]->norm[x].weights;
      if (im.kind == NormKind::MaxImage) throw Error("nested limit norms unsupported");
      nrm.images.push_back(std::move(im));
    }
    norms[x] = std::move(nrm);
  }

  lim.basis = std::move(basis);
  lim.module = make_module(s.modules[top]->base, std::move(labels), std::move(norms));

  for (int i = 0; i < k; ++i) {
    std::vector<Mat> mats(n);
    for (int x = 0; x < n; ++x)
      mats[x] = (i == top) ? Mat::identity(s.modules[top]->dim(x)) : s.projection(i, top)->m[x];
    lim.proj.push_back(make_module_map(lim.module, s.modules[i], std::move(mats),
                                       constant_field(space, 1.0), /*certify=*/false));
  }
  return lim;
}

Element limit_element_from_family(const InverseLimit& lim, const InverseSystem& s,
                                  const std::vector<Element>& family, double tol) {
  const int k = s.size();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j || !s.leq[i][j]) continue;
      Element projected = apply(*s.projection(i, j), family[j]);
      if (max_abs_diff(projected, family[i]) > tol)
        throw CompositionLawViolated("family is not compatible between " + std::to_string(i) +
                                     " and " + std::to_string(j));
    }
  // Coordinates are read off the top component; all other blocks of the
  // canonical basis then reproduce the family automatically.
  Element out = zero_element(lim.module);
  out.coords = family[lim.top].coords;
  for (int i = 0; i < k; ++i) {
    Element back = apply(lim.proj[i], out);
    if (max_abs_diff(back, family[i]) > tol)
      throw CompositionLawViolated("no limit element projects onto the family");
  }
  return out;
}

ModuleMap limit_map(const InverseSystem& src, const InverseSystem& dst,
                    const InverseLimit& src_lim, const InverseLimit& dst_lim,
                    const std::vector<ModuleMap>& maps, const ScalarField& ell, double tol) {
  const int k = src.size();
  if (dst.size() != k || static_cast<int>(maps.size()) != k)
    throw Error("componentwise maps must cover the whole index set");
  if (src.leq != dst.leq) throw Error("limit_map requires a shared index order");

  // Conjugacy T^i o P_j^i = Q_j^i o T^j, checked exhaustively.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j || !src.leq[i][j]) continue;
      const ModuleMap lhs = compose(maps[i], *src.projection(i, j));
      const ModuleMap rhs = compose(*dst.projection(i, j), maps[j]);
      if (max_matrix_diff(lhs, rhs) > tol)
        throw ConjugacyViolated("T^" + std::to_string(i) + " o P != Q o T^" + std::to_string(j));
    }
  // Uniform bound on every component.
  for (int i = 0; i < k; ++i) {
    ModuleMap probe = maps[i];
    probe.bound = ell;
    certify_bound(probe, tol);
  }

  // The induced map reads top coordinates; conjugacy makes every other
  // component commute.
  std::vector<Mat> mats = maps[src_lim.top].m;
  ModuleMap T = make_module_map(src_lim.module, dst_lim.module, std::move(mats), ell,
                                /*certify=*/false);
  // Certify the uniform bound on the limit norm over basis extreme points.
  for (int x = 0; x < src_lim.module->space_size(); ++x) {
    const int d = src_lim.module->dim(x);
    for (int t = 0; t < d; ++t) {
      std::vector<double> e(d, 0.0);
      e[t] = 1.0;
      const double nv = fiber_norm(src_lim.module->norm[x], e);
      if (nv == 0.0) continue;
      const double nw = fiber_norm(dst_lim.module->norm[x], T.m[x].apply(e));
      if (nw > ell.v[x] * nv + tol * std::max(1.0, ell.v[x] * nv))
        throw BoundViolated("limit map exceeds the uniform bound");
    }
  }
  return T;
}

}  // namespace msc
