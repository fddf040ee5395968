#include "msc/module.hpp"

#include <algorithm>
#include <cmath>

#include "msc/errors.hpp"

namespace msc {

double fiber_norm(const FiberNorm& n, const std::vector<double>& v) {
  switch (n.kind) {
    case NormKind::Sup: {
      double m = 0.0;
      for (size_t i = 0; i < v.size(); ++i) m = std::max(m, n.weights[i] * std::abs(v[i]));
      return m;
    }
    case NormKind::Sum: {
      double s = 0.0;
      for (size_t i = 0; i < v.size(); ++i) s += n.weights[i] * std::abs(v[i]);
      return s;
    }
    case NormKind::Euclidean: {
      double s = 0.0;
      for (size_t i = 0; i < v.size(); ++i) s += n.weights[i] * v[i] * v[i];
      return std::sqrt(s);
    }
    case NormKind::MaxImage: {
      double m = 0.0;
      for (const auto& im : n.images) {
        FiberNorm comp;
        comp.kind = im.kind;
        comp.weights = im.weights;
        m = std::max(m, fiber_norm(comp, im.map.apply(v)));
      }
      return m;
    }
  }
  return 0.0;
}

ModulePtr make_module(SupportPtr base, std::vector<std::vector<std::string>> labels,
                      std::vector<FiberNorm> norms) {
  auto m = std::make_shared<Module>();
  m->base = std::move(base);
  m->labels = std::move(labels);
  m->norm = std::move(norms);
  const int n = m->base->space->size();
  if (static_cast<int>(m->labels.size()) != n || static_cast<int>(m->norm.size()) != n)
    throw Error("module fiber tables must cover the whole parent space");
  for (int x = 0; x < n; ++x) {
    if (!m->base->contains(x) && !m->labels[x].empty())
      throw Error("nonempty fiber off the base support");
    if (m->norm[x].kind != NormKind::MaxImage &&
        m->norm[x].weights.size() != m->labels[x].size())
      throw Error("fiber norm weight size mismatch");
  }
  return m;
}

bool structurally_equal(const Module& a, const Module& b) {
  if (a.base->space != b.base->space) return false;
  if (a.base->member != b.base->member) return false;
  if (a.labels != b.labels) return false;
  for (size_t x = 0; x < a.norm.size(); ++x) {
    if (a.norm[x].kind != b.norm[x].kind) return false;
    if (a.norm[x].weights.size() != b.norm[x].weights.size()) return false;
    for (size_t i = 0; i < a.norm[x].weights.size(); ++i) {
      const double wa = a.norm[x].weights[i], wb = b.norm[x].weights[i];
      // Reciprocals of reciprocals land within an ulp, not bitwise.
      if (std::abs(wa - wb) > 1e-12 * std::max({1.0, std::abs(wa), std::abs(wb)})) return false;
    }
  }
  return true;
}

Element zero_element(const ModulePtr& m) {
  Element e;
  e.module = m;
  e.coords.resize(m->space_size());
  for (int x = 0; x < m->space_size(); ++x) e.coords[x].assign(m->dim(x), 0.0);
  return e;
}

Element add(const Element& a, const Element& b) { return axpy(1.0, a, 1.0, b); }

Element axpy(double alpha, const Element& a, double beta, const Element& b) {
  if (!structurally_equal(*a.module, *b.module)) throw BaseMismatch("element module mismatch");
  Element out = zero_element(a.module);
  for (size_t x = 0; x < out.coords.size(); ++x)
    for (size_t i = 0; i < out.coords[x].size(); ++i)
      out.coords[x][i] = alpha * a.coords[x][i] + beta * b.coords[x][i];
  return out;
}

double max_abs_diff(const Element& a, const Element& b) {
  double m = 0.0;
  for (size_t x = 0; x < a.coords.size(); ++x)
    for (size_t i = 0; i < a.coords[x].size(); ++i)
      m = std::max(m, std::abs(a.coords[x][i] - b.coords[x][i]));
  return m;
}

ScalarField pointwise_norm(const Element& e) {
  const Module& m = *e.module;
  ScalarField f = constant_field(m.base->space, 0.0);
  for (int x = 0; x < m.space_size(); ++x)
    if (m.dim(x) > 0) f.v[x] = fiber_norm(m.norm[x], e.coords[x]);
  return f;
}

Element smul(const ScalarField& g, const Element& e) {
  if (g.space != e.module->base->space) throw BaseMismatch("scalar field on a different space");
  Element out = e;
  for (size_t x = 0; x < out.coords.size(); ++x)
    for (double& c : out.coords[x]) c *= g.v[x];
  return out;
}

ModulePtr dual(const ModulePtr& m) {
  auto d = std::make_shared<Module>(*m);
  for (auto& n : d->norm) {
    switch (n.kind) {
      case NormKind::Sup: n.kind = NormKind::Sum; break;
      case NormKind::Sum: n.kind = NormKind::Sup; break;
      case NormKind::Euclidean: break;
      case NormKind::MaxImage:
        throw Error("dual of a max-image norm is not closed-form; unsupported");
    }
    for (double& w : n.weights) w = 1.0 / w;
  }
  return d;
}

ScalarField pairing(const Element& omega, const Element& v) {
  if (omega.module->base->space != v.module->base->space)
    throw BaseMismatch("pairing across different spaces");
  if (omega.module->labels != v.module->labels)
    throw BaseMismatch("pairing requires identical fiber coordinates");
  ScalarField f = constant_field(v.module->base->space, 0.0);
  for (size_t x = 0; x < v.coords.size(); ++x) {
    double s = 0.0;
    for (size_t i = 0; i < v.coords[x].size(); ++i) s += omega.coords[x][i] * v.coords[x][i];
    f.v[x] = s;
  }
  return f;
}

ModulePtr ext(const ModulePtr& m, const SupportPtr& ambient) {
  if (!subset_of(*m->base, *ambient)) throw NotASuperset("ext target must contain the base");
  auto e = std::make_shared<Module>(*m);
  e->base = ambient;
  return e;
}

Element ext_element(const ModulePtr& extended, const Element& e) {
  Element out = e;
  out.module = extended;
  return out;
}

ModulePtr pullback(const ModulePtr& m_on_target, const PointMap& u, const SupportPtr& nu) {
  if (nu->space != u.from || m_on_target->base->space != u.to)
    throw BaseMismatch("pullback spaces do not line up");
  std::vector<std::string> offending;
  for (int x : nu->points)
    if (!m_on_target->base->contains(u(x))) offending.push_back(u.from->point_ids[x]);
  if (!offending.empty()) throw AbsoluteContinuityViolation(std::move(offending));

  const int n = u.from->size();
  std::vector<std::vector<std::string>> labels(n);
  std::vector<FiberNorm> norms(n);
  for (int x = 0; x < n; ++x) {
    if (!nu->contains(x)) {
      norms[x] = FiberNorm::unit(NormKind::Sup, 0);
      continue;
    }
    labels[x] = m_on_target->labels[u(x)];
    norms[x] = m_on_target->norm[u(x)];
  }
  return make_module(nu, std::move(labels), std::move(norms));
}

Element pullback_lift(const ModulePtr& pb, const PointMap& u, const Element& v) {
  Element out = zero_element(pb);
  for (int x : pb->base->points) out.coords[x] = v.coords[u(x)];
  return out;
}

Element apply(const ModuleMap& T, const Element& e) {
  Element out = zero_element(T.target);
  for (int x = 0; x < T.target->space_size(); ++x) {
    if (T.m[x].rows == 0) continue;
    out.coords[x] = T.m[x].apply(e.coords[x]);
  }
  return out;
}

ModuleMap compose(const ModuleMap& second, const ModuleMap& first) {
  ModuleMap out;
  out.source = first.source;
  out.target = second.target;
  out.m.resize(first.m.size());
  for (size_t x = 0; x < first.m.size(); ++x) {
    if (second.m[x].rows == 0 || first.m[x].rows == 0) {
      out.m[x] = Mat(second.m[x].rows, first.m[x].cols);
      continue;
    }
    out.m[x] = second.m[x] * first.m[x];
  }
  out.bound = first.bound;
  for (size_t x = 0; x < out.bound.v.size(); ++x) out.bound.v[x] *= second.bound.v[x];
  return out;
}

ModuleMap identity_map(const ModulePtr& m) {
  ModuleMap T;
  T.source = m;
  T.target = m;
  T.m.resize(m->space_size());
  for (int x = 0; x < m->space_size(); ++x) T.m[x] = Mat::identity(m->dim(x));
  T.bound = constant_field(m->base->space, 1.0);
  return T;
}

double max_matrix_diff(const ModuleMap& a, const ModuleMap& b) {
  double m = 0.0;
  for (size_t x = 0; x < a.m.size(); ++x) m = std::max(m, a.m[x].max_abs_diff(b.m[x]));
  return m;
}

namespace {

// Exact operator norm where closed-form, otherwise the best lower bound from
// fiber basis extreme points; `exact` reports which one was computed.
double op_norm_fiber(const Mat& M, const FiberNorm& src, const FiberNorm& dst, bool& exact) {
  exact = true;
  if (M.cols == 0 || M.rows == 0) return 0.0;
  auto dst_col_norm = [&](int j, double scale) {
    std::vector<double> col(M.rows);
    for (int i = 0; i < M.rows; ++i) col[i] = M(i, j) * scale;
    return fiber_norm(dst, col);
  };
  if (src.kind == NormKind::Sum) {
    // Extreme points of the weighted-l1 ball are scaled basis vectors.
    double m = 0.0;
    for (int j = 0; j < M.cols; ++j) m = std::max(m, dst_col_norm(j, 1.0 / src.weights[j]));
    return m;
  }
  if (src.kind == NormKind::Sup && dst.kind == NormKind::Sup) {
    double m = 0.0;
    for (int i = 0; i < M.rows; ++i) {
      double row = 0.0;
      for (int j = 0; j < M.cols; ++j) row += std::abs(M(i, j)) / src.weights[j];
      m = std::max(m, dst.weights[i] * row);
    }
    return m;
  }
  if (src.kind == NormKind::Euclidean && dst.kind == NormKind::Euclidean) {
    Mat scaled = M;
    for (int i = 0; i < M.rows; ++i)
      for (int j = 0; j < M.cols; ++j)
        scaled(i, j) = std::sqrt(dst.weights[i]) * M(i, j) / std::sqrt(src.weights[j]);
    return spectral_norm(scaled);
  }
  // Fiber basis extreme points (necessary condition only).
  exact = false;
  double m = 0.0;
  for (int j = 0; j < M.cols; ++j) {
    std::vector<double> e(M.cols, 0.0);
    e[j] = 1.0;
    const double en = fiber_norm(src, e);
    if (en == 0.0) continue;
    m = std::max(m, dst_col_norm(j, 1.0 / en));
  }
  return m;
}

}  // namespace

void certify_bound(const ModuleMap& T, double tol) {
  for (int x = 0; x < T.source->space_size(); ++x) {
    if (T.m[x].cols == 0 || T.m[x].rows == 0) continue;
    bool exact = false;
    const double n = op_norm_fiber(T.m[x], T.source->norm[x], T.target->norm[x], exact);
    const double b = T.bound.v[x];
    if (n > b + tol * std::max(1.0, b))
      throw BoundViolated("certified bound violated at " +
                          T.source->base->space->point_ids[x] + ": operator norm " +
                          std::to_string(n) + " exceeds bound " + std::to_string(b));
  }
}

ModuleMap make_module_map(ModulePtr source, ModulePtr target, std::vector<Mat> mats,
                          ScalarField bound, bool certify) {
  ModuleMap T;
  T.source = std::move(source);
  T.target = std::move(target);
  T.m = std::move(mats);
  T.bound = std::move(bound);
  if (T.source->base->space != T.target->base->space)
    throw BaseMismatch("module map endpoints live over different spaces");
  for (int x = 0; x < T.source->space_size(); ++x) {
    if (T.m[x].cols != T.source->dim(x) || T.m[x].rows != T.target->dim(x))
      throw Error("module map matrix shape mismatch at " +
                  T.source->base->space->point_ids[x]);
  }
  if (certify) certify_bound(T);
  return T;
}

ModuleMap induced_map(const ModulePtr& pb, const PointMap& u, const ModulePtr& m_on_target,
                      const ModulePtr& target_module,
                      const std::vector<std::pair<Element, Element>>& gens, const ScalarField& f) {
  constexpr double kRankTol = 1e-10;
  const int n = u.from->size();
  const int g = static_cast<int>(gens.size());

  // Bound precondition on the listed pairs.
  for (const auto& [v, w] : gens) {
    if (!structurally_equal(*v.module, *m_on_target))
      throw BaseMismatch("generator does not live in the pulled-back module");
    ScalarField nv = pointwise_norm(v);    // over the target space
    ScalarField nw = pointwise_norm(w);    // over the source space
    for (int x : pb->base->points) {
      const double lhs = nw.v[x];
      const double rhs = f.v[x] * nv.v[u(x)];
      if (lhs > rhs + 1e-9 * std::max(1.0, rhs))
        throw BoundViolated("generator image exceeds the prescribed bound at " +
                            u.from->point_ids[x]);
    }
  }

  std::vector<Mat> mats(n);
  for (int x = 0; x < n; ++x) {
    const int k = pb->dim(x);
    const int dN = target_module->dim(x);
    if (!pb->base->contains(x)) {
      mats[x] = Mat(dN, 0);
      continue;
    }
    Mat L(k, g), W(dN, g);
    for (int j = 0; j < g; ++j) {
      const auto& lift = gens[j].first.coords[u(x)];
      const auto& img = gens[j].second.coords[x];
      for (int i = 0; i < k; ++i) L(i, j) = lift[i];
      for (int i = 0; i < dN; ++i) W(i, j) = img[i];
    }
    if (k > 0 && rank(L, kRankTol) < k)
      throw GeneratorsDoNotSpan("lifted generators do not span the pullback fiber at " +
                                u.from->point_ids[x]);
    if (k == 0) {
      // Zero fiber: the only consistent images are zero.
      for (int i = 0; i < dN; ++i)
        for (int j = 0; j < g; ++j)
          if (std::abs(W(i, j)) > kRankTol)
            throw InconsistentImages("nonzero image over a zero fiber at " +
                                     u.from->point_ids[x]);
      mats[x] = Mat(dN, 0);
      continue;
    }
    auto A = fit_through_generators(W, L, kRankTol);
    if (!A) throw GeneratorsDoNotSpan("rank-deficient generator Gram matrix at " +
                                      u.from->point_ids[x]);
    if ((*A * L).max_abs_diff(W) > 1e-8)
      throw InconsistentImages("generator images are not linearly consistent at " +
                               u.from->point_ids[x]);
    mats[x] = *A;
  }
  return make_module_map(pb, target_module, std::move(mats), f);
}

}  // namespace msc
