#include "msc/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "msc/errors.hpp"

namespace msc {

ModulePtr cotangent_module(const SupportPtr& carrier) {
  const SpacePtr& s = carrier->space;
  const int n = s->size();
  std::vector<std::vector<std::string>> labels(n);
  std::vector<FiberNorm> norms(n);
  for (int x = 0; x < n; ++x) {
    if (carrier->contains(x))
      for (int y : carrier->nbrs_in[x]) labels[x].push_back(s->point_ids[y]);
    norms[x] = FiberNorm::unit(NormKind::Sup, static_cast<int>(labels[x].size()));
  }
  return make_module(carrier, std::move(labels), std::move(norms));
}

ModulePtr tangent_module(const SupportPtr& carrier) { return dual(cotangent_module(carrier)); }

Element differential(const ModulePtr& cotangent, const ScalarField& f) {
  const Support& carrier = *cotangent->base;
  const Space& s = *carrier.space;
  Element df = zero_element(cotangent);
  for (int x : carrier.points) {
    const auto& nb = carrier.nbrs_in[x];
    for (size_t i = 0; i < nb.size(); ++i)
      df.coords[x][i] = (f.v[nb[i]] - f.v[x]) / s.dist(x, nb[i]);
  }
  return df;
}

ScalarField mwug(const Support& carrier, const ScalarField& f) {
  const Space& s = *carrier.space;
  ScalarField g = constant_field(carrier.space, 0.0);
  for (int x : carrier.points) {
    double m = 0.0;
    for (int y : carrier.nbrs_in[x]) m = std::max(m, std::abs(f.v[y] - f.v[x]) / s.dist(x, y));
    g.v[x] = m;
  }
  return g;
}

Element norming_vector(const Element& omega) {
  const Module& m = *omega.module;
  Element v = zero_element(dual(omega.module));
  for (int x = 0; x < m.space_size(); ++x) {
    const auto& w = omega.coords[x];
    if (w.empty()) continue;
    int best = -1;
    double bestval = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      const double s = m.norm[x].weights[i] * std::abs(w[i]);
      if (s > bestval) {
        bestval = s;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) continue;  // zero covector
    const double tangent_weight = 1.0 / m.norm[x].weights[best];  // dual weight
    v.coords[x][best] = (w[best] >= 0.0 ? 1.0 : -1.0) / tangent_weight;
  }
  return v;
}

Mat restriction_matrix(const std::vector<std::string>& outer,
                       const std::vector<std::string>& inner) {
  Mat r(static_cast<int>(inner.size()), static_cast<int>(outer.size()));
  std::unordered_map<std::string, int> pos;
  for (size_t j = 0; j < outer.size(); ++j) pos.emplace(outer[j], static_cast<int>(j));
  for (size_t i = 0; i < inner.size(); ++i) {
    auto it = pos.find(inner[i]);
    if (it == pos.end()) throw Error("inner coordinate missing from outer fiber: " + inner[i]);
    r(static_cast<int>(i), it->second) = 1.0;
  }
  return r;
}

MeasureProjection measure_projection(const SupportPtr& e1, const SupportPtr& e2) {
  if (!subset_of(*e1, *e2)) throw NotNested("measure projection requires E1 inside E2");
  const SpacePtr space = e1->space;
  SupportPtr ambient = full_support(space);
  ModulePtr outer = ext(cotangent_module(e2), ambient);
  ModulePtr inner = ext(cotangent_module(e1), ambient);

  const int n = space->size();
  std::vector<Mat> pm(n), rm(n);
  for (int x = 0; x < n; ++x) {
    pm[x] = restriction_matrix(outer->labels[x], inner->labels[x]);
    rm[x] = pm[x].transposed();  // zero padding
  }
  MeasureProjection out;
  out.P = make_module_map(outer, inner, std::move(pm), constant_field(space, 1.0));
  out.right_inverse =
      make_module_map(inner, outer, std::move(rm), constant_field(space, 1.0));
  return out;
}

}  // namespace msc
