#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "msc/linalg.hpp"
#include "msc/space.hpp"

namespace msc {

enum class NormKind { Sup, Sum, Euclidean, MaxImage };

/// Norm on one finite-dimensional fiber. The three weighted kinds are
/// closed-form along with their duals; MaxImage (max of component norms of
/// pushed coordinates) carries inverse-limit fibers and has no dual here.
struct FiberNorm {
  NormKind kind = NormKind::Sup;
  std::vector<double> weights;  // per coordinate, positive (closed kinds)

  struct Image {
    Mat map;
    NormKind kind = NormKind::Sup;
    std::vector<double> weights;
  };
  std::vector<Image> images;  // MaxImage only

  static FiberNorm weighted(NormKind k, std::vector<double> w) {
    FiberNorm n;
    n.kind = k;
    n.weights = std::move(w);
    return n;
  }
  static FiberNorm unit(NormKind k, int dim) {
    return weighted(k, std::vector<double>(dim, 1.0));
  }
};

double fiber_norm(const FiberNorm& n, const std::vector<double>& v);

/// L0-normed module over a finite measure space: one normed fiber per point
/// of the base support, empty fibers meaning the zero space.
struct Module {
  SupportPtr base;
  std::vector<std::vector<std::string>> labels;  // per space index, fiber coordinates
  std::vector<FiberNorm> norm;                   // per space index

  int dim(int x) const { return static_cast<int>(labels[x].size()); }
  int space_size() const { return base->space->size(); }
};
using ModulePtr = std::shared_ptr<const Module>;

/// Module with identical fiber structure everywhere on the base.
ModulePtr make_module(SupportPtr base, std::vector<std::vector<std::string>> labels,
                      std::vector<FiberNorm> norms);

bool structurally_equal(const Module& a, const Module& b);

struct Element {
  ModulePtr module;
  std::vector<std::vector<double>> coords;  // per space index, fiber vector
};

Element zero_element(const ModulePtr& m);
Element add(const Element& a, const Element& b);
Element axpy(double alpha, const Element& a, double beta, const Element& b);
double max_abs_diff(const Element& a, const Element& b);

ScalarField pointwise_norm(const Element& e);

/// Pointwise module action g . v; requires matching parent space.
Element smul(const ScalarField& g, const Element& e);

/// Dual module: same fibers, dual norm kind, reciprocal weights.
ModulePtr dual(const ModulePtr& m);

/// Coordinatewise pairing of an element of dual(M) (or M) against one of M.
ScalarField pairing(const Element& omega, const Element& v);

/// Extension by zero fibers from m's base to a superset support.
ModulePtr ext(const ModulePtr& m, const SupportPtr& ambient);
Element ext_element(const ModulePtr& extended, const Element& e);

/// Point map between spaces, used by pullbacks.
struct PointMap {
  SpacePtr from, to;
  std::vector<int> assign;  // from-index -> to-index

  int operator()(int x) const { return assign[x]; }
};

/// Pullback module u^*M over nu: fiber at x is M's fiber at u(x).
/// Requires u(x) in M.base for every x in nu.
ModulePtr pullback(const ModulePtr& m_on_target, const PointMap& u, const SupportPtr& nu);

/// [u^* v]: coords at x are v's coords at u(x).
Element pullback_lift(const ModulePtr& pb, const PointMap& u, const Element& v);

/// L0-linear map given by per-point matrices with a certified bound field.
struct ModuleMap {
  ModulePtr source, target;
  std::vector<Mat> m;  // per space index (target-dim x source-dim)
  ScalarField bound;
};

Element apply(const ModuleMap& T, const Element& e);
ModuleMap compose(const ModuleMap& second, const ModuleMap& first);
ModuleMap identity_map(const ModulePtr& m);
double max_matrix_diff(const ModuleMap& a, const ModuleMap& b);

/// Verifies |T v| <= bound |v| per point. Exact (closed-form operator norm)
/// for Sum-normed sources, Sup->Sup and Euclidean->Euclidean fibers;
/// elsewhere checked on fiber basis extreme points. Throws BoundViolated.
void certify_bound(const ModuleMap& T, double tol = 1e-9);

ModuleMap make_module_map(ModulePtr source, ModulePtr target, std::vector<Mat> mats,
                          ScalarField bound, bool certify = true);

/// Unique L0-linear extension of generator assignments through the pullback.
/// `gens` pairs elements of m_on_target with images in `target_module`
/// (a module over nu's space). Bound f is checked on the generator pairs and
/// certified on the result.
ModuleMap induced_map(const ModulePtr& pb, const PointMap& u, const ModulePtr& m_on_target,
                      const ModulePtr& target_module,
                      const std::vector<std::pair<Element, Element>>& gens, const ScalarField& f);

}  // namespace msc
