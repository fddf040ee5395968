#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "msc/errors.hpp"

namespace msc {

struct Space;
using SpacePtr = std::shared_ptr<const Space>;

/// Finite metric measure space: labelled points, explicit distance matrix,
/// positive weights, and closed-ball neighbor sets at scale `epsilon`
/// (a point is never its own neighbor; isolated points get empty sets).
struct Space {
  std::vector<std::string> point_ids;
  std::vector<double> dist_flat;  // n*n row-major
  std::vector<double> weights;
  double epsilon = 0.0;
  std::vector<std::vector<int>> neighbors;
  std::unordered_map<std::string, int> index_of;

  int size() const { return static_cast<int>(point_ids.size()); }
  double dist(int x, int y) const { return dist_flat[static_cast<size_t>(x) * point_ids.size() + y]; }
  int index(const std::string& id) const;
  const std::vector<int>& nbrs(int x) const { return neighbors[x]; }
};

/// Validating constructor. Checks symmetry, zero diagonal, positivity of
/// off-diagonal distances and weights, and the full triangle scan.
SpacePtr build_space(std::vector<std::string> points,
                     const std::vector<std::vector<double>>& dist,
                     std::vector<double> weights, double epsilon);

/// Construction path for metrics valid by construction (grid spaces, images
/// of metric embeddings): runs the O(n^2) checks but skips the O(n^3)
/// triangle scan, which is infeasible at grid scale.
SpacePtr build_space_trusted(std::vector<std::string> points,
                             std::vector<double> dist_flat,
                             std::vector<double> weights, double epsilon);

/// Exhaustive triple scan; throws TriangleViolation with the offending triple.
void verify_triangles(const Space& s);

/// Restricted carrier: a subset of a Space with its own neighbor scale.
/// Neighbor sets are computed inside the subset only.
struct Support {
  SpacePtr space;
  std::vector<char> member;          // size n
  std::vector<int> points;           // ascending indices
  double epsilon = 0.0;              // neighbor scale within the support
  std::vector<std::vector<int>> nbrs_in;  // per space index; empty off support

  bool contains(int x) const { return member[x] != 0; }
  int count() const { return static_cast<int>(points.size()); }
};
using SupportPtr = std::shared_ptr<const Support>;

SupportPtr full_support(const SpacePtr& s);
SupportPtr make_support(const SpacePtr& s, const std::vector<int>& subset);
SupportPtr make_support(const SpacePtr& s, const std::vector<int>& subset, double epsilon);

/// True when a.subset is contained in b.subset (same parent space).
bool subset_of(const Support& a, const Support& b);

/// Total real-valued function on (at least) the carrier it is used with.
struct ScalarField {
  SpacePtr space;
  std::vector<double> v;

  double operator[](int x) const { return v[x]; }
  double& operator[](int x) { return v[x]; }
};

ScalarField constant_field(const SpacePtr& s, double c);

double lipschitz_constant(const Space& s, const ScalarField& f);

/// Least L-Lipschitz extension f(x) = min_p (values[p] + L d(x,p)) of values
/// given on `sup.points` (aligned with that order). Values must be
/// L-Lipschitz on the subset.
ScalarField mcshane_extend(const Space& s, const Support& sup,
                           const std::vector<double>& values, double L);

/// Deterministic 1-Lipschitz field: McShane extension of clipped random
/// anchor values. Same seed, same field.
ScalarField random_one_lipschitz(const SpacePtr& s, uint64_t seed);

}  // namespace msc
