#pragma once

#include <map>
#include <utility>
#include <vector>

#include "msc/module.hpp"

namespace msc {

/// Finite directed family of modules over one space with contraction
/// projections P[i][j] : M_j -> M_i for i <= j. The relation must be a
/// partial order; identities on the diagonal are implicit.
struct InverseSystem {
  std::vector<ModulePtr> modules;
  std::vector<std::vector<char>> leq;            // leq[i][j] == 1 iff i <= j
  std::map<std::pair<int, int>, ModuleMap> proj; // keyed by (i, j), i < j in the order

  int size() const { return static_cast<int>(modules.size()); }
  const ModuleMap* projection(int i, int j) const;  // nullptr when i == j
};

/// Checks the order axioms, directedness, contraction bounds and the
/// composition law P_j^i o P_k^j = P_k^i exhaustively. Returns the maximum
/// element (every finite directed poset has one).
int validate_system(const InverseSystem& s, double tol = 1e-9);

struct InverseLimit {
  ModulePtr module;                 // fibers: compatible families, max-norm
  std::vector<ModuleMap> proj;      // limit -> modules[i]
  int top = -1;                     // maximum index of the system
  std::vector<Mat> basis;           // per point: stacked-coordinate kernel basis (columns)
};

/// Inverse limit with fibers realized as the kernel of the compatibility
/// constraints; the kernel basis is verified against the constraint matrix
/// and the pointwise norm is the max of projected norms.
InverseLimit inverse_limit(const InverseSystem& s);

/// Reads the limit coordinates of a compatible family (elements of the
/// component modules). Throws CompositionLawViolated if the family is not
/// compatible at `tol`. The result is the unique preimage.
Element limit_element_from_family(const InverseLimit& lim, const InverseSystem& s,
                                  const std::vector<Element>& family, double tol = 1e-9);

/// Unique map between limits commuting with all projections, given
/// componentwise maps T[i] with the conjugacy law and a uniform bound.
ModuleMap limit_map(const InverseSystem& src, const InverseSystem& dst,
                    const InverseLimit& src_lim, const InverseLimit& dst_lim,
                    const std::vector<ModuleMap>& maps, const ScalarField& ell,
                    double tol = 1e-9);

}  // namespace msc
