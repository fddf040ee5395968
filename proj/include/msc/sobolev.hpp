#pragma once

#include "msc/module.hpp"

namespace msc {

/// Cotangent module over a carrier: fiber at x indexed by the neighbors of x
/// within the carrier, sup norm with unit weights. Differentials of scalar
/// fields generate every fiber.
ModulePtr cotangent_module(const SupportPtr& carrier);

/// Tangent module = dual of the cotangent one (sum norm on edge fibers).
ModulePtr tangent_module(const SupportPtr& carrier);

/// df(x)[y] = (f(y) - f(x)) / d(x,y) over neighbors y of x in the carrier.
Element differential(const ModulePtr& cotangent, const ScalarField& f);

/// Minimal weak upper gradient: |Df|(x) = max_y |f(y)-f(x)|/d(x,y) over the
/// carrier neighbors; 0 at isolated points.
ScalarField mwug(const Support& carrier, const ScalarField& f);

/// Unit-norm tangent field pairing to |omega| pointwise: full mass on one
/// maximizing edge with matching sign, lowest fiber index on ties, zero
/// where |omega| vanishes.
Element norming_vector(const Element& omega);

/// Projection between extended cotangent modules of nested carriers
/// (coordinate restriction) with its norm-preserving right inverse
/// (zero padding), both over the full parent space.
struct MeasureProjection {
  ModuleMap P;              // Ext(cot E2) -> Ext(cot E1)
  ModuleMap right_inverse;  // Ext(cot E1) -> Ext(cot E2), P o R = id
};

MeasureProjection measure_projection(const SupportPtr& e1, const SupportPtr& e2);

/// Coordinate-restriction matrix between two cotangent fibers at x for
/// nested neighbor sets (rows: inner labels, cols: outer labels).
Mat restriction_matrix(const std::vector<std::string>& outer,
                       const std::vector<std::string>& inner);

}  // namespace msc
