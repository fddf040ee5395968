#pragma once

#include <array>
#include <functional>
#include <string>

#include "msc/differential.hpp"

namespace msc {

/// Axis-aligned grid {0, h, ..., (n-1)h}^dim with Euclidean distances,
/// weights h^dim and epsilon just above h, so tangent fibers contain axis
/// neighbors only and interior nodes have exactly 2*dim of them.
struct GridSpace {
  int dim = 1;
  int n = 17;
  double h = 1.0 / 16.0;
  SpacePtr space;
  std::vector<std::array<double, 3>> coords;  // unused axes fixed at 0
  std::vector<int> interior;
};

GridSpace make_grid(int dim, int n, double h);

/// Lipschitz map on [0,1]^dim into a metric target with a closed-form
/// metric differential md(u, x)(v).
struct MapCatalogEntry {
  std::string name;
  int dim = 1;
  bool linear = false;
  double declared_lip = 1.0;
  std::function<std::vector<double>(const std::array<double, 3>&)> u;
  std::function<double(const std::vector<double>&, const std::vector<double>&)> target_dist;
  std::function<double(const std::array<double, 3>&, const std::array<double, 3>&)> md;
};

std::vector<MapCatalogEntry> default_catalog(int max_dim);

/// One-step difference quotient d_Y(u(x + t v), u(x)) / t. Throws
/// OutOfDomain when x or x + t v leaves [0,1]^dim.
double md_estimate(const MapCatalogEntry& entry, const std::array<double, 3>& x,
                   const std::array<double, 3>& v, double t);

/// Restriction of the entry to a grid as a MetricValuedMap (target = merged
/// image points with the induced metric).
MetricMap grid_metric_map(const MapCatalogEntry& entry, const GridSpace& grid);

struct MdComparison {
  std::string entry;
  double h = 0.0;
  std::vector<double> max_error_per_direction;
  double max_error = 0.0;
};

/// Compares |du(e_i-bar)| against md(u, .)(e_i) at interior nodes, per
/// coordinate direction.
MdComparison compare_md_du(const MapCatalogEntry& entry, const GridSpace& grid);

struct SeminormReport {
  double tol = 0.0;
  double homogeneity_residual = 0.0;
  double subadditivity_excess = 0.0;  // positive part of md(v+w)-md(v)-md(w)-tol
};

/// Seminorm axioms of the estimated md over sampled directions at step t.
SeminormReport seminorm_check(const MapCatalogEntry& entry, const std::array<double, 3>& x,
                              const std::vector<std::array<double, 3>>& directions, double t);

}  // namespace msc
