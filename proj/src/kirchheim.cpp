#include "msc/kirchheim.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "msc/errors.hpp"

namespace msc {

namespace {

double l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

GridSpace make_grid(int dim, int n, double h) {
  if (dim < 1 || dim > 3) throw Error("grid dimension must be 1, 2 or 3");
  if (n < 3) throw Error("grid needs at least 3 nodes per axis");
  GridSpace g;
  g.dim = dim;
  g.n = n;
  g.h = h;

  int total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  g.coords.resize(total);
  std::vector<std::string> ids(total);
  for (int idx = 0; idx < total; ++idx) {
    int rest = idx;
    std::array<double, 3> c{0.0, 0.0, 0.0};
    std::string id = "g";
    for (int d = 0; d < dim; ++d) {
      const int i = rest % n;
      rest /= n;
      c[d] = i * h;
      id += "_" + std::to_string(i);
    }
    g.coords[idx] = c;
    ids[idx] = id;
    bool inner = true;
    rest = idx;
    for (int d = 0; d < dim; ++d) {
      const int i = rest % n;
      rest /= n;
      inner = inner && i > 0 && i < n - 1;
    }
    if (inner) g.interior.push_back(idx);
  }

  std::vector<double> dist(static_cast<size_t>(total) * total, 0.0);
  for (int a = 0; a < total; ++a)
    for (int b = a + 1; b < total; ++b) {
      double s = 0.0;
      for (int d = 0; d < dim; ++d) s += (g.coords[a][d] - g.coords[b][d]) * (g.coords[a][d] - g.coords[b][d]);
      const double v = std::sqrt(s);
      dist[static_cast<size_t>(a) * total + b] = v;
      dist[static_cast<size_t>(b) * total + a] = v;
    }
  const double w = std::pow(h, dim);
  g.space = build_space_trusted(std::move(ids), std::move(dist),
                                std::vector<double>(total, w), h * (1.0 + 1e-9));
  return g;
}

double md_estimate(const MapCatalogEntry& entry, const std::array<double, 3>& x,
                   const std::array<double, 3>& v, double t) {
  if (!(t > 0.0)) throw Error("step t must be positive");
  std::array<double, 3> y = x;
  for (int d = 0; d < 3; ++d) y[d] += t * v[d];
  for (int d = 0; d < entry.dim; ++d) {
    if (x[d] < 0.0 || x[d] > 1.0 || y[d] < 0.0 || y[d] > 1.0)
      throw OutOfDomain("sample leaves [0,1]^d");
  }
  return entry.target_dist(entry.u(x), entry.u(y)) / t;
}

MetricMap grid_metric_map(const MapCatalogEntry& entry, const GridSpace& grid) {
  const int total = grid.space->size();
  // Merge duplicate images: two nodes share a target point iff their images
  // coincide (zero induced distance).
  std::vector<std::vector<double>> reps;
  std::vector<int> assign(total, -1);
  for (int x = 0; x < total; ++x) {
    std::vector<double> img = entry.u(grid.coords[x]);
    int found = -1;
    for (size_t r = 0; r < reps.size(); ++r)
      if (entry.target_dist(reps[r], img) <= 0.0) {
        found = static_cast<int>(r);
        break;
      }
    if (found < 0) {
      reps.push_back(std::move(img));
      found = static_cast<int>(reps.size()) - 1;
    }
    assign[x] = found;
  }
  const int m = static_cast<int>(reps.size());
  std::vector<double> dist(static_cast<size_t>(m) * m, 0.0);
  double diam = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const double v = entry.target_dist(reps[a], reps[b]);
      dist[static_cast<size_t>(a) * m + b] = v;
      dist[static_cast<size_t>(b) * m + a] = v;
      diam = std::max(diam, v);
    }
  std::vector<std::string> ids(m);
  for (int a = 0; a < m; ++a) ids[a] = "y" + std::to_string(a);
  SpacePtr target = build_space_trusted(std::move(ids), std::move(dist),
                                        std::vector<double>(m, 1.0),
                                        diam > 0.0 ? diam : 1.0);
  return make_metric_map(grid.space, target, std::move(assign));
}

MdComparison compare_md_du(const MapCatalogEntry& entry, const GridSpace& grid) {
  if (entry.dim != grid.dim) throw Error("entry/grid dimension mismatch");
  MetricMap u = grid_metric_map(entry, grid);
  Differential du = build_du(u);

  MdComparison out;
  out.entry = entry.name;
  out.h = grid.h;
  out.max_error_per_direction.assign(grid.dim, 0.0);

  // Strides per axis in the row-major node indexing.
  std::vector<int> stride(grid.dim, 1);
  for (int d = 1; d < grid.dim; ++d) stride[d] = stride[d - 1] * grid.n;

  SupportPtr full = full_support(grid.space);
  for (int d = 0; d < grid.dim; ++d) {
    std::array<double, 3> e{0.0, 0.0, 0.0};
    e[d] = 1.0;
    for (int x : grid.interior) {
      const int y = x + stride[d];  // +e_d axis neighbor
      // |du(e_d-bar)|(x): the unit single-edge tangent field along +e_d.
      const auto& nb = full->nbrs_in[x];
      int col = -1;
      for (size_t j = 0; j < nb.size(); ++j)
        if (nb[j] == y) col = static_cast<int>(j);
      if (col < 0) throw Error("grid neighbor structure broken");
      double norm = 0.0;
      for (int i = 0; i < du.D[x].rows; ++i) norm += std::abs(du.D[x](i, col));
      const double md = entry.md(grid.coords[x], e);
      out.max_error_per_direction[d] =
          std::max(out.max_error_per_direction[d], std::abs(norm - md));
    }
    out.max_error = std::max(out.max_error, out.max_error_per_direction[d]);
  }
  return out;
}

SeminormReport seminorm_check(const MapCatalogEntry& entry, const std::array<double, 3>& x,
                              const std::vector<std::array<double, 3>>& directions, double t) {
  SeminormReport rep;
  auto est = [&](const std::array<double, 3>& v) {
    double s = 0.0;
    for (int d = 0; d < entry.dim; ++d) s += v[d] * v[d];
    if (s == 0.0) return 0.0;
    return md_estimate(entry, x, v, t);
  };
  // Observed discretization error against the closed form, over the samples.
  double obs = 0.0;
  for (const auto& v : directions) obs = std::max(obs, std::abs(est(v) - entry.md(x, v)));
  rep.tol = 10.0 * std::max(obs, 1e-12);

  const std::vector<double> lambdas = {-1.0, 0.0, 0.5, 1.0, 2.0};
  for (const auto& v : directions) {
    const double mv = est(v);
    for (double l : lambdas) {
      std::array<double, 3> lv{l * v[0], l * v[1], l * v[2]};
      rep.homogeneity_residual =
          std::max(rep.homogeneity_residual, std::abs(est(lv) - std::abs(l) * mv) - rep.tol);
    }
    for (const auto& w : directions) {
      std::array<double, 3> vw{v[0] + w[0], v[1] + w[1], v[2] + w[2]};
      rep.subadditivity_excess =
          std::max(rep.subadditivity_excess, est(vw) - est(v) - est(w) - rep.tol);
    }
  }
  rep.homogeneity_residual = std::max(rep.homogeneity_residual, 0.0);
  rep.subadditivity_excess = std::max(rep.subadditivity_excess, 0.0);
  return rep;
}

std::vector<MapCatalogEntry> default_catalog(int max_dim) {
  std::vector<MapCatalogEntry> cat;
  auto l2dist = [](const std::vector<double>& a, const std::vector<double>& b) {
    return l2(a, b);
  };

  for (int d = 1; d <= max_dim; ++d) {
    {
      MapCatalogEntry e;
      e.name = "identity_d" + std::to_string(d);
      e.dim = d;
      e.linear = true;
      e.declared_lip = 1.0;
      e.u = [d](const std::array<double, 3>& x) {
        return std::vector<double>(x.begin(), x.begin() + d);
      };
      e.target_dist = l2dist;
      e.md = [d](const std::array<double, 3>&, const std::array<double, 3>& v) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += v[i] * v[i];
        return std::sqrt(s);
      };
      cat.push_back(std::move(e));
    }
    {
      MapCatalogEntry e;
      const std::array<double, 3> diag{2.0, 3.0, 0.5};
      e.name = "diag_scale_d" + std::to_string(d);
      e.dim = d;
      e.linear = true;
      e.declared_lip = 3.0;
      e.u = [d, diag](const std::array<double, 3>& x) {
        std::vector<double> out(d);
        for (int i = 0; i < d; ++i) out[i] = diag[i] * x[i];
        return out;
      };
      e.target_dist = l2dist;
      e.md = [d, diag](const std::array<double, 3>&, const std::array<double, 3>& v) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += diag[i] * diag[i] * v[i] * v[i];
        return std::sqrt(s);
      };
      cat.push_back(std::move(e));
    }
  }
  if (max_dim >= 2) {
    MapCatalogEntry e;
    e.name = "shear_2d";
    e.dim = 2;
    e.linear = true;
    e.declared_lip = 1.7;  // spectral norm of [[1,1],[0,1]]
    e.u = [](const std::array<double, 3>& x) {
      return std::vector<double>{x[0] + x[1], x[1]};
    };
    e.target_dist = l2dist;
    e.md = [](const std::array<double, 3>&, const std::array<double, 3>& v) {
      const double a = v[0] + v[1];
      return std::sqrt(a * a + v[1] * v[1]);
    };
    cat.push_back(std::move(e));

    MapCatalogEntry p;
    p.name = "project_to_line_2d";
    p.dim = 2;
    p.linear = true;
    p.declared_lip = 1.0;
    p.u = [](const std::array<double, 3>& x) { return std::vector<double>{x[0]}; };
    p.target_dist = l2dist;
    p.md = [](const std::array<double, 3>&, const std::array<double, 3>& v) {
      return std::abs(v[0]);
    };
    cat.push_back(std::move(p));
  }
  {
    MapCatalogEntry e;
    e.name = "parabola_curve_1d";
    e.dim = 1;
    e.linear = false;
    e.declared_lip = std::sqrt(5.0);  // sup over [0,1] of sqrt(4 x^2 + 1)
    e.u = [](const std::array<double, 3>& x) {
      return std::vector<double>{x[0] * x[0], x[0]};
    };
    e.target_dist = l2dist;
    e.md = [](const std::array<double, 3>& x, const std::array<double, 3>& v) {
      return std::abs(v[0]) * std::sqrt(4.0 * x[0] * x[0] + 1.0);
    };
    cat.push_back(std::move(e));
  }
  {
    MapCatalogEntry e;
    e.name = "circle_arc_1d";
    e.dim = 1;
    e.linear = false;
    e.declared_lip = 1.0;
    e.u = [](const std::array<double, 3>& x) {
      return std::vector<double>{std::cos(x[0]), std::sin(x[0])};
    };
    e.target_dist = l2dist;
    e.md = [](const std::array<double, 3>&, const std::array<double, 3>& v) {
      return std::abs(v[0]);
    };
    cat.push_back(std::move(e));
  }
  if (max_dim >= 2) {
    MapCatalogEntry e;
    e.name = "exp_graph_2d";
    e.dim = 2;
    e.linear = false;
    e.declared_lip = std::sqrt(2.0 + std::exp(2.0));
    e.u = [](const std::array<double, 3>& x) {
      return std::vector<double>{x[0], x[1], std::exp(x[0])};
    };
    e.target_dist = l2dist;
    e.md = [](const std::array<double, 3>& x, const std::array<double, 3>& v) {
      const double g = std::exp(x[0]) * v[0];
      return std::sqrt(v[0] * v[0] + v[1] * v[1] + g * g);
    };
    cat.push_back(std::move(e));
  }
  return cat;
}

}  // namespace msc
