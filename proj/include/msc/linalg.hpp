#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace msc {

/// Dense row-major matrix for fiber-sized problems (dimensions are tiny:
/// bounded by neighbor counts, so no external linear algebra is pulled in).
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  Mat operator*(const Mat& o) const {
    Mat r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        const double v = (*this)(i, k);
        if (v == 0.0) continue;
        for (int j = 0; j < o.cols; ++j) r(i, j) += v * o(k, j);
      }
    return r;
  }

  Mat transposed() const {
    Mat t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<double> apply(const std::vector<double>& v) const {
    std::vector<double> out(rows, 0.0);
    for (int i = 0; i < rows; ++i) {
      double s = 0.0;
      for (int j = 0; j < cols; ++j) s += (*this)(i, j) * v[j];
      out[i] = s;
    }
    return out;
  }

  double max_abs_diff(const Mat& o) const {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
    return m;
  }
};

/// Row-reduce in place; returns pivot column indices. `tol` is the rank cut.
std::vector<int> rref(Mat& m, double tol);

int rank(Mat m, double tol);

/// Basis of the null space, one vector per free column.
std::vector<std::vector<double>> kernel_basis(const Mat& m, double tol);

/// Solve A x = b if consistent, else nullopt (any solution; A may be rectangular).
std::optional<std::vector<double>> solve(const Mat& A, const std::vector<double>& b, double tol);

/// Least-squares fit of X in X * L = W for L with full row rank.
/// Returns nullopt when L L^T is singular at `tol`.
std::optional<Mat> fit_through_generators(const Mat& W, const Mat& L, double tol);

/// Largest singular value via power iteration on A^T A (deterministic start).
double spectral_norm(const Mat& A);

}  // namespace msc
