#include "msc/linalg.hpp"

#include <algorithm>

namespace msc {

std::vector<int> rref(Mat& m, double tol) {
  std::vector<int> pivots;
  int lead = 0;
  for (int col = 0; col < m.cols && lead < m.rows; ++col) {
    int piv = lead;
    for (int r = lead + 1; r < m.rows; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) <= tol) continue;
    if (piv != lead)
      for (int c = 0; c < m.cols; ++c) std::swap(m(piv, c), m(lead, c));
    const double d = m(lead, col);
    for (int c = 0; c < m.cols; ++c) m(lead, c) /= d;
    for (int r = 0; r < m.rows; ++r) {
      if (r == lead) continue;
      const double f = m(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < m.cols; ++c) m(r, c) -= f * m(lead, c);
    }
    pivots.push_back(col);
    ++lead;
  }
  return pivots;
}

int rank(Mat m, double tol) { return static_cast<int>(rref(m, tol).size()); }

std::vector<std::vector<double>> kernel_basis(const Mat& m, double tol) {
  Mat r = m;
  std::vector<int> pivots = rref(r, tol);
  std::vector<char> is_pivot(m.cols, 0);
  for (int p : pivots) is_pivot[p] = 1;
  std::vector<std::vector<double>> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<double> v(m.cols, 0.0);
    v[free] = 1.0;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(static_cast<int>(i), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<double>> solve(const Mat& A, const std::vector<double>& b, double tol) {
  Mat aug(A.rows, A.cols + 1);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) aug(i, j) = A(i, j);
    aug(i, A.cols) = b[i];
  }
  std::vector<int> pivots = rref(aug, tol);
  for (int p : pivots)
    if (p == A.cols) return std::nullopt;  // inconsistent
  std::vector<double> x(A.cols, 0.0);
  for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(static_cast<int>(i), A.cols);
  return x;
}

std::optional<Mat> fit_through_generators(const Mat& W, const Mat& L, double tol) {
  // Normal equations: X = W L^T (L L^T)^{-1}.
  const Mat Lt = L.transposed();
  const Mat G = L * Lt;  // k x k Gram
  Mat aug(G.rows, 2 * G.cols);
  for (int i = 0; i < G.rows; ++i) {
    for (int j = 0; j < G.cols; ++j) aug(i, j) = G(i, j);
    aug(i, G.cols + i) = 1.0;
  }
  std::vector<int> pivots = rref(aug, tol);
  if (static_cast<int>(pivots.size()) < G.rows) return std::nullopt;
  Mat Ginv(G.rows, G.cols);
  for (int i = 0; i < G.rows; ++i)
    for (int j = 0; j < G.cols; ++j) Ginv(i, j) = aug(i, G.cols + j);
  return (W * Lt) * Ginv;
}

double spectral_norm(const Mat& A) {
  if (A.rows == 0 || A.cols == 0) return 0.0;
  const Mat At = A.transposed();
  std::vector<double> v(A.cols, 1.0 / std::sqrt(static_cast<double>(A.cols)));
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    std::vector<double> w = At.apply(A.apply(v));
    double n = 0.0;
    for (double x : w) n += x * x;
    n = std::sqrt(n);
    if (n == 0.0) return 0.0;
    for (double& x : w) x /= n;
    const double prev = lambda;
    lambda = n;
    v = std::move(w);
    if (it > 5 && std::abs(lambda - prev) <= 1e-15 * std::max(1.0, lambda)) break;
  }
  return std::sqrt(lambda);
}

}  // namespace msc
