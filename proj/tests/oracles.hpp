#pragma once

// Test-only reference computations. Nothing here calls into the solver or
// the measures under test; each oracle is a separate route to the same value.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Entry-by-entry Kronecker product from the index formula.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  const long ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Matrix out(ra * rb, ca * cb);
  for (long i = 0; i < ra; ++i)
    for (long j = 0; j < ca; ++j)
      for (long k = 0; k < rb; ++k)
        for (long l = 0; l < cb; ++l) out(i * rb + k, j * cb + l) = a(i, j) * b(k, l);
  return out;
}

/// Reduced matrix on the first factor of a (da x db) bipartite matrix, as
/// sum_k (I (x) <k|) m (I (x) |k>).
inline Matrix trace_out_second(const Matrix& m, long da, long db) {
  Matrix out = Matrix::Zero(da, da);
  for (long k = 0; k < db; ++k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(db);
    e(k) = 1.0;
    const Matrix proj = kron(Matrix::Identity(da, da), e);  // (da*db) x da
    out += proj.adjoint() * m * proj;
  }
  return out;
}

/// Qubit ROC by brute force over the primal: minimize d0 + d1 subject to
/// diag(d) - rho >= 0 on a fine grid around the analytic region.
inline double qubit_primal_bruteforce(double rho00, double abs_rho01, double* d0_out = nullptr,
                                      double* d1_out = nullptr) {
  // For fixed d0 > rho00 the cheapest feasible d1 is rho11 + |rho01|^2/(d0 - rho00).
  const double rho11 = 1.0 - rho00;
  double best = 1e300, best_d0 = 0.0;
  const int steps = 2000000;
  for (int s = 1; s <= steps; ++s) {
    const double slack0 = 2.0 * s / steps;
    const double total = rho00 + slack0 + rho11 + abs_rho01 * abs_rho01 / slack0;
    if (total < best) {
      best = total;
      best_d0 = rho00 + slack0;
    }
  }
  if (d0_out) *d0_out = best_d0;
  if (d1_out) *d1_out = best - best_d0;
  return best;
}

/// Majorization by explicit enumeration of all index subsets: p < q iff for
/// every k the k largest entries of p sum to at most the k largest of q.
inline bool majorized_by_subsets(std::vector<double> p, std::vector<double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  p.resize(n, 0.0);
  q.resize(n, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    double best_p = 0.0, best_q = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
      double sp = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          sp += p[i];
          sq += q[i];
        }
      best_p = std::max(best_p, sp);
      best_q = std::max(best_q, sq);
    }
    if (best_p > best_q + 1e-12) return false;
  }
  return true;
}

/// Analytic certificate for the Sigma family on N = 2^n levels: the primal
/// point d_i = (1+k)/N and the dual point Y = N/(N-1) (I - J/N) both attain
/// 1 + k, so its ROC is exactly k.
struct SigmaCertificate {
  Eigen::VectorXd primal;
  Matrix dual;
  double value;
};

inline SigmaCertificate sigma_certificate(int n, double k) {
  const int N = 1 << n;
  SigmaCertificate c;
  c.primal = Eigen::VectorXd::Constant(N, (1.0 + k) / N);
  c.dual = Matrix::Constant(N, N, Complex(-1.0 / (N - 1), 0.0));
  c.dual.diagonal().setOnes();
  c.value = 1.0 + k;
  return c;
}

/// l1 coherence of a pure state: (sum_i |psi_i|)^2 - 1.
inline double pure_l1(const Eigen::VectorXcd& psi) {
  const double s = psi.cwiseAbs().sum();
  return s * s - 1.0;
}

}  // namespace oracle
