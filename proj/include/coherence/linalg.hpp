#pragma once

// Dense complex linear algebra on small square matrices (d <= 64).

#include <complex>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace coherence {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative Frobenius tolerance under which a matrix counts as Hermitian.
inline constexpr double kHermitianTolerance = 1e-10;

class LinalgError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public LinalgError {
public:
  using LinalgError::LinalgError;
};

class NotHermitianError : public LinalgError {
public:
  NotHermitianError(double deviation, double scale);
  double deviation() const { return deviation_; }

private:
  double deviation_;
};

class ConvergenceError : public LinalgError {
public:
  ConvergenceError(int dimension, int max_sweeps);
  int max_sweeps() const { return max_sweeps_; }

private:
  int max_sweeps_;
};

/// Spectral decomposition of a Hermitian matrix. Eigenvalues ascend; the
/// columns of `eigenvectors` are the matching orthonormal eigenvectors.
struct HermitianEig {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced matrix on subsystem `keep` of a system factored as `dims`.
/// Throws DimensionError when the product of `dims` differs from the size of
/// `m` or `keep` is out of range.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims, int keep);

/// Symmetrizes within kHermitianTolerance, then decomposes.
HermitianEig hermitian_eig(const ComplexMatrix& h);

/// Eigenvalues only (ascending), same preconditions as hermitian_eig.
RealVector hermitian_eigenvalues(const ComplexMatrix& h);

double frobenius_norm(const ComplexMatrix& m);

/// ||h - h^dagger||_F.
double hermiticity_deviation(const ComplexMatrix& h);
bool is_hermitian(const ComplexMatrix& h, double rel_tol = kHermitianTolerance);

/// (h + h^dagger) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& h);

bool all_finite(const ComplexMatrix& m);

/// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

/// |v><v|.
ComplexMatrix outer(const ComplexVector& v);

}  // namespace coherence
