#include "coherence/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace coherence {

namespace {

std::string hermitian_message(double deviation, double scale) {
  std::ostringstream os;
  os << "matrix is not Hermitian: ||h - h^dagger||_F = " << deviation
     << " exceeds " << kHermitianTolerance << " * " << scale;
  return os.str();
}

std::string convergence_message(int dimension, int max_sweeps) {
  std::ostringstream os;
  os << "Hermitian eigensolver did not converge for a " << dimension << "x" << dimension
     << " matrix within " << max_sweeps << " QR iterations";
  return os.str();
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

ComplexMatrix checked_hermitian(const ComplexMatrix& h) {
  require_square(h, "hermitian_eig");
  if (!all_finite(h)) throw LinalgError("hermitian_eig: non-finite entry");
  const double scale = std::max(1.0, frobenius_norm(h));
  const double dev = hermiticity_deviation(h);
  if (dev > kHermitianTolerance * scale) throw NotHermitianError(dev, scale);
  return hermitian_part(h);
}

}  // namespace

NotHermitianError::NotHermitianError(double deviation, double scale)
    : LinalgError(hermitian_message(deviation, scale)), deviation_(deviation) {}

ConvergenceError::ConvergenceError(int dimension, int max_sweeps)
    : LinalgError(convergence_message(dimension, max_sweeps)), max_sweeps_(max_sweeps) {}

ComplexMatrix HermitianEig::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims, int keep) {
  require_square(m, "partial_trace");
  if (dims.empty()) throw DimensionError("partial_trace: empty dimension list");
  if (keep < 0 || keep >= static_cast<int>(dims.size()))
    throw DimensionError("partial_trace: subsystem index out of range");
  if (std::any_of(dims.begin(), dims.end(), [](int d) { return d < 1; }))
    throw DimensionError("partial_trace: subsystem dimensions must be positive");
  const long total = std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
  if (total != m.rows()) {
    std::ostringstream os;
    os << "partial_trace: subsystem dimensions multiply to " << total << " but matrix is "
       << m.rows() << "x" << m.rows();
    throw DimensionError(os.str());
  }

  const long left = std::accumulate(dims.begin(), dims.begin() + keep, 1L, std::multiplies<>());
  const long mid = dims[keep];
  const long right = total / (left * mid);

  ComplexMatrix out = ComplexMatrix::Zero(mid, mid);
  for (long a = 0; a < mid; ++a)
    for (long b = 0; b < mid; ++b) {
      Complex acc = 0.0;
      for (long l = 0; l < left; ++l)
        for (long r = 0; r < right; ++r)
          acc += m((l * mid + a) * right + r, (l * mid + b) * right + r);
      out(a, b) = acc;
    }
  return out;
}

HermitianEig hermitian_eig(const ComplexMatrix& h) {
  const ComplexMatrix sym = checked_hermitian(h);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError(static_cast<int>(sym.rows()),
                           Eigen::SelfAdjointEigenSolver<ComplexMatrix>::m_maxIterations *
                               static_cast<int>(sym.rows()));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
  const ComplexMatrix sym = checked_hermitian(h);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError(static_cast<int>(sym.rows()),
                           Eigen::SelfAdjointEigenSolver<ComplexMatrix>::m_maxIterations *
                               static_cast<int>(sym.rows()));
  return solver.eigenvalues();
}

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

double hermiticity_deviation(const ComplexMatrix& h) { return (h - h.adjoint()).norm(); }

bool is_hermitian(const ComplexMatrix& h, double rel_tol) {
  if (h.rows() != h.cols()) return false;
  return hermiticity_deviation(h) <= rel_tol * std::max(1.0, frobenius_norm(h));
}

ComplexMatrix hermitian_part(const ComplexMatrix& h) { return 0.5 * (h + h.adjoint()); }

bool all_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m)) return hermitian_eigenvalues(m).cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

}  // namespace coherence
