#include "coherence/sdp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>

namespace coherence::sdp {

namespace {

constexpr double kMuInit = 1.0;
constexpr double kMuFactor = 0.2;
// Newton decrement below which a point counts as centered.
constexpr double kCenteringDecrement = 0.05;
constexpr int kMaxBacktracks = 60;

ComplexMatrix slack(const RealVector& x, const ComplexMatrix& rho) {
  ComplexMatrix z = -rho;
  z.diagonal() += x.cast<Complex>();
  return z;
}

bool positive_definite(const ComplexMatrix& z) {
  Eigen::LLT<ComplexMatrix> llt(z);
  return llt.info() == Eigen::Success;
}

std::optional<double> log_det_if_pd(const ComplexMatrix& z) {
  Eigen::LLT<ComplexMatrix> llt(z);
  if (llt.info() != Eigen::Success) return std::nullopt;
  return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

double barrier_value(const RealVector& x, double log_det, double mu) {
  return x.sum() / mu - log_det;
}

double barrier(const RealVector& x, const RealVector& slack_eigenvalues, double mu) {
  return barrier_value(x, slack_eigenvalues.array().log().sum(), mu);
}

// Unit-diagonal rescaling D^{-1/2} Y D^{-1/2}; PSD is preserved.
ComplexMatrix unit_diagonal(const ComplexMatrix& y) {
  const RealVector s = y.diagonal().real().cwiseSqrt().cwiseInverse();
  ComplexMatrix out = s.cast<Complex>().asDiagonal() * y * s.cast<Complex>().asDiagonal();
  out = hermitian_part(out);
  out.diagonal().setOnes();
  return out;
}

double dual_violation(const ComplexMatrix& y) {
  double v = hermiticity_deviation(y);
  for (Eigen::Index i = 0; i < y.rows(); ++i) v = std::max(v, std::abs(y(i, i) - Complex(1.0, 0.0)));
  const double min_eig = hermitian_eigenvalues(hermitian_part(y))(0);
  return std::max(v, -min_eig);
}

struct Iterate {
  RealVector x;
  HermitianEig z_eig;
  ComplexMatrix z_inv;
};

Iterate make_iterate(RealVector x, const ComplexMatrix& rho) {
  Iterate it{std::move(x), {}, {}};
  it.z_eig = hermitian_eig(slack(it.x, rho));
  const RealVector& lam = it.z_eig.eigenvalues;
  const ComplexMatrix& v = it.z_eig.eigenvectors;
  it.z_inv = v * lam.cwiseInverse().cast<Complex>().asDiagonal() * v.adjoint();
  return it;
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

RocSdp build(const DensityMatrix& rho) { return RocSdp{rho, rho.dim()}; }

namespace {

std::atomic<SolveObserver> g_observer{nullptr};

RocSolution solve_impl(const RocSdp& problem, const SolveOptions& options) {
  const ComplexMatrix& rho = problem.rho.matrix();
  const int d = problem.d;

  RocSolution sol;
  // Strictly interior: diag(x0) - rho >= ||rho||_2 * I.
  const double norm = spectral_norm(rho);
  Iterate it = make_iterate(rho.diagonal().real().array() + 2.0 * norm, rho);
  double mu = kMuInit;

  if (options.trace) *options.trace << "mu,primal,dual,gap\n";

  auto record = [&](SolveStatus status) {
    const ComplexMatrix y = unit_diagonal(mu * it.z_inv);
    sol.primal_diag = it.x;
    sol.dual_y = y;
    sol.primal_value = it.x.sum();
    sol.dual_value = (rho * y).trace().real();
    sol.gap = sol.primal_value - sol.dual_value;
    sol.primal_residual = std::max(0.0, -it.z_eig.eigenvalues(0));
    sol.dual_residual = dual_violation(y);
    sol.status = status;
  };

  while (true) {
    // Centering: damped Newton on f(x) = sum(x)/mu - logdet(diag(x) - rho).
    while (true) {
      const RealVector grad = RealVector::Constant(d, 1.0 / mu) - it.z_inv.diagonal().real();
      const RealVector hess_scale = it.z_inv.diagonal().real().cwiseInverse();
      // Hessian H_ij = |(Z^-1)_ij|^2, Jacobi-scaled to unit diagonal.
      Eigen::MatrixXd hess = it.z_inv.cwiseAbs2();
      hess = hess_scale.asDiagonal() * hess * hess_scale.asDiagonal();
      const RealVector rhs = -(hess_scale.asDiagonal() * grad);

      Eigen::LLT<Eigen::MatrixXd> llt(hess);
      RealVector step;
      if (llt.info() == Eigen::Success) {
        step = hess_scale.asDiagonal() * llt.solve(rhs);
      } else {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
        if (ldlt.info() != Eigen::Success) {
          record(SolveStatus::NumericalFailure);
          return sol;
        }
        step = hess_scale.asDiagonal() * ldlt.solve(rhs);
      }
      const double decrement2 = -grad.dot(step);
      if (!std::isfinite(decrement2) || decrement2 < -1e-12) {
        record(SolveStatus::NumericalFailure);
        return sol;
      }
      const double decrement = std::sqrt(std::max(0.0, decrement2));
      if (decrement <= kCenteringDecrement) break;
      if (sol.iterations >= options.max_iter) {
        record(SolveStatus::MaxIter);
        return sol;
      }

      // Full Newton step when it decreases the barrier enough; otherwise the
      // damped step 1/(1 + decrement), which self-concordance keeps interior.
      const double damped = decrement > 0.25 ? 1.0 / (1.0 + decrement) : 1.0;
      double alpha = 1.0;
      RealVector next = it.x + step;
      if (damped < 1.0) {
        const double f0 = barrier(it.x, it.z_eig.eigenvalues, mu);
        const auto trial = log_det_if_pd(slack(next, rho));
        if (!trial || barrier_value(next, *trial, mu) > f0 - 0.25 * decrement2) {
          alpha = damped;
          next = it.x + alpha * step;
        }
      }
      int backtracks = 0;
      while (!positive_definite(slack(next, rho))) {
        if (++backtracks > kMaxBacktracks) {
          record(SolveStatus::NumericalFailure);
          return sol;
        }
        alpha *= 0.5;
        next = it.x + alpha * step;
      }
      Iterate candidate = make_iterate(std::move(next), rho);
      ++sol.iterations;
      if (candidate.z_eig.eigenvalues(0) <= 0.0) {
        record(SolveStatus::NumericalFailure);
        return sol;
      }
      const bool stalled = alpha * step.cwiseAbs().maxCoeff() <=
                           std::numeric_limits<double>::epsilon() * it.x.cwiseAbs().maxCoeff();
      it = std::move(candidate);
      if (stalled) break;
    }

    record(SolveStatus::Optimal);
    if (options.trace) {
      auto& os = *options.trace;
      const auto prec = os.precision(12);
      os << mu << ',' << sol.primal_value << ',' << sol.dual_value << ',' << sol.gap << '\n';
      os.precision(prec);
    }
    if (sol.gap <= options.tol * std::max(1.0, sol.primal_value) && sol.primal_residual <= 1e-10)
      return sol;
    if (sol.iterations >= options.max_iter) {
      sol.status = SolveStatus::MaxIter;
      return sol;
    }
    mu *= kMuFactor;
  }
}

}  // namespace

void set_solve_observer(SolveObserver observer) { g_observer.store(observer); }

RocSolution solve(const RocSdp& problem, const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve: tolerance must be positive");
  RocSolution sol = solve_impl(problem, options);
  if (SolveObserver observer = g_observer.load()) observer(problem, sol);
  return sol;
}

CertificateReport verify_certificates(const RocSolution& sol, const DensityMatrix& rho) {
  CertificateReport report;
  const ComplexMatrix& r = rho.matrix();
  if (sol.primal_diag.size() != r.rows() || sol.dual_y.rows() != r.rows() ||
      sol.dual_y.cols() != r.cols())
    throw DimensionError("verify_certificates: solution does not match the state dimension");

  const double primal_min = hermitian_eigenvalues(slack(sol.primal_diag, r))(0);
  report.primal_feasibility_violation = std::max(0.0, -primal_min);
  report.dual_feasibility_violation = std::max(0.0, dual_violation(sol.dual_y));
  report.gap = sol.primal_diag.sum() - (r * sol.dual_y).trace().real();
  return report;
}

}  // namespace coherence::sdp
