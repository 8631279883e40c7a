#pragma once

// Semidefinite program for the robustness of coherence (ROC).
//
// A state rho has ROC s when rho + s*tau = (1+s)*delta for some state tau and
// some diagonal state delta. Writing D = (1+s)*delta eliminates tau:
// s*tau = D - rho must be PSD and Tr(D) = 1 + s. Hence
//
//   primal:  minimize  sum_i d_i        subject to  diag(d) - rho >= 0
//   dual:    maximize  Tr(rho Y)        subject to  Y >= 0, Y_ii = 1
//
// and C_ROC(rho) = optimum - 1. Weak duality is Tr((diag(d) - rho) Y) >= 0.
// See docs/roc_sdp.md for the full derivation.
//
// The solver follows the central path of the primal log-det barrier
//   sum_i d_i - mu * logdet(diag(d) - rho)
// with damped Newton steps. At every centered point Y = mu*(diag(d) - rho)^-1
// is rescaled to unit diagonal, which makes it exactly dual feasible, so each
// outer iteration yields a certified sandwich dual_value <= OPT <= primal_value.

#include <ostream>
#include <stdexcept>
#include <string>

#include "coherence/linalg.hpp"
#include "coherence/states.hpp"

namespace coherence::sdp {

struct RocSdp {
  DensityMatrix rho;
  int d;
};

enum class SolveStatus { Optimal, MaxIter, NumericalFailure };

std::string to_string(SolveStatus status);

struct SolveOptions {
  /// Relative duality-gap tolerance: gap <= tol * max(1, primal_value).
  double tol = 1e-8;
  /// Cap on the total number of Newton steps.
  int max_iter = 200;
  /// When set, one CSV line per outer iteration: mu,primal,dual,gap.
  std::ostream* trace = nullptr;
};

struct RocSolution {
  RealVector primal_diag;
  ComplexMatrix dual_y;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::NumericalFailure;
  /// max(0, -lambda_min(diag(primal_diag) - rho)).
  double primal_residual = 0.0;
  /// max(max_i |Y_ii - 1|, -lambda_min(Y), 0).
  double dual_residual = 0.0;

  /// Certified lower bound on C_ROC.
  double roc() const { return dual_value - 1.0; }
};

class SdpError : public std::runtime_error {
public:
  SdpError(const std::string& what, RocSolution best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const RocSolution& best() const { return best_; }

private:
  RocSolution best_;
};

RocSdp build(const DensityMatrix& rho);

/// Never throws for numerical trouble; inspect `status`.
RocSolution solve(const RocSdp& problem, const SolveOptions& options = {});

/// Called after every solve, from the solving thread. Null disables.
using SolveObserver = void (*)(const RocSdp&, const RocSolution&);
void set_solve_observer(SolveObserver observer);

struct CertificateReport {
  double primal_feasibility_violation = 0.0;
  double dual_feasibility_violation = 0.0;
  double gap = 0.0;
};

/// Recomputes all residuals of `sol` from scratch for the state `rho`.
CertificateReport verify_certificates(const RocSolution& sol, const DensityMatrix& rho);

}  // namespace coherence::sdp
