#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "coherence/measures.hpp"
#include "coherence/sdp.hpp"
#include "oracles.hpp"

namespace coherence::sdp {
namespace {

void expect_invariants(const RocSolution& sol, const DensityMatrix& rho) {
  ASSERT_EQ(sol.status, SolveStatus::Optimal);
  EXPECT_LE(sol.gap, 1e-7 * std::max(1.0, sol.primal_value));
  EXPECT_GE(sol.gap, -1e-8);
  EXPECT_LE(sol.primal_residual, 1e-8);
  EXPECT_LE(sol.dual_residual, 1e-8);
  EXPECT_LT(hermiticity_deviation(sol.dual_y), 1e-12);
  for (Eigen::Index i = 0; i < sol.dual_y.rows(); ++i)
    EXPECT_NEAR(sol.dual_y(i, i).real(), 1.0, 1e-10);
  const CertificateReport report = verify_certificates(sol, rho);
  EXPECT_NEAR(report.primal_feasibility_violation, sol.primal_residual, 1e-10);
  EXPECT_NEAR(report.dual_feasibility_violation, sol.dual_residual, 1e-10);
  EXPECT_NEAR(report.gap, sol.gap, 1e-10);
}

DensityMatrix qubit(double rho00, Complex rho01) {
  ComplexMatrix m(2, 2);
  m << rho00, rho01, std::conj(rho01), 1.0 - rho00;
  return DensityMatrix(m);
}

TEST(Build, CarriesState) {
  const DensityMatrix rho = sigma_family({2, 0.1});
  const RocSdp p = build(rho);
  EXPECT_EQ(p.d, 4);
  EXPECT_EQ(p.rho.matrix(), rho.matrix());
}

TEST(Solve, QubitExample) {
  const DensityMatrix rho = qubit(0.5, 0.3);
  const RocSolution sol = solve(build(rho));
  expect_invariants(sol, rho);
  EXPECT_NEAR(sol.primal_diag(0), 0.8, 1e-6);
  EXPECT_NEAR(sol.primal_diag(1), 0.8, 1e-6);
  EXPECT_NEAR(sol.primal_value, 1.6, 1e-7);
  EXPECT_NEAR(sol.roc(), 0.6, 1e-7);
}

TEST(Solve, DiagonalState) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m.diagonal() << 0.2, 0.3, 0.5;
  const DensityMatrix rho(m);
  const RocSolution sol = solve(build(rho));
  expect_invariants(sol, rho);
  EXPECT_NEAR(sol.roc(), 0.0, 1e-7);
  EXPECT_LT((sol.primal_diag - m.diagonal().real()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Solve, MaximallyMixedHasIdentityDual) {
  for (int d = 2; d <= 6; ++d) {
    const DensityMatrix rho(ComplexMatrix::Identity(d, d) / double(d));
    const RocSolution sol = solve(build(rho));
    expect_invariants(sol, rho);
    EXPECT_NEAR(sol.roc(), 0.0, 1e-7);
    EXPECT_LT((sol.dual_y - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-3);
  }
}

TEST(Solve, MaximallyCoherentQubit) {
  const DensityMatrix rho(maximally_coherent(2));
  const RocSolution sol = solve(build(rho));
  expect_invariants(sol, rho);
  EXPECT_NEAR(sol.dual_value, 2.0, 1e-7);
  EXPECT_LT((sol.dual_y - ComplexMatrix::Ones(2, 2)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Solve, SigmaFamilyMatchesAnalyticCertificate) {
  for (int n = 1; n <= 4; ++n)
    for (double frac : {0.0, 0.25, 0.75, 1.0}) {
      const double k = frac * SigmaFamilyParams::k_max(n);
      const DensityMatrix rho = sigma_family({n, k});
      const RocSolution sol = solve(build(rho));
      expect_invariants(sol, rho);
      const oracle::SigmaCertificate cert = oracle::sigma_certificate(n, k);
      // The analytic points are feasible and attain the same value.
      const ComplexMatrix slack = ComplexMatrix(cert.primal.cast<Complex>().asDiagonal()) - rho.matrix();
      EXPECT_GE(hermitian_eigenvalues(slack)(0), -1e-12);
      EXPECT_GE(hermitian_eigenvalues(cert.dual)(0), -1e-12);
      EXPECT_NEAR((rho.matrix() * cert.dual).trace().real(), cert.value, 1e-12);
      EXPECT_NEAR(sol.primal_value, cert.value, 1e-7) << "n=" << n << " k=" << k;
      EXPECT_NEAR(sol.roc(), k, 1e-6);
    }
}

TEST(Solve, SigmaFamilyQuarterExample) {
  const DensityMatrix rho = sigma_family({2, 0.25});
  const RocSolution sol = solve(build(rho));
  expect_invariants(sol, rho);
  EXPECT_NEAR(sol.primal_value - 1.0, 0.25, 1e-7);
}

TEST(Solve, RandomStatesCertify) {
  Rng rng(51);
  for (int t = 0; t < 50; ++t) {
    const int d = 3 + t % 8;
    const DensityMatrix rho = random_density(d, 1 + (t / 8) % d, rng);
    const RocSolution sol = solve(build(rho));
    expect_invariants(sol, rho);
  }
}

TEST(Solve, QubitsMatchClosedForm) {
  Rng rng(52);
  for (int t = 0; t < 200; ++t) {
    const DensityMatrix rho = random_density(2, 1 + t % 2, rng);
    const RocSolution sol = solve(build(rho));
    ASSERT_EQ(sol.status, SolveStatus::Optimal);
    EXPECT_NEAR(sol.roc(), 2.0 * std::abs(rho.matrix()(0, 1)), 1e-7);
  }
}

TEST(Solve, PureStatesMatchL1) {
  Rng rng(53);
  for (int d = 2; d <= 8; ++d)
    for (int t = 0; t < 10; ++t) {
      const PureState psi = haar_random_pure(d, rng);
      const RocSolution sol = solve(build(DensityMatrix(psi)));
      ASSERT_EQ(sol.status, SolveStatus::Optimal);
      EXPECT_NEAR(sol.roc(), oracle::pure_l1(psi.amplitudes()), 1e-6);
    }
}

TEST(Solve, PermutationInvariance) {
  Rng rng(54);
  for (int t = 0; t < 20; ++t) {
    const int d = 3 + t % 5;
    const DensityMatrix rho = random_density(d, d, rng);
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) p(perm[i], i) = 1.0;
    const DensityMatrix permuted(p * rho.matrix() * p.adjoint());
    EXPECT_NEAR(solve(build(rho)).roc(), solve(build(permuted)).roc(), 1e-8);
  }
}

TEST(Solve, WeakDualityOnEveryIterate) {
  Rng rng(55);
  const DensityMatrix rho = random_density(6, 3, rng);
  std::ostringstream trace;
  SolveOptions opts;
  opts.trace = &trace;
  const RocSolution sol = solve(build(rho), opts);
  ASSERT_EQ(sol.status, SolveStatus::Optimal);
  std::istringstream in(trace.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "mu,primal,dual,gap");
  int rows = 0;
  while (std::getline(in, line)) {
    double mu, primal, dual, gap;
    char c;
    std::istringstream row(line);
    ASSERT_TRUE(row >> mu >> c >> primal >> c >> dual >> c >> gap) << line;
    EXPECT_LE(dual, primal + 1e-9);
    ++rows;
  }
  EXPECT_GT(rows, 1);
}

TEST(Solve, MaxIterKeepsBestIterate) {
  Rng rng(56);
  const DensityMatrix rho = random_density(6, 6, rng);
  SolveOptions opts;
  opts.max_iter = 3;
  const RocSolution sol = solve(build(rho), opts);
  EXPECT_EQ(sol.status, SolveStatus::MaxIter);
  EXPECT_LE(sol.iterations, 3);
  EXPECT_EQ(sol.primal_diag.size(), 6);
  EXPECT_LE(sol.dual_value, sol.primal_value + 1e-9);
  EXPECT_LE(sol.primal_residual, 1e-8);
  EXPECT_THROW(roc(rho, opts), SdpError);
}

TEST(Solve, RejectsNonPositiveTolerance) {
  SolveOptions opts;
  opts.tol = 0.0;
  EXPECT_THROW(solve(build(sigma_family({1, 0.2})), opts), std::invalid_argument);
}

TEST(VerifyCertificates, DetectsCorruptedDual) {
  Rng rng(57);
  const DensityMatrix rho = random_density(4, 4, rng);
  RocSolution sol = solve(build(rho));
  sol.dual_y(1, 1) = 1.1;
  EXPECT_GT(verify_certificates(sol, rho).dual_feasibility_violation, 0.09);
}

TEST(VerifyCertificates, ExactQubitOptimum) {
  const double c = 0.3;
  const DensityMatrix rho = qubit(0.5, c);
  RocSolution sol;
  sol.primal_diag = RealVector::Constant(2, 0.5 + c);
  sol.dual_y = ComplexMatrix::Ones(2, 2);
  sol.primal_value = 1.0 + 2.0 * c;
  sol.dual_value = 1.0 + 2.0 * c;
  const CertificateReport r = verify_certificates(sol, rho);
  EXPECT_LE(r.primal_feasibility_violation, 1e-12);
  EXPECT_LE(r.dual_feasibility_violation, 1e-12);
  EXPECT_LE(std::abs(r.gap), 1e-12);
}

TEST(VerifyCertificates, DetectsInfeasiblePrimal) {
  const DensityMatrix rho = qubit(0.5, 0.3);
  RocSolution sol;
  sol.primal_diag = RealVector::Constant(2, 0.5);
  sol.dual_y = ComplexMatrix::Identity(2, 2);
  EXPECT_NEAR(verify_certificates(sol, rho).primal_feasibility_violation, 0.3, 1e-12);
}

TEST(SolveStatus, Names) {
  EXPECT_EQ(to_string(SolveStatus::Optimal), "Optimal");
  EXPECT_EQ(to_string(SolveStatus::MaxIter), "MaxIter");
  EXPECT_EQ(to_string(SolveStatus::NumericalFailure), "NumericalFailure");
}

}  // namespace
}  // namespace coherence::sdp
