#include "coherence/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

namespace coherence {

namespace {

constexpr double kEntropyCutoff = 1e-12;
constexpr double kClampSilent = 1e-9;
constexpr double kClampHard = 1e-6;

double entropy_bits(const RealVector& spectrum) {
  double s = 0.0;
  for (double lam : spectrum)
    if (lam > kEntropyCutoff) s -= lam * std::log2(lam);
  return s;
}

double offdiag_l1(const ComplexMatrix& m) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) acc += std::abs(m(i, j));
  return acc;
}

std::vector<double> sorted_padded(std::span<const double> v, std::size_t n) {
  std::vector<double> out(v.begin(), v.end());
  out.resize(n, 0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

void check_probability_vector(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) throw MeasureError("majorizes: negative or non-finite entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw MeasureError("majorizes: entries do not sum to 1");
}

}  // namespace

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::L1: return "L1";
    case MeasureKind::RelativeEntropy: return "RelativeEntropy";
    case MeasureKind::Roc: return "ROC";
  }
  return "Unknown";
}

std::string to_string(MeasureMethod method) {
  switch (method) {
    case MeasureMethod::ClosedFormQubit: return "ClosedFormQubit";
    case MeasureMethod::PureStateL1: return "PureStateL1";
    case MeasureMethod::Sdp: return "SDP";
    case MeasureMethod::Direct: return "Direct";
  }
  return "Unknown";
}

double clamp_measure(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value < -kClampHard) {
    std::ostringstream os;
    os << what << " evaluated to " << value << ", below the clamping floor " << -kClampHard;
    throw MeasureError(os.str());
  }
  if (value < -kClampSilent) std::clog << "warning: clamped " << what << " = " << value << " to 0\n";
  return 0.0;
}

MeasureValue l1_coherence(const DensityMatrix& rho) {
  return {offdiag_l1(rho.matrix()), MeasureMethod::Direct, std::nullopt};
}

MeasureValue rel_entropy_coherence(const DensityMatrix& rho) {
  const RealVector diag = rho.matrix().diagonal().real();
  const double value = entropy_bits(diag) - entropy_bits(hermitian_eigenvalues(rho.matrix()));
  return {clamp_measure(value, "relative entropy of coherence"), MeasureMethod::Direct,
          std::nullopt};
}

MeasureValue roc(const DensityMatrix& rho, const sdp::SolveOptions& options) {
  const ComplexMatrix& m = rho.matrix();
  if (rho.dim() == 1) return {0.0, MeasureMethod::Direct, std::nullopt};
  if (rho.dim() == 2) return {2.0 * std::abs(m(0, 1)), MeasureMethod::ClosedFormQubit, std::nullopt};

  const RealVector spectrum = hermitian_eigenvalues(m);
  if (spectrum(spectrum.size() - 2) < kPureRankTolerance)
    return {offdiag_l1(m), MeasureMethod::PureStateL1, std::nullopt};

  sdp::RocSolution sol = sdp::solve(sdp::build(rho), options);
  if (sol.status != sdp::SolveStatus::Optimal) {
    std::ostringstream os;
    os << "ROC solve ended with status " << sdp::to_string(sol.status) << " after "
       << sol.iterations << " Newton steps (gap " << sol.gap << ")";
    throw sdp::SdpError(os.str(), std::move(sol));
  }
  return {clamp_measure(sol.roc(), "robustness of coherence"), MeasureMethod::Sdp,
          std::max(0.0, sol.gap)};
}

MeasureValue measure(MeasureKind kind, const DensityMatrix& rho) {
  switch (kind) {
    case MeasureKind::L1: return l1_coherence(rho);
    case MeasureKind::RelativeEntropy: return rel_entropy_coherence(rho);
    case MeasureKind::Roc: return roc(rho);
  }
  throw MeasureError("unknown measure kind");
}

double subadditivity_gap(const DensityMatrix& rho) {
  const auto& dims = rho.dims();
  if (dims.empty() || std::any_of(dims.begin(), dims.end(), [](int d) { return d != 2; }))
    throw MeasureError("subadditivity_gap: state must be factored into qubits");
  double marginals = 0.0;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i) marginals += roc(rho.reduced(i)).value;
  return roc(rho).value - marginals;
}

double theorem1_closed_form(int n, double k) {
  SigmaFamilyParams{n, k}.validate();
  return k * (1.0 - std::ldexp(1.0, -n));
}

bool majorizes(std::span<const double> p, std::span<const double> q) {
  check_probability_vector(p);
  check_probability_vector(q);
  const std::size_t n = std::max(p.size(), q.size());
  const auto ps = sorted_padded(p, n);
  const auto qs = sorted_padded(q, n);
  double sum_p = 0.0, sum_q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_p += ps[i];
    sum_q += qs[i];
    if (sum_p > sum_q + 1e-12) return false;
  }
  return true;
}

bool opposite_order(double m1_a, double m1_b, double m2_a, double m2_b) {
  const double d1 = m1_a - m1_b;
  const double d2 = m2_a - m2_b;
  if (std::abs(d1) <= kOrderingTolerance || std::abs(d2) <= kOrderingTolerance) return false;
  return d1 * d2 < -kOrderingTolerance * kOrderingTolerance;
}

bool ordering_violated(const DensityMatrix& a, const DensityMatrix& b, MeasureKind m1,
                       MeasureKind m2) {
  if (a.dim() != b.dim()) throw MeasureError("ordering_violated: dimension mismatch");
  return opposite_order(measure(m1, a).value, measure(m1, b).value, measure(m2, a).value,
                        measure(m2, b).value);
}

}  // namespace coherence
