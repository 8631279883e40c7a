#pragma once

// Coherence quantifiers in the computational basis: l1-norm, relative
// entropy (in bits) and robustness of coherence.

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "coherence/sdp.hpp"
#include "coherence/states.hpp"

namespace coherence {

enum class MeasureKind { L1, RelativeEntropy, Roc };

inline constexpr std::array<MeasureKind, 3> kAllMeasures = {
    MeasureKind::L1, MeasureKind::RelativeEntropy, MeasureKind::Roc};

std::string to_string(MeasureKind kind);

enum class MeasureMethod { ClosedFormQubit, PureStateL1, Sdp, Direct };

std::string to_string(MeasureMethod method);

struct MeasureValue {
  double value = 0.0;
  MeasureMethod method = MeasureMethod::Direct;
  /// Primal-dual gap; present iff method == Sdp.
  std::optional<double> certificate_gap;
};

class MeasureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Tie tolerance for ordering comparisons.
inline constexpr double kOrderingTolerance = 1e-7;
/// Second-largest eigenvalue below this marks a state as pure.
inline constexpr double kPureRankTolerance = 1e-9;

MeasureValue l1_coherence(const DensityMatrix& rho);

/// S(dephase(rho)) - S(rho) with base-2 logarithms.
MeasureValue rel_entropy_coherence(const DensityMatrix& rho);

/// Closed form for qubits, l1 for pure states, SDP otherwise. Throws
/// sdp::SdpError if the solver does not certify optimality.
MeasureValue roc(const DensityMatrix& rho, const sdp::SolveOptions& options = {});

MeasureValue measure(MeasureKind kind, const DensityMatrix& rho);

/// C_ROC(rho) - sum_i C_ROC(rho_i) over the single-qubit marginals.
/// Negative means sub-additive. Requires an all-qubit factorization.
double subadditivity_gap(const DensityMatrix& rho);

/// k (1 - 2^-n), a proposed closed form for the ROC of the Sigma family.
/// The SDP value on that family is k; see docs/roc_sdp.md.
double theorem1_closed_form(int n, double k);

/// Whether p is majorized by q (p < q): every descending partial sum of p is
/// at most that of q. Shorter vectors are padded with zeros.
bool majorizes(std::span<const double> p, std::span<const double> q);

/// Whether two measure differences order a pair oppositely. Differences at
/// or below kOrderingTolerance are ties.
bool opposite_order(double m1_a, double m1_b, double m2_a, double m2_b);

bool ordering_violated(const DensityMatrix& a, const DensityMatrix& b, MeasureKind m1,
                       MeasureKind m2);

/// Negative values in [-1e-6, 0) are clamped to zero; below that throws.
double clamp_measure(double value, const char* what);

}  // namespace coherence
