#pragma once

// Quantum states used by the coherence measures and experiments: validated
// density matrices, pure states, the Sigma family and random ensembles.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "coherence/linalg.hpp"

namespace coherence {

class StateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Minimum eigenvalue accepted for a density matrix.
inline constexpr double kPsdTolerance = 1e-9;
inline constexpr double kTraceTolerance = 1e-10;

using Rng = std::mt19937_64;

/// Independent stream for one Monte-Carlo sample. The stream depends only on
/// its coordinates, so samples can be evaluated in any order.
Rng derive_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

class PureState {
public:
  /// Requires unit norm within 1e-12.
  explicit PureState(ComplexVector amplitudes);
  /// Rescales to unit norm; throws on the zero vector.
  static PureState normalized(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }
  ComplexMatrix projector() const { return outer(amplitudes_); }

private:
  ComplexVector amplitudes_;
};

/// Hermitian, PSD, unit-trace matrix. `dims` lists the subsystem dimensions;
/// an empty list means the system is not factored.
class DensityMatrix {
public:
  /// Validates and symmetrizes. Throws StateError when any invariant fails.
  explicit DensityMatrix(const ComplexMatrix& mat, std::vector<int> dims = {});
  DensityMatrix(const PureState& psi, std::vector<int> dims = {});

  const ComplexMatrix& matrix() const { return mat_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

  /// Reduced state on subsystem `keep` of dims().
  DensityMatrix reduced(int keep) const;

private:
  ComplexMatrix mat_;
  std::vector<int> dims_;
};

struct SigmaFamilyParams {
  int n = 1;
  double k = 0.0;

  /// Upper end of the admissible k range, 1/(2^n - 1).
  static double k_max(int n);
  void validate() const;
};

PureState maximally_coherent(int d);

/// (|00> + |11>)/sqrt(2).
PureState maximally_entangled_two_qubit();

/// (1+k) I/2^n - k |psi><psi| with |psi> maximally coherent on n qubits.
DensityMatrix sigma_family(const SigmaFamilyParams& params);

/// Closed-form single-qubit marginal of sigma_family: [[1/2, -k/2], [-k/2, 1/2]].
DensityMatrix reduced_qubit_of_sigma(const SigmaFamilyParams& params);

/// (1-p) sigma + p |phi><phi|. Keeps the subsystem structure of `sigma`.
DensityMatrix mix_with_pure(const DensityMatrix& sigma, const PureState& phi, double p);

/// Normalized vector of independent standard complex Gaussians.
PureState haar_random_pure(int d, Rng& rng);

/// G G^dagger / Tr(G G^dagger) for a d x rank complex Ginibre matrix G.
DensityMatrix random_density(int d, int rank, Rng& rng);

/// Diagonal part in the computational basis.
DensityMatrix dephase(const DensityMatrix& rho);

/// Random probability vector drawn uniformly from the simplex.
RealVector random_probability_vector(int d, Rng& rng);

void to_json(nlohmann::json& j, const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

}  // namespace coherence
