#pragma once

// Monte-Carlo harnesses: the sub-additivity mixing sweep, measure-ordering
// violation sweeps over dimension and rank, the Sigma-family closed-form
// check and the incoherent-ancilla check.
//
// Every sample draws from its own stream derive_rng(seed, point, sample,
// attempt), so results do not depend on the thread schedule.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "coherence/measures.hpp"
#include "coherence/sdp.hpp"

namespace coherence {

enum class Experiment {
  SubadditivitySweep,
  OrderingVsDimension,
  OrderingVsRank,
  Theorem1Check,
  Result2Check,
};

std::string to_string(Experiment e);

enum class PureStateChoice { MaximallyCoherent, MaximallyEntangled };

std::string to_string(PureStateChoice c);

enum class MeasurePair { L1Rel, L1Roc, RelRoc };

inline constexpr std::array<MeasurePair, 3> kAllPairs = {MeasurePair::L1Rel, MeasurePair::L1Roc,
                                                         MeasurePair::RelRoc};

std::string to_string(MeasurePair pair);

/// Sub-additive states satisfy Lambda <= kSubadditivityTolerance.
inline constexpr double kSubadditivityTolerance = 1e-9;
/// Sweeps abort when more than this fraction of SDP solves fail.
inline constexpr double kMaxFailureFraction = 1e-3;

class ExperimentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A sweep stopped because SDP solves failed to certify.
class SolverFailure : public ExperimentError {
public:
  using ExperimentError::ExperimentError;
};

struct SweepConfig {
  Experiment experiment = Experiment::SubadditivitySweep;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  /// p values, dimensions, ranks or qubit counts depending on `experiment`.
  std::vector<double> grid;
  PureStateChoice pure_state = PureStateChoice::MaximallyCoherent;
  int n_qubits = 2;
  /// State dimension for the rank sweep.
  int dim = 10;
  unsigned threads = 1;

  /// Throws ExperimentError on any out-of-range field.
  void validate() const;
};

/// Defaults for each experiment (sample counts, grids).
SweepConfig default_config(Experiment e);

/// p grid of `points` uniform values on [0, 1].
std::vector<double> uniform_grid(int points);

struct SweepRecord {
  double sweep_point = 0.0;
  std::optional<MeasurePair> pair;
  std::size_t count_total = 0;
  std::size_t count_positive = 0;
  double fraction = 0.0;
  /// Binomial standard error sqrt(f(1-f)/n).
  double std_error = 0.0;
};

SweepRecord make_record(double point, std::optional<MeasurePair> pair, std::size_t total,
                        std::size_t positive);

struct SweepStats {
  std::size_t redraws = 0;
};

std::vector<SweepRecord> run_subadditivity_sweep(const SweepConfig& cfg, SweepStats* stats = nullptr);
std::vector<SweepRecord> run_ordering_vs_dimension(const SweepConfig& cfg, SweepStats* stats = nullptr);
std::vector<SweepRecord> run_ordering_vs_rank(const SweepConfig& cfg, SweepStats* stats = nullptr);

/// Smallest sweep point whose fraction drops below 1/2, if any.
std::optional<double> transition_point(const std::vector<SweepRecord>& records);

struct Theorem1Row {
  int n = 0;
  double k = 0.0;
  double sdp_value = 0.0;
  double closed_form = 0.0;
  double difference = 0.0;
  /// Sub-additivity gap of the sampled state.
  double lambda = 0.0;
  sdp::RocSolution solution;
};

std::vector<Theorem1Row> run_theorem1_check(const SweepConfig& cfg);

struct Result2Row {
  MeasureKind measure = MeasureKind::L1;
  int d_a = 0;
  int d_b = 0;
  std::size_t samples = 0;
  double max_deviation = 0.0;
};

std::vector<Result2Row> run_result2_check(const SweepConfig& cfg);

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg,
                     const std::vector<SweepRecord>& records);
void write_theorem1_csv(std::ostream& os, const SweepConfig& cfg,
                        const std::vector<Theorem1Row>& rows);
void write_result2_csv(std::ostream& os, const SweepConfig& cfg,
                       const std::vector<Result2Row>& rows);

nlohmann::json config_to_json(const SweepConfig& cfg);

/// Revision the library was built from.
std::string git_revision();

}  // namespace coherence
