#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ostsel/coherence.hpp"
#include "ostsel/design.hpp"
#include "ostsel/ost.hpp"
#include "ostsel/signal.hpp"

namespace ostsel {

/// One measure -> threshold -> compare cycle.
struct TrialRecord {
  int n = 0;
  int cols = 0;
  int k = 0;
  double sigma2 = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double lambda = 0.0;
  double alpha_min = 0.0;
  double snr_min = 0.0;  ///< +inf when sigma2 == 0
  double mar = 0.0;
  bool success = false;      ///< selected equals the true support as sets
  bool noise_event = false;  ///< ||Phi^H noise||_inf <= 2 sqrt(sigma2 log C)
  std::optional<bool> stoc_event;  ///< both orthogonality inequalities held
  std::uint64_t seed = 0;
};

/// Optional per-trial inputs: cell-level coherence so a sweep computes the
/// Gram once per matrix, and the tolerance at which to record the
/// orthogonality event.
struct TrialContext {
  std::optional<double> mu;
  std::optional<double> nu;
  std::optional<double> stoc_epsilon;
};

TrialRecord run_trial(const DesignMatrix& phi, const SparseSignal& s,
                      double sigma2, double lambda, std::uint64_t seed,
                      const TrialContext& ctx = {});

enum class MatrixFamily { kGaussian, kRademacher, kFile };

/// How the sweep picks lambda per cell.
struct LambdaRule {
  enum class Kind { kTheorem, kLemma, kFixed };
  Kind kind = Kind::kTheorem;
  double value = 0.0;  ///< epsilon for kLemma, lambda for kFixed

  /// Parses "theorem", "lemma:<epsilon>", or "fixed:<lambda>".
  static LambdaRule parse(const std::string& text);
  std::string to_string() const;
};

struct SweepConfig {
  MatrixFamily family = MatrixFamily::kGaussian;
  std::string matrix_file;  ///< kFile only
  int cols = 0;             ///< ambient dimension C (from file for kFile)
  std::vector<int> n_list;
  std::vector<int> k_list;
  std::vector<double> sigma2_list;
  ValueModel value_model = ValueModel::kEqual;
  int trials_per_cell = 1;
  std::uint64_t master_seed = 0;
  LambdaRule lambda_rule;
  bool record_stoc = false;  ///< requires a lemma rule (it supplies epsilon)
  int threads = 1;
};

/// Parses the flat key=value sweep configuration format. Lines starting
/// with '#' and blank lines are ignored. Unknown keys are errors.
SweepConfig parse_sweep_config(const std::string& text);

/// Aggregate row for one grid cell.
struct CellSummary {
  int n = 0;
  int cols = 0;
  int k = 0;
  double sigma2 = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double lambda = 0.0;
  long trials = 0;
  long successes = 0;
  double success_rate = 0.0;
  double std_error = 0.0;  ///< binomial standard error
  bool theorem2_pass = false;
  bool cp_pass = false;
};

struct SweepResult {
  std::vector<CellSummary> cells;
  std::vector<TrialRecord> trials;  ///< all trials, cell-major order
};

/// Runs every cell of the grid: one fresh seeded matrix per cell, fresh
/// signal and noise per trial. Worker count only affects scheduling; the
/// result is identical for any thread count.
SweepResult run_sweep(const SweepConfig& cfg);

/// Smallest measurement count for which the coherence-based recovery
/// guarantee applies, as max of its three terms, writing the worst-case
/// coherence as mu = c1 * N^(-1/beta). beta may be +inf, in which case the
/// third term is vacuous (1) and the signal-class predicate should be
/// consulted directly.
double min_measurements(int k, int cols, double snr_min_value, double mar_value,
                        double c1, double beta);

/// Signal-class sufficient condition: k <= N/(2 log C) and
/// alpha_min > max{ 8 sqrt(sigma2 log C), 96 mu sqrt(2 log C) }.
struct RecoveryCheck {
  bool pass = false;
  double k_bound = 0.0;
  double amin_bound = 0.0;
};
RecoveryCheck recovery_predicate(int k, int n, int cols, double alpha_min_value,
                                 double sigma2, double mu);

/// Exhaustive least-squares baseline: returns the k-subset minimizing the
/// residual ||f - Phi_S (Phi_S^+ f)||_2, ties broken by lexicographic order.
/// Guarded to C <= 24 and binom(C, k) <= 1e6. Diagnostic tool only; the
/// thresholding path never uses it.
std::vector<int> oracle_exhaustive(const DesignMatrix& phi,
                                   const Measurement& m, int k);

/// CSV serialization. Floats are written with 10 significant digits; parsing
/// an emitted file and re-serializing reproduces it byte for byte.
std::string cells_to_csv(const std::vector<CellSummary>& cells);
std::vector<CellSummary> cells_from_csv(const std::string& text);
std::string trials_to_csv(const std::vector<TrialRecord>& trials);

}  // namespace ostsel
