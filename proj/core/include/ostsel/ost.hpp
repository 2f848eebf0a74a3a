#pragma once

#include <optional>
#include <vector>

#include "ostsel/design.hpp"
#include "ostsel/signal.hpp"

namespace ostsel {

/// Inputs that produced a measurement, kept for diagnostics (noise-event
/// checks, exact-recovery comparisons).
struct MeasurementSource {
  SparseSignal signal;
  Eigen::VectorXcd noise;  ///< realized noise vector, zero when sigma2 == 0
};

/// Observation f = Phi * alpha + noise with complex Gaussian noise of
/// per-entry variance sigma2.
struct Measurement {
  Eigen::VectorXcd observed;
  double sigma2 = 0.0;
  std::optional<MeasurementSource> source;
};

/// Output of one-step thresholding: selected = { i : |y_i| > lambda } with
/// strict inequality, where y = Phi^H f.
struct ModelEstimate {
  std::vector<int> selected;        ///< ascending
  Eigen::VectorXcd correlations;    ///< y
  double lambda = 0.0;
};

/// Draws f = Phi * alpha + noise. Noise entries are i.i.d. complex Gaussian
/// (real and imaginary parts N(0, sigma2/2) each); sigma2 == 0 gives the
/// noiseless measurement exactly. Deterministic in seed.
Measurement measure(const DesignMatrix& phi, const SparseSignal& s,
                    double sigma2, std::uint64_t seed);

/// One-step thresholding: correlate with every column and keep indices whose
/// correlation magnitude strictly exceeds lambda. Requires lambda > 0.
ModelEstimate one_step_threshold(const DesignMatrix& phi, const Measurement& m,
                                 double lambda);

/// Threshold rule driven by the worst-case coherence:
///   4 * max{ 12 mu sqrt(2 log C), sqrt(sigma2 log C) }.
/// Model-order independent; needs only mu, sigma2, and C.
double threshold_from_coherence(double mu, double sigma2, int cols);

/// Threshold rule driven by an orthogonality tolerance epsilon:
///   2 * max{ epsilon, 2 sqrt(sigma2 log C) }.
double threshold_from_epsilon(double epsilon, double sigma2, int cols);

}  // namespace ostsel
