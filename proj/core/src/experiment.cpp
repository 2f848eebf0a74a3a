#include "ostsel/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ostsel/rng.hpp"
#include "ostsel/stoc.hpp"

namespace ostsel {

TrialRecord run_trial(const DesignMatrix& phi, const SparseSignal& s,
                      double sigma2, double lambda, std::uint64_t seed,
                      const TrialContext& ctx) {
  TrialRecord rec;
  rec.n = static_cast<int>(phi.rows());
  rec.cols = static_cast<int>(phi.cols());
  rec.k = s.sparsity();
  rec.sigma2 = sigma2;
  rec.lambda = lambda;
  rec.seed = seed;
  rec.alpha_min = alpha_min(s);
  rec.mar = mar(s);
  rec.snr_min = sigma2 > 0.0 ? snr_min(s, sigma2, rec.n)
                             : std::numeric_limits<double>::infinity();

  if (ctx.mu && ctx.nu) {
    rec.mu = *ctx.mu;
    rec.nu = *ctx.nu;
  } else {
    const CoherenceReport report = check_coherence_property(phi);
    rec.mu = report.mu;
    rec.nu = report.nu;
  }

  const Measurement m = measure(phi, s, sigma2, seed);
  const ModelEstimate est = one_step_threshold(phi, m, lambda);
  rec.success = est.selected == s.sorted_support();

  const double log_c = std::log(static_cast<double>(rec.cols));
  const double noise_bound = 2.0 * std::sqrt(sigma2 * log_c);
  const Eigen::VectorXcd correlated_noise =
      phi.entries().adjoint() * m.source->noise;
  rec.noise_event =
      correlated_noise.cwiseAbs().maxCoeff() <= noise_bound;

  if (ctx.stoc_epsilon) {
    const StocSides sides = stoc_sides(phi, s.support(), s.values());
    const double scaled = *ctx.stoc_epsilon * s.values().norm();
    rec.stoc_event = sides.lhs1 <= scaled && sides.lhs2 <= scaled;
  }
  return rec;
}

double min_measurements(int k, int cols, double snr_min_value, double mar_value,
                        double c1, double beta) {
  if (k < 1 || cols < 2) throw std::invalid_argument("k >= 1 and C >= 2 required");
  if (!(snr_min_value > 0.0) || !(mar_value > 0.0) || !(c1 > 0.0)) {
    throw std::invalid_argument("snr_min, mar, and c1 must be positive");
  }
  if (!(beta > 1.0)) throw std::invalid_argument("beta must lie in (1, inf]");
  const double log_c = std::log(static_cast<double>(cols));
  const double k_log_c = static_cast<double>(k) * log_c;
  const double term1 = 2.0 * k_log_c;
  const double term2 = 64.0 / snr_min_value * k_log_c;
  const double c2 = (96.0 * c1) * (96.0 * c1);
  const double term3 = std::isinf(beta)
                           ? 1.0
                           : std::pow(2.0 * c2 * k_log_c / mar_value, beta / 2.0);
  return std::max({term1, term2, term3});
}

RecoveryCheck recovery_predicate(int k, int n, int cols, double alpha_min_value,
                                 double sigma2, double mu) {
  if (k < 1 || n < 1 || cols < 2) {
    throw std::invalid_argument("k >= 1, N >= 1, C >= 2 required");
  }
  if (mu < 0.0 || sigma2 < 0.0 || !(alpha_min_value > 0.0)) {
    throw std::invalid_argument("mu, sigma2 >= 0 and alpha_min > 0 required");
  }
  const double log_c = std::log(static_cast<double>(cols));
  RecoveryCheck check;
  check.k_bound = static_cast<double>(n) / (2.0 * log_c);
  check.amin_bound = std::max(8.0 * std::sqrt(sigma2 * log_c),
                              96.0 * mu * std::sqrt(2.0 * log_c));
  check.pass = static_cast<double>(k) <= check.k_bound &&
               alpha_min_value > check.amin_bound;
  return check;
}

namespace {

// binom(c, k) capped at `cap`; returns cap + 1 on overflow past the cap.
double binomial_capped(int c, int k, double cap) {
  double value = 1.0;
  const int kk = std::min(k, c - k);
  for (int i = 1; i <= kk; ++i) {
    value *= static_cast<double>(c - kk + i) / static_cast<double>(i);
    if (value > cap) return cap + 1.0;
  }
  return value;
}

}  // namespace

std::vector<int> oracle_exhaustive(const DesignMatrix& phi,
                                   const Measurement& m, int k) {
  const int c = static_cast<int>(phi.cols());
  const Eigen::Index n = phi.rows();
  if (k < 1 || k > c) throw std::invalid_argument("k out of range [1, C]");
  if (m.observed.size() != n) {
    throw std::invalid_argument("measurement length does not match matrix rows");
  }
  if (c > 24 || binomial_capped(c, k, 1e6) > 1e6) {
    throw std::invalid_argument(
        "exhaustive search guard exceeded (need C <= 24 and binom(C,k) <= 1e6)");
  }

  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;

  std::vector<int> best;
  double best_residual = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd sub(n, k);
  while (true) {
    for (int i = 0; i < k; ++i) sub.col(i) = phi.entries().col(subset[i]);
    // Complete orthogonal decomposition gives the minimum-norm least-squares
    // solution, so rank-deficient submatrices are handled.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(sub);
    const Eigen::VectorXcd x = cod.solve(m.observed);
    const double residual = (m.observed - sub * x).norm();
    if (residual < best_residual) {
      best_residual = residual;
      best = subset;
    }
    // Advance to the next combination in lexicographic order.
    int i = k - 1;
    while (i >= 0 && subset[i] == c - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
  return best;
}

}  // namespace ostsel
