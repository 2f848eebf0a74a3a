#include "ostsel/stoc.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ostsel/rng.hpp"

namespace ostsel {

namespace {

// Above this column count the cached C x C Gram for stoc_delta_estimate
// would exceed ~64 MB; fall back to per-trial products.
constexpr Eigen::Index kGramCacheMaxCols = 2048;

void validate_support(const DesignMatrix& phi, std::span<const int> support,
                      const Eigen::VectorXcd& z) {
  if (support.empty()) throw std::invalid_argument("support must be non-empty");
  if (static_cast<Eigen::Index>(support.size()) > phi.cols()) {
    throw std::invalid_argument("support larger than column count");
  }
  if (static_cast<Eigen::Index>(support.size()) != z.size()) {
    throw std::invalid_argument("support and z sizes differ");
  }
  std::vector<bool> seen(phi.cols(), false);
  for (int idx : support) {
    if (idx < 0 || idx >= phi.cols()) {
      throw std::invalid_argument("support index out of range");
    }
    if (seen[idx]) throw std::invalid_argument("duplicate support index");
    seen[idx] = true;
  }
}

StocSides sides_from_correlations(const Eigen::VectorXcd& corr,
                                  std::span<const int> support,
                                  const Eigen::VectorXcd& z,
                                  std::vector<char>& on_support) {
  std::fill(on_support.begin(), on_support.end(), 0);
  for (int idx : support) on_support[idx] = 1;

  StocSides sides;
  for (std::size_t i = 0; i < support.size(); ++i) {
    sides.lhs1 = std::max(sides.lhs1,
                          std::abs(corr[support[i]] - z[static_cast<Eigen::Index>(i)]));
  }
  for (Eigen::Index j = 0; j < corr.size(); ++j) {
    if (!on_support[j]) sides.lhs2 = std::max(sides.lhs2, std::abs(corr[j]));
  }
  return sides;
}

std::vector<int> draw_ordered_subset(Eigen::Index dim, int k, Rng& rng) {
  std::vector<int> pool(dim);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<Eigen::Index>(
                           rng.below(static_cast<std::uint64_t>(dim - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

StocSides stoc_sides(const DesignMatrix& phi, std::span<const int> support,
                     const Eigen::VectorXcd& z) {
  validate_support(phi, support, z);
  // corr = Phi^H (Phi_S z); on-support rows give (Phi_S^H Phi_S) z.
  Eigen::VectorXcd mixed = Eigen::VectorXcd::Zero(phi.rows());
  for (std::size_t i = 0; i < support.size(); ++i) {
    mixed += z[static_cast<Eigen::Index>(i)] * phi.entries().col(support[i]);
  }
  const Eigen::VectorXcd corr = phi.entries().adjoint() * mixed;
  std::vector<char> mask(phi.cols(), 0);
  return sides_from_correlations(corr, support, z, mask);
}

StocVerdict stoc_check(const DesignMatrix& phi, std::span<const int> support,
                       const Eigen::VectorXcd& z, double epsilon) {
  if (epsilon < 0.0 || epsilon >= 1.0) {
    throw std::invalid_argument("epsilon must lie in [0, 1)");
  }
  const StocSides sides = stoc_sides(phi, support, z);
  StocVerdict v;
  v.lhs1 = sides.lhs1;
  v.lhs2 = sides.lhs2;
  v.epsilon_scaled = epsilon * z.norm();
  v.pass1 = v.lhs1 <= v.epsilon_scaled;
  v.pass2 = v.lhs2 <= v.epsilon_scaled;
  return v;
}

StocDeltaEstimate stoc_delta_estimate(const DesignMatrix& phi, int k,
                                      const Eigen::VectorXcd& z, double epsilon,
                                      int trials, std::uint64_t seed) {
  if (k < 1 || k > phi.cols()) {
    throw std::invalid_argument("k out of range [1, C]");
  }
  if (z.size() != k) throw std::invalid_argument("z must have k entries");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");

  const double threshold = epsilon * z.norm();
  const Eigen::Index c = phi.cols();

  // With a cached Gram each trial costs O(kC) instead of O(NC).
  Eigen::MatrixXcd gram;
  const bool cache_gram = c <= kGramCacheMaxCols;
  if (cache_gram) gram = phi.entries().adjoint() * phi.entries();

  std::vector<char> mask(c, 0);
  Eigen::VectorXcd corr(c);
  long fail1 = 0, fail2 = 0, fail_any = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    const std::vector<int> support = draw_ordered_subset(c, k, rng);
    if (cache_gram) {
      corr.setZero();
      for (int i = 0; i < k; ++i) corr += z[i] * gram.col(support[i]);
    } else {
      Eigen::VectorXcd mixed = Eigen::VectorXcd::Zero(phi.rows());
      for (int i = 0; i < k; ++i) {
        mixed += z[i] * phi.entries().col(support[i]);
      }
      corr = phi.entries().adjoint() * mixed;
    }
    const StocSides sides = sides_from_correlations(corr, support, z, mask);
    const bool f1 = sides.lhs1 > threshold;
    const bool f2 = sides.lhs2 > threshold;
    fail1 += f1;
    fail2 += f2;
    fail_any += (f1 || f2);
  }
  StocDeltaEstimate est;
  est.trials = trials;
  est.delta1_hat = static_cast<double>(fail1) / trials;
  est.delta2_hat = static_cast<double>(fail2) / trials;
  est.delta_hat = static_cast<double>(fail_any) / trials;
  return est;
}

double stoc1_failure_bound(int k, double epsilon, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  return 4.0 * static_cast<double>(k) *
         std::exp(-(epsilon * epsilon) / (576.0 * mu * mu));
}

double stoc2_failure_bound(int cols, double epsilon, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  if (cols < 2) throw std::invalid_argument("cols must be >= 2");
  return 4.0 * static_cast<double>(cols) *
         std::exp(-(epsilon * epsilon) / (256.0 * mu * mu));
}

bool stoc_hypothesis_holds(int k, double epsilon, double nu, int cols) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (epsilon < 0.0 || nu < 0.0) {
    throw std::invalid_argument("epsilon and nu must be >= 0");
  }
  const bool within_nu =
      nu == 0.0 || static_cast<double>(k) <= epsilon * epsilon / (4.0 * nu * nu);
  return within_nu && static_cast<double>(k) <= static_cast<double>(cols) / 2.0;
}

double ost_failure_bound(double delta, int cols) {
  if (delta < 0.0 || delta > 1.0) {
    throw std::invalid_argument("delta must lie in [0, 1]");
  }
  if (cols < 2) throw std::invalid_argument("cols must be >= 2");
  const double log_c = std::log(static_cast<double>(cols));
  return delta + 2.0 / (std::sqrt(2.0 * M_PI * log_c) * static_cast<double>(cols));
}

double stoc_delta_from_coherence(int k, double epsilon, double mu, double nu,
                                 int cols) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (nu < 0.0) throw std::invalid_argument("nu must be >= 0");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (cols < 2) throw std::invalid_argument("cols must be >= 2");
  if (static_cast<double>(k) > static_cast<double>(cols) / 2.0) {
    throw std::invalid_argument("hypothesis violation: k > C/2");
  }
  const double eps_floor = 2.0 * std::sqrt(static_cast<double>(k)) * nu;
  if (epsilon < eps_floor || epsilon >= 1.0) {
    throw std::invalid_argument(
        "hypothesis violation: epsilon must lie in [2 sqrt(k) nu, 1) = [" +
        std::to_string(eps_floor) + ", 1)");
  }
  return 8.0 * static_cast<double>(cols) *
         std::exp(-(epsilon * epsilon) / (576.0 * mu * mu));
}

}  // namespace ostsel
