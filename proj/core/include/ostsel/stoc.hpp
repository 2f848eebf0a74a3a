#pragma once

#include <cstdint>
#include <span>

#include "ostsel/design.hpp"

namespace ostsel {

/// The two left-hand sides of the statistical orthogonality condition for
/// one support draw:
///   lhs1 = ||(Phi_S^H Phi_S - I) z||_inf   (on-support self-interference)
///   lhs2 = ||Phi_{S^c}^H Phi_S z||_inf     (leakage onto the complement)
struct StocSides {
  double lhs1 = 0.0;
  double lhs2 = 0.0;
};

/// StocSides compared against epsilon * ||z||_2.
struct StocVerdict {
  double lhs1 = 0.0;
  double lhs2 = 0.0;
  double epsilon_scaled = 0.0;  ///< epsilon * ||z||_2
  bool pass1 = false;           ///< lhs1 <= epsilon_scaled
  bool pass2 = false;           ///< lhs2 <= epsilon_scaled
};

/// Monte Carlo estimate of the failure probability over random supports.
struct StocDeltaEstimate {
  double delta1_hat = 0.0;  ///< frequency of lhs1 > epsilon ||z||
  double delta2_hat = 0.0;  ///< frequency of lhs2 > epsilon ||z||
  double delta_hat = 0.0;   ///< frequency of either failure
  int trials = 0;
};

/// Exact left-hand sides for one given support and coefficient vector.
StocSides stoc_sides(const DesignMatrix& phi, std::span<const int> support,
                     const Eigen::VectorXcd& z);

/// Checks both orthogonality inequalities at tolerance epsilon in [0, 1).
StocVerdict stoc_check(const DesignMatrix& phi, std::span<const int> support,
                       const Eigen::VectorXcd& z, double epsilon);

/// Draws `trials` uniformly random ordered k-subsets (z stays fixed; the
/// condition quantifies over the support only) and tallies failures of each
/// inequality at tolerance epsilon >= 0. Per-trial seeds are derived from
/// (seed, trial index), so the estimate does not depend on evaluation order.
StocDeltaEstimate stoc_delta_estimate(const DesignMatrix& phi, int k,
                                      const Eigen::VectorXcd& z, double epsilon,
                                      int trials, std::uint64_t seed);

/// Closed-form bound on the probability that the on-support inequality
/// fails: 4 k exp(-epsilon^2 / (576 mu^2)). Valid under
/// stoc_hypothesis_holds; returned unclamped so vacuous bounds are visible.
double stoc1_failure_bound(int k, double epsilon, double mu);

/// Closed-form bound for the complement inequality:
/// 4 C exp(-epsilon^2 / (256 mu^2)). Unclamped.
double stoc2_failure_bound(int cols, double epsilon, double mu);

/// Hypothesis both bounds require: k <= min{ epsilon^2 / (4 nu^2), C/2 }.
bool stoc_hypothesis_holds(int k, double epsilon, double nu, int cols);

/// Failure probability of one-step thresholding given a support-draw failure
/// rate delta: delta + 2 / (sqrt(2 pi log C) * C).
double ost_failure_bound(double delta, int cols);

/// Support-draw failure rate implied by the coherence measures:
/// 8 C exp(-epsilon^2 / (576 mu^2)) for epsilon in [2 sqrt(k) nu, 1) and
/// k <= C/2; anything outside that range is a hypothesis violation.
double stoc_delta_from_coherence(int k, double epsilon, double mu, double nu,
                                 int cols);

}  // namespace ostsel
