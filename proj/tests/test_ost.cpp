#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ostsel/coherence.hpp"
#include "ostsel/ost.hpp"
#include "test_util.hpp"

using ostsel::DesignMatrix;
using ostsel::Measurement;
using ostsel::ModelEstimate;
using ostsel::SparseSignal;
using ostsel::ValueModel;
using ostsel::from_dense;
using ostsel::gen_signal;
using ostsel::measure;
using ostsel::one_step_threshold;
using ostsel::threshold_from_coherence;
using ostsel::threshold_from_epsilon;

namespace {

Measurement raw_measurement(Eigen::VectorXcd f, double sigma2 = 0.0) {
  Measurement m;
  m.observed = std::move(f);
  m.sigma2 = sigma2;
  return m;
}

}  // namespace

TEST_SUITE("ost") {

TEST_CASE("noiseless measurement is exactly Phi alpha") {
  const DesignMatrix id = from_dense(Eigen::MatrixXcd::Identity(3, 3), false);
  Eigen::VectorXcd v(1);
  v << 1.0;
  const SparseSignal s(3, {0}, v);
  const Measurement m = measure(id, s, 0.0, 42);
  CHECK(m.observed == Eigen::VectorXcd::Unit(3, 0));
  CHECK(m.source->noise.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("noise energy concentrates at N sigma2") {
  const DesignMatrix id = from_dense(Eigen::MatrixXcd::Identity(64, 64), false);
  const SparseSignal s = gen_signal(64, 1, ValueModel::kEqual, 0);
  const int draws = 10000;
  double total = 0.0;
  for (int t = 0; t < draws; ++t) {
    const Measurement m = measure(id, s, 0.01, static_cast<std::uint64_t>(t));
    total += m.source->noise.squaredNorm();
  }
  const double mean = total / draws;
  CHECK(mean == doctest::Approx(0.64).epsilon(0.02));
}

TEST_CASE("selection keeps strictly super-threshold correlations only") {
  const DesignMatrix id = from_dense(Eigen::MatrixXcd::Identity(3, 3), false);
  Eigen::VectorXcd f(3);
  f << 1.0, 0.0, 0.0;
  const ModelEstimate est = one_step_threshold(id, raw_measurement(f), 0.5);
  CHECK(est.selected == std::vector<int>{0});
  CHECK(est.lambda == 0.5);

  // |y| == lambda exactly: excluded by the strict inequality.
  Eigen::VectorXcd g(3);
  g << 0.5, 0.0, 0.0;
  CHECK(one_step_threshold(id, raw_measurement(g), 0.5).selected.empty());

  // lambda at or above the largest magnitude selects nothing.
  CHECK(one_step_threshold(id, raw_measurement(f), 1.0).selected.empty());
}

TEST_CASE("threshold and dimension validation") {
  const DesignMatrix id = from_dense(Eigen::MatrixXcd::Identity(3, 3), false);
  Eigen::VectorXcd f(3);
  f << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(one_step_threshold(id, raw_measurement(f), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(one_step_threshold(id, raw_measurement(f), -1.0),
                  std::invalid_argument);
  Eigen::VectorXcd short_f(2);
  short_f << 1.0, 0.0;
  CHECK_THROWS_AS(one_step_threshold(id, raw_measurement(short_f), 0.5),
                  std::invalid_argument);
  const SparseSignal s(4, {0}, Eigen::VectorXcd::Ones(1));
  CHECK_THROWS_AS(measure(id, s, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(measure(id, SparseSignal(3, {0}, Eigen::VectorXcd::Ones(1)), -0.1, 1),
                  std::invalid_argument);
}

TEST_CASE("coherence threshold rule arithmetic") {
  // mu = 0, sigma2 = 0.04, C = e^4: 4 sqrt(0.04 * 4) = 1.6.
  CHECK(threshold_from_coherence(0.0, 0.04, 55) ==
        doctest::Approx(4.0 * std::sqrt(0.04 * std::log(55.0))).epsilon(1e-15));
  CHECK(threshold_from_coherence(0.0, 0.04, 55) ==
        doctest::Approx(1.6).epsilon(2e-3));

  const double lambda = threshold_from_coherence(0.05, 0.01, 1024);
  const double log_c = std::log(1024.0);
  CHECK(lambda == doctest::Approx(4.0 * 12.0 * 0.05 * std::sqrt(2.0 * log_c))
                      .epsilon(1e-15));
  CHECK(lambda == doctest::Approx(8.9360).epsilon(1e-4));

  // Homogeneity while the coherence branch is active.
  CHECK(threshold_from_coherence(0.5, 0.01, 1024) ==
        doctest::Approx(10.0 * lambda).epsilon(1e-14));

  CHECK_THROWS_AS(threshold_from_coherence(0.0, 0.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(threshold_from_coherence(-0.1, 0.1, 16), std::invalid_argument);
}

TEST_CASE("epsilon threshold rule arithmetic") {
  CHECK(threshold_from_epsilon(1.0, 0.0, 16) == 2.0);
  CHECK(threshold_from_epsilon(0.0, 0.04, 55) ==
        doctest::Approx(4.0 * std::sqrt(0.04 * std::log(55.0))).epsilon(1e-15));
  CHECK(threshold_from_epsilon(0.0, 0.04, 55) == doctest::Approx(1.6).epsilon(2e-3));
  CHECK_THROWS_AS(threshold_from_epsilon(0.0, 0.0, 16), std::invalid_argument);
}

TEST_CASE("threshold rules agree through the epsilon substitution") {
  ostsel::Rng rng(123);
  for (int t = 0; t < 200; ++t) {
    const double mu = rng.unit() * 0.3;
    const double sigma2 = rng.unit() * 0.1;
    if (mu == 0.0 && sigma2 == 0.0) continue;
    const int cols = 4 + static_cast<int>(rng.below(4096));
    const double eps = 24.0 * mu * std::sqrt(2.0 * std::log(cols));
    const double lhs = threshold_from_coherence(mu, sigma2, cols);
    const double rhs = threshold_from_epsilon(eps, sigma2, cols);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("selection is monotone in lambda") {
  const DesignMatrix phi = test_util::random_complex_matrix(12, 24, 5);
  const SparseSignal s = gen_signal(24, 3, ValueModel::kEqual, 6);
  const Measurement m = measure(phi, s, 0.01, 7);
  std::vector<int> previous;
  bool first = true;
  for (double lambda : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    const std::vector<int> selected = one_step_threshold(phi, m, lambda).selected;
    if (!first) {
      CHECK(std::includes(previous.begin(), previous.end(), selected.begin(),
                          selected.end()));
    }
    previous = selected;
    first = false;
  }
}

TEST_CASE("selection is equivariant under positive rescaling") {
  const DesignMatrix phi = test_util::random_complex_matrix(10, 20, 9);
  const SparseSignal s = gen_signal(20, 2, ValueModel::kEqual, 10);
  const Measurement m = measure(phi, s, 0.05, 11);
  for (double scale : {2.0, 3.7, 0.25}) {
    Measurement scaled = raw_measurement(m.observed * scale, m.sigma2);
    CHECK(one_step_threshold(phi, scaled, 0.3 * scale).selected ==
          one_step_threshold(phi, m, 0.3).selected);
  }
}

TEST_CASE("noiseless recovery is exact for orthonormal designs") {
  const DesignMatrix q = test_util::random_orthonormal(12, 13);
  for (int k : {1, 3, 6}) {
    const SparseSignal s =
        gen_signal(12, k, ValueModel::kEqualRandomSign, static_cast<std::uint64_t>(k));
    const Measurement m = measure(q, s, 0.0, 0);
    const double lambda = 0.5 * ostsel::alpha_min(s);
    CHECK(one_step_threshold(q, m, lambda).selected == s.sorted_support());
  }
}

TEST_CASE("correlated noise rarely exceeds the tail bound") {
  const int n = 32, cols = 64, draws = 2000;
  const double sigma2 = 0.01;
  const DesignMatrix phi = ostsel::gen_gaussian(n, cols, 15);
  const SparseSignal s = gen_signal(cols, 1, ValueModel::kEqual, 0);
  const double log_c = std::log(static_cast<double>(cols));
  const double bound = 2.0 * std::sqrt(sigma2 * log_c);
  int exceed = 0;
  for (int t = 0; t < draws; ++t) {
    const Measurement m = measure(phi, s, sigma2, static_cast<std::uint64_t>(t));
    const Eigen::VectorXcd correlated =
        phi.entries().adjoint() * m.source->noise;
    exceed += correlated.cwiseAbs().maxCoeff() > bound;
  }
  const double rate = static_cast<double>(exceed) / draws;
  const double tail = 2.0 / (std::sqrt(2.0 * M_PI * log_c) * cols);
  const double slack = 3.0 * std::sqrt(tail * (1.0 - tail) / draws);
  CHECK(rate <= tail + slack);
}

}  // TEST_SUITE
