#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ostsel/experiment.hpp"
#include "ostsel/rng.hpp"
#include "test_util.hpp"

using ostsel::DesignMatrix;
using ostsel::Measurement;
using ostsel::RecoveryCheck;
using ostsel::SparseSignal;
using ostsel::TrialContext;
using ostsel::TrialRecord;
using ostsel::ValueModel;
using ostsel::from_dense;
using ostsel::gen_gaussian;
using ostsel::gen_signal;
using ostsel::measure;
using ostsel::min_measurements;
using ostsel::oracle_exhaustive;
using ostsel::recovery_predicate;
using ostsel::run_trial;

TEST_SUITE("experiment") {

TEST_CASE("orthonormal noiseless trial succeeds below alpha_min") {
  const DesignMatrix q = test_util::random_orthonormal(10, 2);
  const SparseSignal s = gen_signal(10, 3, ValueModel::kEqual, 4);
  TrialContext ctx;
  // A QR-derived basis is orthonormal only to rounding, so allow the
  // orthogonality check a matching sliver of tolerance.
  ctx.stoc_epsilon = 1e-9;
  const TrialRecord rec =
      run_trial(q, s, 0.0, 0.5 * ostsel::alpha_min(s), 77, ctx);
  CHECK(rec.success);
  CHECK(rec.noise_event);  // zero noise satisfies the bound trivially
  REQUIRE(rec.stoc_event.has_value());
  CHECK(*rec.stoc_event);
  CHECK(rec.mu <= 1e-12);
  CHECK(rec.nu <= 1e-12);
  CHECK(rec.alpha_min == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(rec.mar == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isinf(rec.snr_min));
  CHECK(rec.seed == 77);
}

TEST_CASE("an oversized threshold empties the estimate and fails the trial") {
  const DesignMatrix q = test_util::random_orthonormal(8, 3);
  const SparseSignal s = gen_signal(8, 2, ValueModel::kEqual, 5);
  const TrialRecord rec = run_trial(q, s, 0.0, 100.0, 1);
  CHECK_FALSE(rec.success);
}

TEST_CASE("trial context reuses supplied coherence values") {
  const DesignMatrix phi = gen_gaussian(16, 32, 9);
  const SparseSignal s = gen_signal(32, 2, ValueModel::kEqual, 3);
  TrialContext ctx;
  ctx.mu = 0.25;
  ctx.nu = 0.01;
  const TrialRecord rec = run_trial(phi, s, 0.001, 0.4, 11, ctx);
  CHECK(rec.mu == 0.25);
  CHECK(rec.nu == 0.01);
  const TrialRecord fresh = run_trial(phi, s, 0.001, 0.4, 11);
  CHECK(fresh.mu == doctest::Approx(ostsel::worst_case_coherence(phi)).epsilon(1e-15));
  CHECK(fresh.success == rec.success);
}

TEST_CASE("minimum-measurement bound arithmetic") {
  const double log_c = std::log(1024.0);
  // Tiny c1 parks the third term near zero; the noise term dominates.
  const double small_c1 = 1e-6;
  CHECK(min_measurements(10, 1024, 1.0, 1.0, small_c1, 2.0) ==
        doctest::Approx(64.0 * 10.0 * log_c).epsilon(1e-12));
  // Huge SNR leaves the first term: 2 k log C.
  CHECK(min_measurements(10, 1024, 1e12, 1.0, small_c1, 2.0) ==
        doctest::Approx(2.0 * 10.0 * log_c).epsilon(1e-12));
  // Gaussian-style c1 = sqrt(2 log C), beta = 2: the third term dominates.
  const double c1 = std::sqrt(2.0 * log_c);
  const double c2 = (96.0 * c1) * (96.0 * c1);
  const double expected = 2.0 * c2 * 10.0 * log_c;
  CHECK(min_measurements(10, 1024, 1.0, 1.0, c1, 2.0) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(1.771e7).epsilon(5e-4));
  // beta = inf encodes an N-independent coherence: vacuous third term.
  CHECK(min_measurements(10, 1024, 1e12, 1.0, 5.0,
                         std::numeric_limits<double>::infinity()) ==
        doctest::Approx(2.0 * 10.0 * log_c).epsilon(1e-12));

  CHECK_THROWS_AS(min_measurements(0, 1024, 1.0, 1.0, 1.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(min_measurements(10, 1024, 0.0, 1.0, 1.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(min_measurements(10, 1024, 1.0, 1.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("signal-class predicate arithmetic") {
  // sigma2 = 0, mu = 0: the value bound vanishes and only k matters.
  const RecoveryCheck free_noise = recovery_predicate(36, 512, 1024, 0.5, 0.0, 0.0);
  CHECK(free_noise.amin_bound == 0.0);
  CHECK(free_noise.k_bound ==
        doctest::Approx(512.0 / (2.0 * std::log(1024.0))).epsilon(1e-15));
  CHECK(free_noise.k_bound == doctest::Approx(36.93).epsilon(1e-3));
  CHECK(free_noise.pass);
  CHECK_FALSE(recovery_predicate(37, 512, 1024, 0.5, 0.0, 0.0).pass);

  const RecoveryCheck bound = recovery_predicate(5, 512, 1024, 0.5, 0.01, 0.05);
  const double log_c = std::log(1024.0);
  CHECK(bound.amin_bound ==
        doctest::Approx(96.0 * 0.05 * std::sqrt(2.0 * log_c)).epsilon(1e-15));
  CHECK(bound.amin_bound == doctest::Approx(17.87).epsilon(1e-3));
  CHECK_FALSE(bound.pass);  // alpha_min = 0.5 is far below 17.87

  // Strictness at the value bound: alpha_min must strictly exceed it.
  const double noise_bound = 8.0 * std::sqrt(0.01 * std::log(1024.0));
  CHECK_FALSE(recovery_predicate(1, 512, 1024, noise_bound, 0.01, 0.0).pass);
  CHECK(recovery_predicate(1, 512, 1024, 1.001 * noise_bound, 0.01, 0.0).pass);
  CHECK_THROWS_AS(recovery_predicate(1, 512, 1024, 0.0, 0.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("exhaustive baseline recovers noiseless supports") {
  SUBCASE("orthonormal design") {
    const DesignMatrix q = test_util::random_orthonormal(8, 6);
    const SparseSignal s = gen_signal(8, 2, ValueModel::kEqual, 7);
    const Measurement m = measure(q, s, 0.0, 0);
    CHECK(oracle_exhaustive(q, m, 2) == s.sorted_support());
  }
  SUBCASE("generic compressed design") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const DesignMatrix phi = gen_gaussian(6, 8, seed);
      const SparseSignal s = gen_signal(8, 2, ValueModel::kEqualRandomSign, seed + 100);
      const Measurement m = measure(phi, s, 0.0, 0);
      CHECK(oracle_exhaustive(phi, m, 2) == s.sorted_support());
    }
  }
  SUBCASE("k = C returns every column") {
    const DesignMatrix q = test_util::random_orthonormal(4, 8);
    const SparseSignal s = gen_signal(4, 4, ValueModel::kEqual, 2);
    const Measurement m = measure(q, s, 0.0, 0);
    CHECK(oracle_exhaustive(q, m, 4) == std::vector<int>{0, 1, 2, 3});
  }
}

TEST_CASE("exhaustive baseline copes with rank-deficient subsets") {
  Eigen::MatrixXcd m(3, 4);
  m.col(0) = Eigen::Vector3cd(1.0, 0.0, 0.0);
  m.col(1) = Eigen::Vector3cd(1.0, 0.0, 0.0);  // duplicate of column 0
  m.col(2) = Eigen::Vector3cd(0.0, 1.0, 0.0);
  m.col(3) = Eigen::Vector3cd(0.0, 0.0, 1.0);
  const DesignMatrix phi = from_dense(std::move(m), false);
  Eigen::VectorXcd values(2);
  values << 0.6, 0.8;
  const SparseSignal s(4, {2, 3}, values);
  const Measurement meas = measure(phi, s, 0.0, 0);
  CHECK(oracle_exhaustive(phi, meas, 2) == std::vector<int>{2, 3});
}

TEST_CASE("exhaustive baseline guard rails") {
  const DesignMatrix phi = gen_gaussian(4, 25, 1);
  const SparseSignal s = gen_signal(25, 2, ValueModel::kEqual, 1);
  const Measurement m = measure(phi, s, 0.0, 0);
  CHECK_THROWS_AS(oracle_exhaustive(phi, m, 2), std::invalid_argument);

  const DesignMatrix wide = gen_gaussian(4, 24, 2);
  const SparseSignal s2 = gen_signal(24, 12, ValueModel::kEqual, 1);
  const Measurement m2 = measure(wide, s2, 0.0, 0);
  CHECK_THROWS_AS(oracle_exhaustive(wide, m2, 12), std::invalid_argument);

  CHECK_THROWS_AS(oracle_exhaustive(wide, m2, 0), std::invalid_argument);
}

TEST_CASE("cell CSV round-trips byte for byte") {
  std::vector<ostsel::CellSummary> cells(2);
  cells[0].n = 64;
  cells[0].cols = 128;
  cells[0].k = 3;
  cells[0].sigma2 = 1e-4;
  cells[0].mu = 0.2345678901234;
  cells[0].nu = 0.0123456789;
  cells[0].lambda = 0.5;
  cells[0].trials = 100;
  cells[0].successes = 97;
  cells[0].success_rate = 0.97;
  cells[0].std_error = std::sqrt(0.97 * 0.03 / 100.0);
  cells[0].theorem2_pass = false;
  cells[0].cp_pass = true;
  cells[1] = cells[0];
  cells[1].n = 128;
  cells[1].successes = 100;
  cells[1].success_rate = 1.0;
  cells[1].std_error = 0.0;

  const std::string csv = ostsel::cells_to_csv(cells);
  const std::vector<ostsel::CellSummary> parsed = ostsel::cells_from_csv(csv);
  CHECK(ostsel::cells_to_csv(parsed) == csv);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].mu == doctest::Approx(cells[0].mu).epsilon(1e-9));
  CHECK(parsed[1].success_rate == 1.0);

  CHECK_THROWS_AS(ostsel::cells_from_csv("bogus\n1,2,3\n"), std::invalid_argument);
}

TEST_CASE("trial CSV includes the optional orthogonality flag") {
  TrialRecord rec;
  rec.n = 8;
  rec.cols = 16;
  rec.k = 2;
  rec.sigma2 = 0.0;
  rec.snr_min = std::numeric_limits<double>::infinity();
  rec.seed = 1234567890123456789ULL;
  const std::string no_flag = ostsel::trials_to_csv({rec});
  CHECK(no_flag.find(",,1234567890123456789\n") != std::string::npos);
  CHECK(no_flag.find("inf") != std::string::npos);
  rec.stoc_event = true;
  const std::string with_flag = ostsel::trials_to_csv({rec});
  CHECK(with_flag.find(",1,1234567890123456789\n") != std::string::npos);
}

}  // TEST_SUITE
