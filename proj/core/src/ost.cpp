#include "ostsel/ost.hpp"

#include <cmath>
#include <stdexcept>

#include "ostsel/rng.hpp"

namespace ostsel {

Measurement measure(const DesignMatrix& phi, const SparseSignal& s,
                    double sigma2, std::uint64_t seed) {
  if (s.dim() != phi.cols()) {
    throw std::invalid_argument("signal dimension does not match matrix columns");
  }
  if (sigma2 < 0.0) throw std::invalid_argument("sigma2 must be >= 0");

  const Eigen::Index n = phi.rows();
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < s.sparsity(); ++i) {
    f += s.values()[i] * phi.entries().col(s.support()[i]);
  }
  Eigen::VectorXcd noise = Eigen::VectorXcd::Zero(n);
  if (sigma2 > 0.0) {
    Rng rng(seed);
    for (Eigen::Index i = 0; i < n; ++i) {
      noise[i] = rng.complex_normal(sigma2);
    }
    f += noise;
  }
  Measurement m;
  m.observed = std::move(f);
  m.sigma2 = sigma2;
  m.source = MeasurementSource{s, std::move(noise)};
  return m;
}

ModelEstimate one_step_threshold(const DesignMatrix& phi, const Measurement& m,
                                 double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("thresholding parameter lambda must be > 0");
  }
  if (m.observed.size() != phi.rows()) {
    throw std::invalid_argument("measurement length does not match matrix rows");
  }
  ModelEstimate est;
  est.lambda = lambda;
  est.correlations = phi.entries().adjoint() * m.observed;
  for (Eigen::Index i = 0; i < est.correlations.size(); ++i) {
    if (std::abs(est.correlations[i]) > lambda) {
      est.selected.push_back(static_cast<int>(i));
    }
  }
  return est;
}

double threshold_from_coherence(double mu, double sigma2, int cols) {
  if (mu < 0.0 || sigma2 < 0.0) {
    throw std::invalid_argument("mu and sigma2 must be >= 0");
  }
  if (cols < 2) throw std::invalid_argument("cols must be >= 2");
  if (mu == 0.0 && sigma2 == 0.0) {
    throw std::invalid_argument("mu and sigma2 cannot both be zero (lambda must be > 0)");
  }
  const double log_c = std::log(static_cast<double>(cols));
  return 4.0 * std::max(12.0 * mu * std::sqrt(2.0 * log_c),
                        std::sqrt(sigma2 * log_c));
}

double threshold_from_epsilon(double epsilon, double sigma2, int cols) {
  if (epsilon < 0.0 || sigma2 < 0.0) {
    throw std::invalid_argument("epsilon and sigma2 must be >= 0");
  }
  if (cols < 2) throw std::invalid_argument("cols must be >= 2");
  if (epsilon == 0.0 && sigma2 == 0.0) {
    throw std::invalid_argument("epsilon and sigma2 cannot both be zero (lambda must be > 0)");
  }
  const double log_c = std::log(static_cast<double>(cols));
  return 2.0 * std::max(epsilon, 2.0 * std::sqrt(sigma2 * log_c));
}

}  // namespace ostsel
