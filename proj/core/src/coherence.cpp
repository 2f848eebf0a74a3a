#include "ostsel/coherence.hpp"

#include <cmath>

namespace ostsel {

double worst_case_coherence(const GramDeviation& dev) {
  const Eigen::MatrixXcd& g = dev.values();
  const Eigen::Index c = dev.size();
  double mu_sq = 0.0;  // track squared magnitudes, one sqrt at the end
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < c; ++i) {
      if (i == j) continue;
      mu_sq = std::max(mu_sq, std::norm(g(i, j)));
    }
  }
  return std::sqrt(mu_sq);
}

double worst_case_coherence(const DesignMatrix& phi) {
  return worst_case_coherence(gram_deviation(phi));
}

double average_coherence(const GramDeviation& dev) {
  const Eigen::MatrixXcd& g = dev.values();
  const Eigen::Index c = dev.size();
  double max_row = 0.0;
  for (Eigen::Index i = 0; i < c; ++i) {
    std::complex<double> row_sum(0.0, 0.0);
    for (Eigen::Index j = 0; j < c; ++j) {
      if (j == i) continue;
      row_sum += g(i, j);
    }
    max_row = std::max(max_row, std::abs(row_sum));
  }
  return max_row / static_cast<double>(c - 1);
}

double average_coherence(const DesignMatrix& phi) {
  return average_coherence(gram_deviation(phi));
}

CoherenceReport check_coherence_property(const GramDeviation& dev,
                                         Eigen::Index n) {
  CoherenceReport report;
  report.mu = worst_case_coherence(dev);
  report.nu = average_coherence(dev);
  const double log_c = std::log(static_cast<double>(dev.size()));
  report.cp1_bound = 1.0 / std::sqrt(10.0 * log_c);
  report.cp2_bound = 12.0 * report.mu / std::sqrt(static_cast<double>(n));
  report.cp1_pass = report.mu <= report.cp1_bound;
  report.cp2_pass = report.nu <= report.cp2_bound;
  report.overall_pass = report.cp1_pass && report.cp2_pass;
  return report;
}

CoherenceReport check_coherence_property(const DesignMatrix& phi) {
  return check_coherence_property(gram_deviation(phi), phi.rows());
}

}  // namespace ostsel
