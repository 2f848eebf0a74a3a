#include "ostsel/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ostsel/rng.hpp"

namespace ostsel {

namespace {

std::vector<int> draw_ordered_subset(int dim, int k, Rng& rng) {
  std::vector<int> pool(dim);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(dim - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

SparseSignal::SparseSignal(int dim, std::vector<int> support,
                           Eigen::VectorXcd values)
    : dim_(dim), support_(std::move(support)), values_(std::move(values)) {
  const int k = static_cast<int>(support_.size());
  if (dim_ < 1) throw std::invalid_argument("signal dimension must be >= 1");
  if (k < 1 || k > dim_) {
    throw std::invalid_argument("sparsity k = " + std::to_string(k) +
                                " out of range [1, " + std::to_string(dim_) + "]");
  }
  if (values_.size() != k) {
    throw std::invalid_argument("support and value counts differ");
  }
  std::vector<int> sorted = support_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("support entries must be distinct");
  }
  if (sorted.front() < 0 || sorted.back() >= dim_) {
    throw std::invalid_argument("support index out of range");
  }
  for (int i = 0; i < k; ++i) {
    if (!(std::abs(values_[i]) > 0.0)) {
      throw std::invalid_argument("zero value at support position " +
                                  std::to_string(i));
    }
  }
  values_ /= values_.norm();
}

std::vector<int> SparseSignal::sorted_support() const {
  std::vector<int> sorted = support_;
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

SparseSignal gen_signal(int dim, int k, ValueModel model, std::uint64_t seed) {
  if (k < 1 || k > dim) {
    throw std::invalid_argument("sparsity k out of range");
  }
  Rng rng(seed);
  std::vector<int> support = draw_ordered_subset(dim, k, rng);
  const double mag = 1.0 / std::sqrt(static_cast<double>(k));
  Eigen::VectorXcd values(k);
  for (int i = 0; i < k; ++i) {
    const double v = (model == ValueModel::kEqualRandomSign) ? rng.sign() * mag : mag;
    values[i] = std::complex<double>(v, 0.0);
  }
  return SparseSignal(dim, std::move(support), std::move(values));
}

SparseSignal gen_signal(int dim, int k, Eigen::VectorXcd values,
                        std::uint64_t seed) {
  if (k < 1 || k > dim) {
    throw std::invalid_argument("sparsity k out of range");
  }
  if (values.size() != k) {
    throw std::invalid_argument("expected " + std::to_string(k) + " values");
  }
  Rng rng(seed);
  std::vector<int> support = draw_ordered_subset(dim, k, rng);
  return SparseSignal(dim, std::move(support), std::move(values));
}

double alpha_min(const SparseSignal& s) {
  double m = std::abs(s.values()[0]);
  for (Eigen::Index i = 1; i < s.values().size(); ++i) {
    m = std::min(m, std::abs(s.values()[i]));
  }
  return m;
}

double mar(const SparseSignal& s) {
  const double a = alpha_min(s);
  return static_cast<double>(s.sparsity()) * a * a;
}

double snr_min(const SparseSignal& s, double sigma2, int n) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("sigma2 must be positive");
  }
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double a = alpha_min(s);
  return a * a * static_cast<double>(s.sparsity()) /
         (static_cast<double>(n) * sigma2);
}

}  // namespace ostsel
