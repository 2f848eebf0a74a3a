#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ostsel {

/// How gen_signal fills the nonzero values.
enum class ValueModel {
  kEqual,            ///< all values 1/sqrt(k)
  kEqualRandomSign,  ///< +-1/sqrt(k), signs i.i.d.
};

/// k-sparse vector in dimension C, stored as an ordered support plus the
/// matching nonzero values. Values always have unit Euclidean norm; any
/// input is renormalized at construction.
class SparseSignal {
 public:
  /// Validating constructor: support entries distinct and in [0, dim),
  /// 1 <= k <= dim, no zero values. Values are rescaled to unit norm.
  SparseSignal(int dim, std::vector<int> support, Eigen::VectorXcd values);

  int dim() const { return dim_; }
  int sparsity() const { return static_cast<int>(support_.size()); }
  /// Support in draw order; values() is aligned with it.
  const std::vector<int>& support() const { return support_; }
  const Eigen::VectorXcd& values() const { return values_; }
  std::vector<int> sorted_support() const;

 private:
  int dim_;
  std::vector<int> support_;
  Eigen::VectorXcd values_;
};

/// Support drawn uniformly over ordered k-subsets (Fisher-Yates prefix),
/// values per the model. Deterministic in seed.
SparseSignal gen_signal(int dim, int k, ValueModel model, std::uint64_t seed);

/// As above but with user-supplied values (the `given` model); values are
/// renormalized, a zero value is rejected.
SparseSignal gen_signal(int dim, int k, Eigen::VectorXcd values,
                        std::uint64_t seed);

/// min_i |value_i|.
double alpha_min(const SparseSignal& s);

/// Minimum-to-average ratio k * alpha_min^2, in (0, 1].
double mar(const SparseSignal& s);

/// alpha_min^2 / (E[||noise||^2] / k) with E[||noise||^2] = n * sigma2 for
/// length-n complex Gaussian noise of per-entry variance sigma2.
double snr_min(const SparseSignal& s, double sigma2, int n);

}  // namespace ostsel
