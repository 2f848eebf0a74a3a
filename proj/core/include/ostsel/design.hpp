#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace ostsel {

/// Relative tolerance on column norms: loose enough for accumulated rounding
/// at C = 1e4 columns, tight enough to reject unnormalized input.
inline constexpr double kUnitNormTol = 1e-9;

/// N x C complex design matrix with unit-norm columns.
///
/// Immutable after construction and safe to share across threads. Real
/// matrices are stored with zero imaginary parts; the all-real case is
/// tracked so that Gram computations can take a cheaper path.
class DesignMatrix {
 public:
  /// Validating constructor. With `normalize` set, columns are rescaled to
  /// unit norm; otherwise they must already satisfy kUnitNormTol.
  /// Throws std::invalid_argument on a zero column, a norm violation, or
  /// dimensions outside N >= 1, C >= 2.
  DesignMatrix(Eigen::MatrixXcd entries, bool normalize);

  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  bool is_real() const { return is_real_; }

 private:
  Eigen::MatrixXcd entries_;
  bool is_real_ = false;
};

/// C x C Hermitian matrix equal to Phi^H * Phi - I, computed from one
/// triangle and mirrored, so entry(i,j) == conj(entry(j,i)) exactly.
/// The diagonal is forced real and stays within kUnitNormTol of zero.
class GramDeviation {
 public:
  explicit GramDeviation(const DesignMatrix& phi);

  Eigen::Index size() const { return values_.rows(); }
  const Eigen::MatrixXcd& values() const { return values_; }

 private:
  Eigen::MatrixXcd values_;
};

/// i.i.d. real standard normal entries, columns rescaled to unit norm.
/// Deterministic in (n, c, seed).
DesignMatrix gen_gaussian(int n, int c, std::uint64_t seed);

/// Entries +-1/sqrt(n) equiprobable i.i.d.; columns unit norm by
/// construction. Deterministic in (n, c, seed).
DesignMatrix gen_rademacher(int n, int c, std::uint64_t seed);

/// Wraps a dense array as a design matrix; see the DesignMatrix constructor
/// for validation rules.
DesignMatrix from_dense(Eigen::MatrixXcd entries, bool normalize);

GramDeviation gram_deviation(const DesignMatrix& phi);

}  // namespace ostsel
