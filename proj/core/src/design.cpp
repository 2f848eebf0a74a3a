#include "ostsel/design.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ostsel/rng.hpp"

namespace ostsel {

namespace {

void check_dims(Eigen::Index n, Eigen::Index c) {
  if (n < 1) throw std::invalid_argument("design matrix needs at least 1 row");
  if (c < 2) {
    throw std::invalid_argument("design matrix needs at least 2 columns, got " +
                                std::to_string(c));
  }
}

}  // namespace

DesignMatrix::DesignMatrix(Eigen::MatrixXcd entries, bool normalize)
    : entries_(std::move(entries)) {
  check_dims(entries_.rows(), entries_.cols());
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    const double norm = entries_.col(j).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw std::invalid_argument("degenerate column " + std::to_string(j) +
                                  ": zero or non-finite norm");
    }
    if (normalize) {
      entries_.col(j) /= norm;
    } else if (std::abs(norm - 1.0) > kUnitNormTol) {
      throw std::invalid_argument(
          "column " + std::to_string(j) + " has norm " + std::to_string(norm) +
          ", outside unit-norm tolerance");
    }
  }
  is_real_ = (entries_.imag().array() == 0.0).all();
}

GramDeviation::GramDeviation(const DesignMatrix& phi) {
  const Eigen::Index c = phi.cols();
  if (phi.is_real()) {
    // Real data: a real rank update is ~4x cheaper than the complex one.
    const Eigen::MatrixXd real_part = phi.entries().real();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(c, c);
    g.selfadjointView<Eigen::Lower>().rankUpdate(real_part.adjoint());
    g = g.selfadjointView<Eigen::Lower>();
    values_ = g.cast<std::complex<double>>();
  } else {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(c, c);
    g.selfadjointView<Eigen::Lower>().rankUpdate(phi.entries().adjoint());
    values_ = g.selfadjointView<Eigen::Lower>();
  }
  for (Eigen::Index i = 0; i < c; ++i) {
    const double d = values_(i, i).real() - 1.0;
    if (std::abs(d) > kUnitNormTol) {
      throw std::logic_error("gram deviation diagonal exceeds tolerance");
    }
    values_(i, i) = std::complex<double>(d, 0.0);
  }
}

DesignMatrix gen_gaussian(int n, int c, std::uint64_t seed) {
  check_dims(n, c);
  Rng rng(seed);
  Eigen::MatrixXcd m(n, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, j) = std::complex<double>(rng.normal(), 0.0);
    }
  }
  return DesignMatrix(std::move(m), /*normalize=*/true);
}

DesignMatrix gen_rademacher(int n, int c, std::uint64_t seed) {
  check_dims(n, c);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd m(n, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, j) = std::complex<double>(rng.sign() * scale, 0.0);
    }
  }
  return DesignMatrix(std::move(m), /*normalize=*/false);
}

DesignMatrix from_dense(Eigen::MatrixXcd entries, bool normalize) {
  return DesignMatrix(std::move(entries), normalize);
}

GramDeviation gram_deviation(const DesignMatrix& phi) {
  return GramDeviation(phi);
}

}  // namespace ostsel
