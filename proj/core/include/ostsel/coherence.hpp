#pragma once

#include "ostsel/design.hpp"

namespace ostsel {

/// Coherence measures of a design matrix plus the verdict of the two-part
/// coherence property:
///   CP-1:  mu <= 1/sqrt(10 log C)
///   CP-2:  nu <= 12 mu / sqrt(N)
/// Comparisons are non-strict and use no tolerance slack. Logarithms are
/// natural throughout.
struct CoherenceReport {
  double mu = 0.0;         ///< worst-case coherence
  double nu = 0.0;         ///< average coherence
  double cp1_bound = 0.0;  ///< 1/sqrt(10 log C)
  double cp2_bound = 0.0;  ///< 12 mu / sqrt(N)
  bool cp1_pass = false;
  bool cp2_pass = false;
  bool overall_pass = false;
};

/// max_{i != j} |<phi_i, phi_j>| == ||Phi^H Phi - I||_max.
double worst_case_coherence(const GramDeviation& dev);
double worst_case_coherence(const DesignMatrix& phi);

/// (1/(C-1)) max_i |sum_{j != i} <phi_i, phi_j>|; the magnitude of the
/// complex row sum, not the sum of magnitudes. Equals
/// ||(Phi^H Phi - I) 1||_inf / (C-1).
double average_coherence(const GramDeviation& dev);
double average_coherence(const DesignMatrix& phi);

/// Computes mu and nu from a single Gram-deviation pass and evaluates both
/// coherence property conditions.
CoherenceReport check_coherence_property(const GramDeviation& dev,
                                         Eigen::Index n);
CoherenceReport check_coherence_property(const DesignMatrix& phi);

}  // namespace ostsel
