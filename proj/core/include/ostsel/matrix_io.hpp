#pragma once

#include <complex>
#include <iosfwd>
#include <string>

#include "ostsel/design.hpp"

namespace ostsel {

/// Matrix text format: a header line `N C field` with field in
/// {real, complex}, followed by N lines of C whitespace-separated entries.
/// Complex entries are written `a+bi` with no spaces. Values carry 17
/// significant digits so files round-trip doubles exactly.

DesignMatrix read_matrix(std::istream& in);
DesignMatrix read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const DesignMatrix& phi);
void write_matrix_file(const std::string& path, const DesignMatrix& phi);

/// Parses `a+bi` (both parts mandatory, 'i' suffix) or a bare real token.
std::complex<double> parse_complex_token(const std::string& token);
std::string format_complex_token(std::complex<double> value);

}  // namespace ostsel
