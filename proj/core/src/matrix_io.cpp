#include "ostsel/matrix_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ostsel {

namespace {

double parse_real(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw std::invalid_argument("cannot parse " + what + ": '" + text + "'");
  }
  return v;
}

std::string format_real(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::complex<double> parse_complex_token(const std::string& token) {
  if (token.empty()) throw std::invalid_argument("empty matrix entry");
  if (token.back() != 'i') {
    return {parse_real(token, "matrix entry"), 0.0};
  }
  const std::string body = token.substr(0, token.size() - 1);
  // Split at the sign that starts the imaginary part; signs directly after
  // an exponent marker belong to the exponent.
  std::string::size_type pos = std::string::npos;
  for (std::string::size_type i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') &&
        body[i - 1] != 'e' && body[i - 1] != 'E') {
      pos = i;
      break;
    }
  }
  if (pos == std::string::npos) {
    // No split sign: the whole body is the imaginary part, e.g. "2i", "-0.8i".
    return {0.0, parse_real(body, "imaginary part")};
  }
  const double re = parse_real(body.substr(0, pos), "real part");
  const double im = parse_real(body.substr(pos), "imaginary part");
  return {re, im};
}

std::string format_complex_token(std::complex<double> value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", value.real(), value.imag());
  return buf;
}

DesignMatrix read_matrix(std::istream& in) {
  long n = 0, c = 0;
  std::string field;
  if (!(in >> n >> c >> field)) {
    throw std::invalid_argument("matrix header must be 'N C field'");
  }
  if (field != "real" && field != "complex") {
    throw std::invalid_argument("matrix field must be 'real' or 'complex', got '" +
                                field + "'");
  }
  if (n < 1 || c < 2) {
    throw std::invalid_argument("matrix dimensions must satisfy N >= 1, C >= 2");
  }
  const bool complex_entries = field == "complex";
  Eigen::MatrixXcd m(n, c);
  std::string token;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < c; ++j) {
      if (!(in >> token)) {
        throw std::invalid_argument("matrix body ended early at row " +
                                    std::to_string(i) + ", column " +
                                    std::to_string(j));
      }
      m(i, j) = complex_entries
                    ? parse_complex_token(token)
                    : std::complex<double>(parse_real(token, "matrix entry"), 0.0);
    }
  }
  return from_dense(std::move(m), /*normalize=*/false);
}

DesignMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const DesignMatrix& phi) {
  const bool real = phi.is_real();
  out << phi.rows() << ' ' << phi.cols() << ' ' << (real ? "real" : "complex")
      << '\n';
  for (Eigen::Index i = 0; i < phi.rows(); ++i) {
    for (Eigen::Index j = 0; j < phi.cols(); ++j) {
      if (j) out << ' ';
      const std::complex<double> v = phi.entries()(i, j);
      out << (real ? format_real(v.real()) : format_complex_token(v));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const DesignMatrix& phi) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
  write_matrix(out, phi);
  if (!out) throw std::runtime_error("failed writing matrix to '" + path + "'");
}

}  // namespace ostsel
