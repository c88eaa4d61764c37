#include "fracsense/text_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracsense/errors.hpp"

namespace fracsense {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_row(std::ostream& os, const double* data, Eigen::Index count) {
  for (Eigen::Index j = 0; j < count; ++j) {
    if (j > 0) os << ' ';
    os << format_double(data[j]);
  }
  os << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // Next non-blank line split into tokens; ParseError at end of input.
  std::vector<std::string> next(const char* expecting) {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      if (!tokens.empty()) return tokens;
    }
    throw ParseError(line_no_ + 1, std::string("unexpected end of input, expected ") + expecting);
  }

  void expect_end() {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ParseError(line_no_, "trailing content after data");
    }
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& is_;
  std::size_t line_no_ = 0;
};

double parse_real(const std::string& tok, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw ParseError(line, "not a number: '" + tok + "'");
  if (!std::isfinite(v) || errno == ERANGE) throw ParseError(line, "non-finite value: '" + tok + "'");
  return v;
}

Eigen::Index parse_dim(const std::string& tok, std::size_t line) {
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0' || v < 1)
    throw ParseError(line, "expected a positive integer dimension, got '" + tok + "'");
  return static_cast<Eigen::Index>(v);
}

void read_row(LineReader& reader, double* out, Eigen::Index count) {
  const auto tokens = reader.next("a row of values");
  if (static_cast<Eigen::Index>(tokens.size()) != count)
    throw ParseError(reader.line(), "expected " + std::to_string(count) + " values, found " +
                                        std::to_string(tokens.size()));
  for (Eigen::Index j = 0; j < count; ++j)
    out[j] = parse_real(tokens[static_cast<std::size_t>(j)], reader.line());
}

template <typename F>
auto with_input(const std::string& path, F&& f) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  try {
    return f(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

template <typename F>
void with_output(const std::string& path, F&& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  f(out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void write_matrix(std::ostream& os, const Matrix& A) {
  os << A.rows() << ' ' << A.cols() << '\n';
  for (Eigen::Index i = 0; i < A.rows(); ++i) write_row(os, A.row(i).data(), A.cols());
}

void write_vector(std::ostream& os, const Vector& v) {
  os << v.size() << '\n';
  write_row(os, v.data(), v.size());
}

Matrix read_matrix(std::istream& is) {
  LineReader reader(is);
  const auto header = reader.next("matrix header 'm n'");
  if (header.size() != 2) throw ParseError(reader.line(), "matrix header must be 'm n'");
  const Eigen::Index m = parse_dim(header[0], reader.line());
  const Eigen::Index n = parse_dim(header[1], reader.line());
  Matrix A(m, n);
  for (Eigen::Index i = 0; i < m; ++i) read_row(reader, A.row(i).data(), n);
  reader.expect_end();
  return A;
}

Vector read_vector(std::istream& is) {
  LineReader reader(is);
  const auto header = reader.next("vector header 'n'");
  if (header.size() != 1) throw ParseError(reader.line(), "vector header must be 'n'");
  const Eigen::Index n = parse_dim(header[0], reader.line());
  Vector v(n);
  read_row(reader, v.data(), n);
  reader.expect_end();
  return v;
}

void save_matrix(const std::string& path, const Matrix& A) {
  with_output(path, [&](std::ostream& os) { write_matrix(os, A); });
}

void save_vector(const std::string& path, const Vector& v) {
  with_output(path, [&](std::ostream& os) { write_vector(os, v); });
}

Matrix load_matrix(const std::string& path) {
  return with_input(path, [](std::istream& is) { return read_matrix(is); });
}

Vector load_vector(const std::string& path) {
  return with_input(path, [](std::istream& is) { return read_vector(is); });
}

}  // namespace fracsense
