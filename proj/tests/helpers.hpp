#pragma once

#include <string>
#include <vector>

#include "wcv/json_io.hpp"
#include "wcv/verify.hpp"

namespace th {

using namespace wcv;

inline Scalar qi(long re, long im = 0) { return Scalar::exact_int(re, im); }
inline Scalar qs(const std::string& re, const std::string& im = "0") {
  return Scalar::exact_str(re, im);
}

// n x n exact matrix from row-major integer entries.
inline Matrix mi(int n, const std::vector<long>& e) {
  Matrix m(n, n, Mode::exact);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = qi(e[std::size_t(i) * n + j]);
  return m;
}

// n x n exact matrix from row-major "p/q" entries.
inline Matrix mr(int n, const std::vector<std::string>& e) {
  Matrix m(n, n, Mode::exact);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = qs(e[std::size_t(i) * n + j]);
  return m;
}

inline Matrix di(const std::vector<long>& d) {
  std::vector<Scalar> s;
  for (long v : d) s.push_back(qi(v));
  return Matrix::diag(s);
}

inline Matrix dr(const std::vector<std::string>& d) {
  std::vector<Scalar> s;
  for (const auto& v : d) s.push_back(qs(v));
  return Matrix::diag(s);
}

inline bool close(const Matrix& a, const Matrix& b, double tol = 1e-9) {
  return (a - b).max_abs() <= tol;
}

inline bool close_s(const Scalar& a, const Scalar& b, double tol = 1e-9) {
  return std::abs((a - b).approx()) <= tol;
}

}  // namespace th
