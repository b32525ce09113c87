#pragma once

#include <vector>

#include "wcv/scalar.hpp"

namespace wcv {

// Dense matrix over Scalar. Mostly used square (group and Lie algebra
// elements in gl_n) but supports rectangular shapes for the linear systems
// in kernel/rank computations. All entries share one mode.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0), mode_(Mode::exact) {}
  Matrix(int rows, int cols, Mode mode);

  static Matrix zeros(int n, Mode mode) { return Matrix(n, n, mode); }
  static Matrix identity(int n, Mode mode);
  static Matrix scalar_mult_of_identity(int n, const Scalar& s);
  // E_kl, 0-based indices.
  static Matrix elementary(int n, Mode mode, int k, int l);
  static Matrix diag(const std::vector<Scalar>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int n() const;  // square size; throws if rectangular
  Mode mode() const { return mode_; }

  Scalar& at(int i, int j);
  const Scalar& at(int i, int j) const;

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(const Scalar& s) const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix transpose() const;
  Scalar trace() const;

  // Gauss-Jordan inverse; exact mode throws singular_error on singular
  // input, floating mode throws when a pivot falls below tol.pivot times
  // the matrix scale.
  Matrix inverse(const Tolerances& tol = {}) const;
  Scalar det() const;
  bool invertible(const Tolerances& tol = {}) const;

  Matrix to_float() const;

  bool is_zero() const;            // exact zero (all entries exactly 0)
  bool is_identity() const;
  double max_abs() const;          // max |entry| as double
  double frobenius_approx() const;

  std::string str() const;

 private:
  int rows_, cols_;
  Mode mode_;
  std::vector<Scalar> a_;
  void check_compat(const Matrix& o, const char* op) const;
};

Matrix conj_by(const Matrix& g, const Matrix& x);      // g x g^-1
Matrix conj_by_inv(const Matrix& g, const Matrix& x);  // g^-1 x g

// Nondegenerate trace pairing (X, Y) = tr(XY) on gl_n.
Scalar trace_form(const Matrix& x, const Matrix& y);

// Commutator [x, y] = xy - yx.
Matrix bracket(const Matrix& x, const Matrix& y);

using LieElem = Matrix;

// Invertible matrix; invertibility is checked at construction and the
// inverse is cached (points of the spaces are built from these, and the
// moment and two-form formulas use inverses constantly).
class GroupElem {
 public:
  explicit GroupElem(Matrix m, const Tolerances& tol = {});
  static GroupElem identity(int n, Mode mode);

  const Matrix& mat() const { return m_; }
  const Matrix& inv() const { return inv_; }
  int n() const { return m_.rows(); }
  Mode mode() const { return m_.mode(); }

  GroupElem inverse() const;
  friend GroupElem operator*(const GroupElem& a, const GroupElem& b);
  bool operator==(const GroupElem& o) const { return m_ == o.m_; }

 private:
  GroupElem(Matrix m, Matrix inv) : m_(std::move(m)), inv_(std::move(inv)) {}
  Matrix m_, inv_;
};

// Forward-mode derivative bundle: value and directional derivative of a
// matrix-valued expression. Composite maps are differentiated by
// propagating these through products and inverses, never symbolically.
struct Jet {
  Matrix val, der;
};

Jet jet_const(const Matrix& m);
// Slot moving with right-logarithmic velocity xi: d/dt g(t) = xi g.
Jet jet_slot(const Matrix& g, const Matrix& xi);
Jet jet_mul(const Jet& a, const Jet& b);
Jet jet_inv(const Jet& a);
Jet jet_add(const Jet& a, const Jet& b);
// d(g x g^-1) for jets g, x.
Jet jet_conj(const Jet& g, const Jet& x);

}  // namespace wcv
