#include "wcv/matrix.hpp"

#include <cmath>
#include <sstream>

namespace wcv {

Matrix::Matrix(int rows, int cols, Mode mode)
    : rows_(rows), cols_(cols), mode_(mode) {
  if (rows < 0 || cols < 0) throw size_error("negative matrix dimension");
  a_.assign(size_t(rows) * cols, Scalar::zero(mode));
}

Matrix Matrix::identity(int n, Mode mode) {
  Matrix m(n, n, mode);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(mode);
  return m;
}

Matrix Matrix::scalar_mult_of_identity(int n, const Scalar& s) {
  Matrix m(n, n, s.mode());
  for (int i = 0; i < n; ++i) m.at(i, i) = s;
  return m;
}

Matrix Matrix::elementary(int n, Mode mode, int k, int l) {
  Matrix m(n, n, mode);
  m.at(k, l) = Scalar::one(mode);
  return m;
}

Matrix Matrix::diag(const std::vector<Scalar>& d) {
  if (d.empty()) throw size_error("empty diagonal");
  Matrix m(int(d.size()), int(d.size()), d[0].mode());
  for (size_t i = 0; i < d.size(); ++i) m.at(int(i), int(i)) = d[i];
  return m;
}

int Matrix::n() const {
  if (rows_ != cols_) throw size_error("matrix is not square");
  return rows_;
}

Scalar& Matrix::at(int i, int j) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw size_error("matrix index out of range");
  return a_[size_t(i) * cols_ + j];
}

const Scalar& Matrix::at(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw size_error("matrix index out of range");
  return a_[size_t(i) * cols_ + j];
}

void Matrix::check_compat(const Matrix& o, const char* op) const {
  if (mode_ != o.mode_)
    throw mode_error(std::string("mixed exact/float matrices in ") + op);
}

Matrix Matrix::operator+(const Matrix& o) const {
  check_compat(o, "+");
  if (rows_ != o.rows_ || cols_ != o.cols_) throw size_error("shape mismatch in +");
  Matrix r(rows_, cols_, mode_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  check_compat(o, "-");
  if (rows_ != o.rows_ || cols_ != o.cols_) throw size_error("shape mismatch in -");
  Matrix r(rows_, cols_, mode_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  check_compat(o, "*");
  if (cols_ != o.rows_) throw size_error("shape mismatch in *");
  Matrix r(rows_, o.cols_, mode_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Scalar& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j)
        r.at(i, j) += aik * o.at(k, j);
    }
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r(rows_, cols_, mode_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
  return r;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Matrix r(rows_, cols_, mode_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  check_compat(o, "==");
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (size_t i = 0; i < a_.size(); ++i)
    if (a_[i] != o.a_[i]) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_, mode_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

Scalar Matrix::trace() const {
  Scalar t = Scalar::zero(mode_);
  for (int i = 0; i < n(); ++i) t += at(i, i);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& s : a_) m = std::max(m, std::sqrt(s.abs2_approx()));
  return m;
}

double Matrix::frobenius_approx() const {
  double m = 0.0;
  for (const auto& s : a_) m += s.abs2_approx();
  return std::sqrt(m);
}

Matrix Matrix::inverse(const Tolerances& tol) const {
  int nn = n();
  Matrix a = *this;
  Matrix inv = identity(nn, mode_);
  double scale = std::max(1.0, max_abs());
  for (int col = 0; col < nn; ++col) {
    int piv = -1;
    if (mode_ == Mode::exact) {
      for (int r = col; r < nn; ++r)
        if (!a.at(r, col).is_zero()) { piv = r; break; }
    } else {
      double best = 0.0;
      for (int r = col; r < nn; ++r) {
        double v = a.at(r, col).abs2_approx();
        if (v > best) { best = v; piv = r; }
      }
      if (piv >= 0 && std::sqrt(best) <= tol.pivot * scale) piv = -1;
    }
    if (piv < 0) throw singular_error("singular matrix in inverse()");
    if (piv != col)
      for (int j = 0; j < nn; ++j) {
        std::swap(a.at(piv, j), a.at(col, j));
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    Scalar d = a.at(col, col).inv();
    for (int j = 0; j < nn; ++j) {
      a.at(col, j) *= d;
      inv.at(col, j) *= d;
    }
    for (int r = 0; r < nn; ++r) {
      if (r == col) continue;
      Scalar f = a.at(r, col);
      if (f.is_zero()) continue;
      for (int j = 0; j < nn; ++j) {
        a.at(r, j) -= f * a.at(col, j);
        inv.at(r, j) -= f * inv.at(col, j);
      }
    }
  }
  return inv;
}

Scalar Matrix::det() const {
  int nn = n();
  Matrix a = *this;
  Scalar d = Scalar::one(mode_);
  for (int col = 0; col < nn; ++col) {
    int piv = -1;
    if (mode_ == Mode::exact) {
      for (int r = col; r < nn; ++r)
        if (!a.at(r, col).is_zero()) { piv = r; break; }
    } else {
      double best = 0.0;
      for (int r = col; r < nn; ++r) {
        double v = a.at(r, col).abs2_approx();
        if (v > best) { best = v; piv = r; }
      }
      if (best == 0.0) piv = -1;
    }
    if (piv < 0) return Scalar::zero(mode_);
    if (piv != col) {
      for (int j = 0; j < nn; ++j) std::swap(a.at(piv, j), a.at(col, j));
      d = -d;
    }
    d *= a.at(col, col);
    Scalar p = a.at(col, col).inv();
    for (int r = col + 1; r < nn; ++r) {
      Scalar f = a.at(r, col) * p;
      if (f.is_zero()) continue;
      for (int j = col; j < nn; ++j) a.at(r, j) -= f * a.at(col, j);
    }
  }
  return d;
}

bool Matrix::invertible(const Tolerances& tol) const {
  Scalar d = det();
  if (mode_ == Mode::exact) return !d.is_zero();
  double scale = std::max(1.0, max_abs());
  double floor = tol.det;
  for (int i = 0; i < n(); ++i) floor *= scale;
  return std::sqrt(d.abs2_approx()) > floor;
}

Matrix Matrix::to_float() const {
  Matrix r(rows_, cols_, Mode::floating);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j).to_float();
  return r;
}

bool Matrix::is_zero() const {
  for (const auto& s : a_)
    if (!s.is_zero()) return false;
  return true;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  return *this == identity(rows_, mode_);
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << at(i, j).str();
  }
  os << "]";
  return os.str();
}

Matrix conj_by(const Matrix& g, const Matrix& x) { return g * x * g.inverse(); }
Matrix conj_by_inv(const Matrix& g, const Matrix& x) { return g.inverse() * x * g; }

Scalar trace_form(const Matrix& x, const Matrix& y) {
  if (x.mode() != y.mode()) throw mode_error("mixed modes in trace_form");
  if (x.cols() != y.rows() || x.rows() != y.cols())
    throw size_error("shape mismatch in trace_form");
  Scalar t = Scalar::zero(x.mode());
  for (int i = 0; i < x.rows(); ++i)
    for (int k = 0; k < x.cols(); ++k) t += x.at(i, k) * y.at(k, i);
  return t;
}

Matrix bracket(const Matrix& x, const Matrix& y) { return x * y - y * x; }

GroupElem::GroupElem(Matrix m, const Tolerances& tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw size_error("group element must be square");
  try {
    inv_ = m_.inverse(tol);
  } catch (const singular_error&) {
    throw singular_error("group element is singular: " + m_.str());
  }
}

GroupElem GroupElem::identity(int n, Mode mode) {
  Matrix i = Matrix::identity(n, mode);
  return GroupElem(i, i);
}

GroupElem GroupElem::inverse() const { return GroupElem(inv_, m_); }

GroupElem operator*(const GroupElem& a, const GroupElem& b) {
  return GroupElem(a.m_ * b.m_, b.inv_ * a.inv_);
}

Jet jet_const(const Matrix& m) {
  return {m, Matrix(m.rows(), m.cols(), m.mode())};
}

Jet jet_slot(const Matrix& g, const Matrix& xi) { return {g, xi * g}; }

Jet jet_mul(const Jet& a, const Jet& b) {
  return {a.val * b.val, a.der * b.val + a.val * b.der};
}

Jet jet_inv(const Jet& a) {
  Matrix inv = a.val.inverse();
  return {inv, -(inv * a.der * inv)};
}

Jet jet_add(const Jet& a, const Jet& b) {
  return {a.val + b.val, a.der + b.der};
}

Jet jet_conj(const Jet& g, const Jet& x) {
  return jet_mul(jet_mul(g, x), jet_inv(g));
}

}  // namespace wcv
