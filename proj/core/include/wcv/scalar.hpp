#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace wcv {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct mode_error : error {
  using error::error;
};
struct size_error : error {
  using error::error;
};
struct singular_error : error {
  using error::error;
};
struct validation_error : error {
  using error::error;
};

// Arithmetic mode. Exact scalars are Gaussian rationals (pairs of
// arbitrary-precision rationals); floating scalars are complex<double>.
// The two modes never mix silently: any binary operation on mismatched
// modes throws mode_error.
enum class Mode { exact, floating };

std::string to_string(Mode m);

// Numeric tolerances for floating mode. Exact mode ignores all of them.
struct Tolerances {
  double identity = 1e-9;  // relative residual accepted as zero
  double pivot = 1e-10;    // rank decisions: pivot threshold relative to scale
  double det = 1e-12;      // invertibility floor
};

struct ExactComplex {
  mpq_class re, im;
};

class Scalar {
 public:
  Scalar() : v_(ExactComplex{0, 0}) {}

  static Scalar zero(Mode m);
  static Scalar one(Mode m);
  static Scalar exact(mpq_class re, mpq_class im = 0);
  static Scalar exact_int(long re, long im = 0);
  // Parses "p/q" or "p" rational strings.
  static Scalar exact_str(const std::string& re, const std::string& im);
  static Scalar floating(std::complex<double> z);
  static Scalar floating(double re, double im = 0.0);

  Mode mode() const { return v_.index() == 0 ? Mode::exact : Mode::floating; }
  bool is_exact() const { return mode() == Mode::exact; }

  const ExactComplex& exact_val() const;
  std::complex<double> float_val() const;

  // Value as complex<double> regardless of mode (lossy for exact).
  std::complex<double> approx() const;
  double abs2_approx() const;

  Scalar to_float() const;  // exact -> floating conversion (identity on floats)

  bool is_zero() const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  Scalar conj() const;
  Scalar inv() const;           // throws singular_error on zero
  Scalar div_int(long k) const; // exact division by a nonzero integer

  // String forms used by JSON ("p/q" pairs in exact mode).
  std::string re_str() const;
  std::string im_str() const;

  std::string str() const;  // human-readable, for diagnostics

 private:
  explicit Scalar(ExactComplex e) : v_(std::move(e)) {}
  explicit Scalar(std::complex<double> z) : v_(z) {}
  void check_same_mode(const Scalar& o) const;

  std::variant<ExactComplex, std::complex<double>> v_;
};

// tr(XY) building block; |a| when the square root is rational.
// Returns true and sets out when |q| = sqrt(num/den) is exactly rational.
bool exact_rational_sqrt(const mpq_class& q, mpq_class& out);

}  // namespace wcv
