#include "wcv/scalar.hpp"

#include <sstream>

namespace wcv {

std::string to_string(Mode m) {
  return m == Mode::exact ? "exact" : "float";
}

Scalar Scalar::zero(Mode m) {
  return m == Mode::exact ? Scalar(ExactComplex{0, 0})
                          : Scalar(std::complex<double>(0.0, 0.0));
}

Scalar Scalar::one(Mode m) {
  return m == Mode::exact ? Scalar(ExactComplex{1, 0})
                          : Scalar(std::complex<double>(1.0, 0.0));
}

Scalar Scalar::exact(mpq_class re, mpq_class im) {
  re.canonicalize();
  im.canonicalize();
  return Scalar(ExactComplex{std::move(re), std::move(im)});
}

Scalar Scalar::exact_int(long re, long im) {
  return Scalar(ExactComplex{mpq_class(re), mpq_class(im)});
}

static mpq_class parse_rational(const std::string& s) {
  if (s.empty()) throw validation_error("empty rational string");
  try {
    mpq_class q(s);
    if (q.get_den() == 0) throw validation_error("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw validation_error("bad rational string '" + s + "'");
  }
}

Scalar Scalar::exact_str(const std::string& re, const std::string& im) {
  return Scalar(ExactComplex{parse_rational(re), parse_rational(im)});
}

Scalar Scalar::floating(std::complex<double> z) { return Scalar(z); }
Scalar Scalar::floating(double re, double im) {
  return Scalar(std::complex<double>(re, im));
}

const ExactComplex& Scalar::exact_val() const {
  if (!is_exact()) throw mode_error("exact_val() on floating scalar");
  return std::get<ExactComplex>(v_);
}

std::complex<double> Scalar::float_val() const {
  if (is_exact()) throw mode_error("float_val() on exact scalar");
  return std::get<std::complex<double>>(v_);
}

std::complex<double> Scalar::approx() const {
  if (is_exact()) {
    const auto& e = std::get<ExactComplex>(v_);
    return {e.re.get_d(), e.im.get_d()};
  }
  return std::get<std::complex<double>>(v_);
}

double Scalar::abs2_approx() const {
  auto z = approx();
  return z.real() * z.real() + z.imag() * z.imag();
}

Scalar Scalar::to_float() const {
  if (!is_exact()) return *this;
  return Scalar(approx());
}

bool Scalar::is_zero() const {
  if (is_exact()) {
    const auto& e = std::get<ExactComplex>(v_);
    return e.re == 0 && e.im == 0;
  }
  auto z = std::get<std::complex<double>>(v_);
  return z.real() == 0.0 && z.imag() == 0.0;
}

void Scalar::check_same_mode(const Scalar& o) const {
  if (mode() != o.mode())
    throw mode_error("mixed exact/float scalar operation");
}

bool Scalar::operator==(const Scalar& o) const {
  check_same_mode(o);
  if (is_exact()) {
    const auto& a = std::get<ExactComplex>(v_);
    const auto& b = std::get<ExactComplex>(o.v_);
    return a.re == b.re && a.im == b.im;
  }
  return std::get<std::complex<double>>(v_) ==
         std::get<std::complex<double>>(o.v_);
}

Scalar Scalar::operator+(const Scalar& o) const {
  check_same_mode(o);
  if (is_exact()) {
    const auto& a = std::get<ExactComplex>(v_);
    const auto& b = std::get<ExactComplex>(o.v_);
    return Scalar(ExactComplex{a.re + b.re, a.im + b.im});
  }
  return Scalar(std::get<std::complex<double>>(v_) +
                std::get<std::complex<double>>(o.v_));
}

Scalar Scalar::operator-(const Scalar& o) const {
  check_same_mode(o);
  if (is_exact()) {
    const auto& a = std::get<ExactComplex>(v_);
    const auto& b = std::get<ExactComplex>(o.v_);
    return Scalar(ExactComplex{a.re - b.re, a.im - b.im});
  }
  return Scalar(std::get<std::complex<double>>(v_) -
                std::get<std::complex<double>>(o.v_));
}

Scalar Scalar::operator*(const Scalar& o) const {
  check_same_mode(o);
  if (is_exact()) {
    const auto& a = std::get<ExactComplex>(v_);
    const auto& b = std::get<ExactComplex>(o.v_);
    return Scalar(ExactComplex{a.re * b.re - a.im * b.im,
                               a.re * b.im + a.im * b.re});
  }
  return Scalar(std::get<std::complex<double>>(v_) *
                std::get<std::complex<double>>(o.v_));
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inv(); }

Scalar Scalar::operator-() const {
  if (is_exact()) {
    const auto& a = std::get<ExactComplex>(v_);
    return Scalar(ExactComplex{-a.re, -a.im});
  }
  return Scalar(-std::get<std::complex<double>>(v_));
}

Scalar Scalar::conj() const {
  if (is_exact()) {
    const auto& a = std::get<ExactComplex>(v_);
    return Scalar(ExactComplex{a.re, -a.im});
  }
  return Scalar(std::conj(std::get<std::complex<double>>(v_)));
}

Scalar Scalar::inv() const {
  if (is_zero()) throw singular_error("division by zero scalar");
  if (is_exact()) {
    const auto& a = std::get<ExactComplex>(v_);
    mpq_class d = a.re * a.re + a.im * a.im;
    return Scalar(ExactComplex{a.re / d, -a.im / d});
  }
  return Scalar(1.0 / std::get<std::complex<double>>(v_));
}

Scalar Scalar::div_int(long k) const {
  if (k == 0) throw singular_error("division by zero integer");
  if (is_exact()) {
    const auto& a = std::get<ExactComplex>(v_);
    return Scalar(ExactComplex{a.re / k, a.im / k});
  }
  return Scalar(std::get<std::complex<double>>(v_) / double(k));
}

static std::string rat_str(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string Scalar::re_str() const { return rat_str(exact_val().re); }
std::string Scalar::im_str() const { return rat_str(exact_val().im); }

std::string Scalar::str() const {
  std::ostringstream os;
  if (is_exact()) {
    const auto& a = std::get<ExactComplex>(v_);
    os << a.re.get_str();
    if (a.im != 0) os << (a.im > 0 ? "+" : "") << a.im.get_str() << "i";
  } else {
    auto z = std::get<std::complex<double>>(v_);
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
  }
  return os.str();
}

bool exact_rational_sqrt(const mpq_class& q, mpq_class& out) {
  if (q < 0) return false;
  mpz_class num = q.get_num(), den = q.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return false;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  out = mpq_class(rn) / mpq_class(rd);
  return true;
}

}  // namespace wcv
