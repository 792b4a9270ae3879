#ifndef DGV_RATIONAL_HPP
#define DGV_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

#include "dgv/error.hpp"

namespace dgv {

// Exact rational number over arbitrary-precision integers.  Always kept
// canonical: gcd(|num|, den) = 1 and den > 0 (mpq_class maintains this
// after canonicalize()).
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}
  Rational(long n, unsigned long d) : v_(n, d) {
    if (d == 0) throw Error(ErrorKind::DivisionByZeroPolynomial, "rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rational(const mpz_class& z) : v_(z) {}

  // Parses "123" or "-4/7".
  static Rational from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
      throw Error(ErrorKind::Syntax, "bad rational literal '" + s + "'");
    if (q.get_den() == 0)
      throw Error(ErrorKind::DivisionByZeroPolynomial, "rational literal '" + s + "'");
    q.canonicalize();
    return Rational(q);
  }

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZeroPolynomial, "division by zero rational");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }

  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  Rational inverse() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZeroPolynomial, "inverse of zero");
    return Rational(mpq_class(1) / v_);
  }

  std::string str() const { return v_.get_str(); }

 private:
  mpq_class v_;
};

inline mpz_class gcd_z(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline mpz_class lcm_z(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace dgv

#endif
