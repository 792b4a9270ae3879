#ifndef DGV_RATFUNC_HPP
#define DGV_RATFUNC_HPP

#include <map>
#include <string>
#include <vector>

#include "dgv/polynomial.hpp"

namespace dgv {

// Rational function num/den over Q in a fixed number of variables.
// Canonical form: gcd(num, den) = 1, den monic in graded lex order,
// num = 0 implies den = 1.  The coefficient field for all geometric data.
class RationalFunction {
 public:
  explicit RationalFunction(int nvars = 0)
      : num_(nvars), den_(Polynomial::constant(nvars, Rational(1))) {}
  RationalFunction(Polynomial num, Polynomial den);

  static RationalFunction constant(int nvars, const Rational& c) {
    return RationalFunction(Polynomial::constant(nvars, c),
                            Polynomial::constant(nvars, Rational(1)));
  }
  static RationalFunction variable(int nvars, int index) {
    return RationalFunction(Polynomial::variable(nvars, index),
                            Polynomial::constant(nvars, Rational(1)));
  }
  static RationalFunction from_polynomial(Polynomial p) {
    int n = p.nvars();
    return RationalFunction(std::move(p), Polynomial::constant(n, Rational(1)));
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  int nvars() const { return num_.nvars(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }

  RationalFunction pow(unsigned e) const;
  RationalFunction scaled(const Rational& c) const;

  // Equality by cross-multiplied polynomial identity on reduced forms.
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  // Exact quotient-rule derivative, canonical form.
  RationalFunction derivative(int var) const;

  // Exact composition; throws IdenticallyZeroDenominator when the
  // substituted denominator vanishes identically.  out_nvars must be
  // supplied when the assignment is empty (composition with a map from a
  // 0-dimensional chart).
  RationalFunction substitute(const std::vector<RationalFunction>& assignment,
                              int out_nvars = -1) const;

  // Exact evaluation; throws PoleAtPoint when the denominator vanishes.
  Rational evaluate(const std::vector<Rational>& point) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  void reduce();
  Polynomial num_, den_;
};

inline RationalFunction rf_zero(int nvars) { return RationalFunction(nvars); }
inline RationalFunction rf_one(int nvars) { return RationalFunction::constant(nvars, Rational(1)); }

}  // namespace dgv

#endif
