#ifndef DGV_POLYNOMIAL_HPP
#define DGV_POLYNOMIAL_HPP

#include <map>
#include <string>
#include <vector>

#include "dgv/rational.hpp"

namespace dgv {

// Exponent vector; length equals the number of variables of the
// enclosing polynomial.
using Monomial = std::vector<unsigned>;

inline unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (unsigned e : m) d += e;
  return d;
}

// Graded lexicographic, descending: higher total degree first, ties broken
// lexicographically with earlier variables dominating.  Using the
// descending order as the map order makes begin() the leading term.
struct GrlexDesc {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;  // lexicographic on exponent vectors
  }
};

// Multivariate polynomial over the rationals in a fixed number of
// variables.  Variable names live in the enclosing Chart; the polynomial
// only knows arity.  Invariant: no zero coefficients stored.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GrlexDesc>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int index);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // requires is_constant()
  unsigned degree() const;          // total degree; 0 for the zero polynomial

  void add_term(const Monomial& m, const Rational& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial& operator*=(const Polynomial& o) { *this = *this * o; return *this; }
  Polynomial scaled(const Rational& c) const;
  Polynomial pow(unsigned e) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial derivative(int var) const;
  Rational evaluate(const std::vector<Rational>& point) const;

  // Leading data in graded lex order.
  const Monomial& leading_monomial() const;
  const Rational& leading_coefficient() const;

  // Exact division; throws Internal if not divisible.
  Polynomial divide_exact(const Polynomial& d) const;

  // Canonical gcd: monic in graded lex order; gcd(0,0) = 0.
  static Polynomial gcd(const Polynomial& a, const Polynomial& b);

  // Degree in a single variable.
  unsigned degree_in(int var) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  int nvars_;
  TermMap terms_;
};

}  // namespace dgv

#endif
