#include "dgv/ratfunc.hpp"

namespace dgv {

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero())
    throw Error(ErrorKind::DivisionByZeroPolynomial, "zero denominator polynomial");
  reduce();
}

void RationalFunction::reduce() {
  if (num_.is_zero()) {
    den_ = Polynomial::constant(num_.nvars(), Rational(1));
    return;
  }
  Polynomial g = Polynomial::gcd(num_, den_);
  if (!(g.is_constant() && g.constant_value().is_one())) {
    num_ = num_.divide_exact(g);
    den_ = den_.divide_exact(g);
  }
  Rational lc = den_.leading_coefficient();
  if (!lc.is_one()) {
    Rational inv = lc.inverse();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  reduce();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
  num_ = num_ * o.den_ - o.num_ * den_;
  den_ = den_ * o.den_;
  reduce();
  return *this;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  reduce();
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  if (o.is_zero())
    throw Error(ErrorKind::DivisionByZeroPolynomial, "division by the zero function");
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  reduce();
  return *this;
}

RationalFunction RationalFunction::pow(unsigned e) const {
  RationalFunction r = rf_one(nvars());
  RationalFunction b = *this;
  while (e > 0) {
    if (e & 1u) r *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return r;
}

RationalFunction RationalFunction::scaled(const Rational& c) const {
  RationalFunction r = *this;
  r.num_ = r.num_.scaled(c);
  if (c.is_zero()) r.den_ = Polynomial::constant(nvars(), Rational(1));
  return r;
}

RationalFunction RationalFunction::derivative(int var) const {
  Polynomial n = num_.derivative(var) * den_ - num_ * den_.derivative(var);
  Polynomial d = den_ * den_;
  return RationalFunction(std::move(n), std::move(d));
}

namespace {

RationalFunction substitute_poly(const Polynomial& p,
                                 const std::vector<RationalFunction>& a,
                                 int out_nvars) {
  RationalFunction acc(out_nvars);
  for (const auto& [m, c] : p.terms()) {
    RationalFunction t = RationalFunction::constant(out_nvars, c);
    for (size_t i = 0; i < m.size(); ++i)
      if (m[i] > 0) t *= a[i].pow(m[i]);
    acc += t;
  }
  return acc;
}

}  // namespace

RationalFunction RationalFunction::substitute(const std::vector<RationalFunction>& assignment,
                                              int out_nvars) const {
  if (static_cast<int>(assignment.size()) != nvars())
    throw Error(ErrorKind::Internal, "substitution arity mismatch");
  if (out_nvars < 0) out_nvars = assignment.empty() ? 0 : assignment[0].nvars();
  RationalFunction n = substitute_poly(num_, assignment, out_nvars);
  RationalFunction d = substitute_poly(den_, assignment, out_nvars);
  if (d.is_zero())
    throw Error(ErrorKind::IdenticallyZeroDenominator,
                "substituted denominator vanishes identically");
  return n / d;
}

Rational RationalFunction::evaluate(const std::vector<Rational>& point) const {
  Rational d = den_.evaluate(point);
  if (d.is_zero()) throw Error(ErrorKind::PoleAtPoint, "denominator vanishes at sample point");
  return num_.evaluate(point) / d;
}

std::string RationalFunction::str(const std::vector<std::string>& names) const {
  if (den_.is_constant() && den_.constant_value().is_one()) return num_.str(names);
  std::string n = num_.str(names);
  std::string d = den_.str(names);
  bool n_paren = num_.terms().size() > 1;
  bool d_paren = den_.terms().size() > 1;
  std::string out;
  if (n_paren) out = "(" + n + ")"; else out = n;
  out += " / ";
  if (d_paren) out += "(" + d + ")"; else out += d;
  return out;
}

}  // namespace dgv
