#include "dgv/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace dgv {

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  if (!c.is_zero()) p.terms_.emplace(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[index] = 1;
  p.terms_.emplace(m, Rational(1));
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  return terms_.begin()->second;
}

unsigned Polynomial::degree() const {
  if (terms_.empty()) return 0;
  return total_degree(terms_.begin()->first);
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r(a.nvars_);
  Monomial m(a.nvars_, 0);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r(nvars_);
  if (c.is_zero()) return r;
  for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial r = constant(nvars_, Rational(1));
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) r *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return r;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    r.add_term(d, c * Rational(static_cast<long>(m[var])));
  }
  return r;
}

Rational Polynomial::evaluate(const std::vector<Rational>& point) const {
  Rational acc(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i) {
      for (unsigned e = 0; e < m[i]; ++e) t *= point[i];
    }
    acc += t;
  }
  return acc;
}

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw Error(ErrorKind::Internal, "leading term of zero polynomial");
  return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw Error(ErrorKind::Internal, "leading term of zero polynomial");
  return terms_.begin()->second;
}

namespace {

bool monomial_divides(const Monomial& a, const Monomial& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

}  // namespace

Polynomial Polynomial::divide_exact(const Polynomial& d) const {
  if (d.is_zero()) throw Error(ErrorKind::Internal, "exact division by zero polynomial");
  Polynomial q(nvars_);
  Polynomial r = *this;
  const Monomial& lmd = d.leading_monomial();
  const Rational& lcd = d.leading_coefficient();
  while (!r.is_zero()) {
    const Monomial& lmr = r.leading_monomial();
    if (!monomial_divides(lmd, lmr))
      throw Error(ErrorKind::Internal, "polynomial not exactly divisible");
    Monomial qm(nvars_);
    for (int i = 0; i < nvars_; ++i) qm[i] = lmr[i] - lmd[i];
    Rational qc = r.leading_coefficient() / lcd;
    Polynomial t(nvars_);
    t.terms_.emplace(qm, qc);
    q += t;
    r -= t * d;
  }
  return q;
}

unsigned Polynomial::degree_in(int var) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
  return d;
}

// ---------------------------------------------------------------------------
// gcd via primitive pseudo-remainder sequences over the integers

namespace {

// Scale to integer coefficients (the result differs from the input by a
// positive rational factor, irrelevant for gcd up to units).
Polynomial clear_denominators(const Polynomial& p) {
  mpz_class l(1);
  for (const auto& [m, c] : p.terms()) l = lcm_z(l, c.denominator());
  Polynomial r(p.nvars());
  for (const auto& [m, c] : p.terms())
    r.add_term(m, c * Rational(mpz_class(l)));
  return r;
}

mpz_class integer_content(const Polynomial& p) {
  mpz_class g(0);
  for (const auto& [m, c] : p.terms()) g = gcd_z(g, c.numerator());
  return g;
}

// Writes p as sum coeff[k] * v^k, coefficients being polynomials with the
// exponent of v cleared.
std::map<unsigned, Polynomial> coeffs_in(const Polynomial& p, int v) {
  std::map<unsigned, Polynomial> out;
  for (const auto& [m, c] : p.terms()) {
    Monomial q = m;
    unsigned e = q[v];
    q[v] = 0;
    auto it = out.find(e);
    if (it == out.end()) it = out.emplace(e, Polynomial(p.nvars())).first;
    it->second.add_term(q, c);
  }
  return out;
}

Polynomial times_power(const Polynomial& p, int v, unsigned e) {
  Polynomial r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    Monomial q = m;
    q[v] += e;
    r.add_term(q, c);
  }
  return r;
}

Polynomial gcd_int(const Polynomial& a, const Polynomial& b);

// Content of p with respect to variable v: gcd of the v-coefficients.
Polynomial content_in(const Polynomial& p, int v) {
  Polynomial g(p.nvars());
  for (const auto& [e, c] : coeffs_in(p, v)) g = gcd_int(g, c);
  return g;
}

// Pseudo-remainder of a by b in variable v; both with deg_v(b) >= 1.
Polynomial prem(const Polynomial& a, const Polynomial& b, int v) {
  unsigned db = b.degree_in(v);
  auto bc = coeffs_in(b, v);
  Polynomial lb = bc.at(db);
  Polynomial r = a;
  long e = static_cast<long>(a.degree_in(v)) - static_cast<long>(db) + 1;
  while (!r.is_zero() && r.degree_in(v) >= db) {
    unsigned dr = r.degree_in(v);
    Polynomial lr = coeffs_in(r, v).at(dr);
    r = r * lb - times_power(lr * b, v, dr - db);
    e -= 1;
  }
  if (e > 0) r = r * lb.pow(static_cast<unsigned>(e));
  return r;
}

Polynomial primitive_part(const Polynomial& p, int v) {
  if (p.is_zero()) return p;
  Polynomial c = content_in(p, v);
  return p.divide_exact(c);
}

// Normalizes an integer polynomial to have a positive integer leading
// coefficient and content 1.
Polynomial normalize_int(const Polynomial& p) {
  if (p.is_zero()) return p;
  mpz_class c = integer_content(p);
  if (p.leading_coefficient().sign() < 0) c = -c;
  Polynomial r(p.nvars());
  for (const auto& [m, k] : p.terms()) r.add_term(m, k / Rational(c));
  return r;
}

// gcd of integer-coefficient polynomials, primitive PRS.
Polynomial gcd_int(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return normalize_int(b);
  if (b.is_zero()) return normalize_int(a);
  int v = -1;
  for (int i = a.nvars() - 1; i >= 0; --i) {
    if (a.degree_in(i) > 0 || b.degree_in(i) > 0) { v = i; break; }
  }
  if (v < 0) {
    mpz_class g = gcd_z(a.constant_value().numerator(), b.constant_value().numerator());
    return Polynomial::constant(a.nvars(), Rational(g).abs());
  }
  Polynomial ca = content_in(a, v), cb = content_in(b, v);
  Polynomial cg = gcd_int(ca, cb);
  Polynomial pa = a.divide_exact(ca), pb = b.divide_exact(cb);
  if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
  for (;;) {
    Polynomial r = prem(pa, pb, v);
    if (r.is_zero()) break;
    if (r.degree_in(v) == 0) {
      pb = Polynomial::constant(a.nvars(), Rational(1));
      break;
    }
    pa = pb;
    pb = normalize_int(primitive_part(r, v));
  }
  return normalize_int(cg * primitive_part(pb, v));
}

}  // namespace

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() && b.is_zero()) return Polynomial(a.nvars());
  Polynomial g = gcd_int(clear_denominators(a), clear_denominators(b));
  // monic normalization: canonical representative of the gcd class
  return g.scaled(g.leading_coefficient().inverse());
}

std::string Polynomial::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a.sign() < 0) { os << "-"; a = -a; }
    } else {
      os << (a.sign() < 0 ? " - " : " + ");
      if (a.sign() < 0) a = -a;
    }
    bool has_var = total_degree(m) > 0;
    if (!has_var || !a.is_one()) {
      os << a.str();
      if (has_var) os << "*";
    }
    bool first_var = true;
    for (int i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      if (!first_var) os << "*";
      first_var = false;
      os << names[i];
      if (m[i] > 1) os << "^" << m[i];
    }
    first = false;
  }
  return os.str();
}

}  // namespace dgv
