#include "dgv/geometry.hpp"

#include <algorithm>

namespace dgv {

int Chart::index_of(const std::string& c) const {
  for (size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == c) return static_cast<int>(i);
  throw Error(ErrorKind::UnknownVariable, "'" + c + "' in chart " + name);
}

void require_same_chart(const Chart& a, const Chart& b, const char* what) {
  if (a != b)
    throw Error(ErrorKind::ChartMismatch,
                std::string(what) + ": " + a.name + " vs " + b.name);
}

SmoothMap SmoothMap::identity(const Chart& c) {
  SmoothMap m{c, c, {}};
  for (int i = 0; i < c.dim(); ++i)
    m.components.push_back(RF::variable(c.dim(), i));
  return m;
}

SmoothMap SmoothMap::from_strings(const Chart& src, const Chart& tgt,
                                  const std::vector<std::string>& comps) {
  if (static_cast<int>(comps.size()) != tgt.dim())
    throw Error(ErrorKind::Schema, "map component count != dim(target)");
  SmoothMap m{src, tgt, {}};
  for (const auto& s : comps) m.components.push_back(parse_expression(s, src.coords));
  return m;
}

PointP SmoothMap::apply(const PointP& p) const {
  require_same_chart(p.chart, source, "map applied to point");
  PointP out{target, {}};
  for (const auto& c : components) out.coords.push_back(c.evaluate(p.coords));
  return out;
}

SmoothMap SmoothMap::then(const SmoothMap& other) const {
  return compose(other, *this);
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  require_same_chart(inner.target, outer.source, "composition");
  SmoothMap m{inner.source, outer.target, {}};
  for (const auto& c : outer.components)
    m.components.push_back(c.substitute(inner.components, inner.source.dim()));
  return m;
}

bool maps_equal(const SmoothMap& a, const SmoothMap& b) {
  if (a.source != b.source || a.target != b.target) return false;
  for (size_t i = 0; i < a.components.size(); ++i)
    if (a.components[i] != b.components[i]) return false;
  return true;
}

RFMatrix jacobian(const SmoothMap& m) {
  int r = m.target.dim(), c = m.source.dim();
  RFMatrix j(r, c, rf_zero(c));
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) j.at(i, k) = m.components[i].derivative(k);
  return j;
}

QMatrix evaluate_matrix(const RFMatrix& m, const std::vector<Rational>& point) {
  QMatrix out(m.rows(), m.cols(), Rational(0));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j).evaluate(point);
  return out;
}

QVec evaluate_vector(const RFVec& v, const std::vector<Rational>& point) {
  QVec out;
  out.reserve(v.size());
  for (const auto& f : v) out.push_back(f.evaluate(point));
  return out;
}

RFMatrix substitute_matrix(const RFMatrix& m, const std::vector<RF>& a, int out_nvars) {
  RFMatrix out(m.rows(), m.cols(), rf_zero(out_nvars));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j).substitute(a, out_nvars);
  return out;
}

RFVec substitute_vector(const RFVec& v, const std::vector<RF>& a, int out_nvars) {
  RFVec out;
  out.reserve(v.size());
  for (const auto& f : v) out.push_back(f.substitute(a, out_nvars));
  return out;
}

QVec pushforward_at(const SmoothMap& m, const PointP& p, const QVec& v) {
  require_same_chart(p.chart, m.source, "pushforward point");
  QMatrix j = evaluate_matrix(jacobian(m), p.coords);
  return j.apply(v, Rational(0));
}

VectorField VectorField::zero(const Chart& c) {
  return VectorField{c, std::vector<RF>(c.dim(), rf_zero(c.dim()))};
}

VectorField VectorField::from_strings(const Chart& c, const std::vector<std::string>& comps) {
  if (static_cast<int>(comps.size()) != c.dim())
    throw Error(ErrorKind::Schema, "vector field component count != dim(chart)");
  VectorField x{c, {}};
  for (const auto& s : comps) x.components.push_back(parse_expression(s, c.coords));
  return x;
}

VectorField VectorField::operator+(const VectorField& o) const {
  require_same_chart(chart, o.chart, "vector field sum");
  VectorField r{chart, components};
  for (size_t i = 0; i < components.size(); ++i) r.components[i] += o.components[i];
  return r;
}

VectorField VectorField::operator-(const VectorField& o) const {
  require_same_chart(chart, o.chart, "vector field difference");
  VectorField r{chart, components};
  for (size_t i = 0; i < components.size(); ++i) r.components[i] -= o.components[i];
  return r;
}

VectorField VectorField::scaled(const RF& f) const {
  VectorField r{chart, components};
  for (auto& c : r.components) c *= f;
  return r;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_chart(x.chart, y.chart, "Lie bracket");
  int n = x.chart.dim();
  VectorField r = VectorField::zero(x.chart);
  for (int i = 0; i < n; ++i) {
    RF acc(n);
    for (int j = 0; j < n; ++j) {
      acc += x.components[j] * y.components[i].derivative(j);
      acc -= y.components[j] * x.components[i].derivative(j);
    }
    r.components[i] = acc;
  }
  return r;
}

namespace {

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Sorts idx; returns the permutation sign, or 0 when indices repeat.
int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) { std::swap(idx[i], idx[j]); sign = -sign; }
    }
  return sign;
}

int tuple_rank(int n, const std::vector<int>& idx) {
  // lexicographic rank of a strictly increasing tuple
  int k = static_cast<int>(idx.size());
  long rank = 0;
  int prev = -1;
  for (int pos = 0; pos < k; ++pos) {
    for (int v = prev + 1; v < idx[pos]; ++v) rank += binom(n - v - 1, k - pos - 1);
    prev = idx[pos];
  }
  return static_cast<int>(rank);
}

}  // namespace

std::vector<std::vector<int>> increasing_tuples(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) { out.push_back({}); return out; }
  for (;;) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

KForm::KForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  if (degree < 0 || degree > 3)
    throw Error(degree < 0 ? ErrorKind::DegreeUnderflow : ErrorKind::DegreeOverflow,
                "form degree must be 0..3");
  int n = chart_.dim();
  coeffs_.assign(static_cast<size_t>(binom(n, degree)), rf_zero(n));
}

KForm KForm::function(const Chart& c, const RF& f) {
  KForm w(c, 0);
  w.coeffs_[0] = f;
  return w;
}

KForm KForm::one_form(const Chart& c, const std::vector<RF>& comps) {
  if (static_cast<int>(comps.size()) != c.dim())
    throw Error(ErrorKind::Schema, "one-form component count != dim(chart)");
  KForm w(c, 1);
  w.coeffs_ = comps;
  return w;
}

const RF& KForm::coeff_at(const std::vector<int>& idx) const {
  return coeffs_[tuple_rank(chart_.dim(), idx)];
}

void KForm::set_coeff(const std::vector<int>& idx, const RF& v) {
  coeffs_[tuple_rank(chart_.dim(), idx)] = v;
}

bool KForm::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

KForm KForm::operator+(const KForm& o) const {
  require_same_chart(chart_, o.chart_, "form sum");
  if (degree_ != o.degree_) throw Error(ErrorKind::Internal, "form degree mismatch");
  KForm r = *this;
  for (size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] += o.coeffs_[i];
  return r;
}

KForm KForm::operator-(const KForm& o) const {
  require_same_chart(chart_, o.chart_, "form difference");
  if (degree_ != o.degree_) throw Error(ErrorKind::Internal, "form degree mismatch");
  KForm r = *this;
  for (size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] -= o.coeffs_[i];
  return r;
}

KForm KForm::scaled(const RF& f) const {
  KForm r = *this;
  for (auto& c : r.coeffs_) c *= f;
  return r;
}

bool operator==(const KForm& a, const KForm& b) {
  if (a.chart_ != b.chart_ || a.degree_ != b.degree_) return false;
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    if (a.coeffs_[i] != b.coeffs_[i]) return false;
  return true;
}

KForm exterior_derivative(const KForm& w) {
  if (w.degree() == 3) throw Error(ErrorKind::DegreeOverflow, "d of a 3-form");
  const Chart& c = w.chart();
  int n = c.dim();
  KForm out(c, w.degree() + 1);
  auto tuples = increasing_tuples(n, w.degree() + 1);
  for (const auto& t : tuples) {
    RF acc(n);
    for (size_t a = 0; a < t.size(); ++a) {
      std::vector<int> rest;
      for (size_t b = 0; b < t.size(); ++b)
        if (b != a) rest.push_back(t[b]);
      RF d = w.coeff_at(rest).derivative(t[a]);
      acc += (a % 2 == 0) ? d : -d;
    }
    out.set_coeff(t, acc);
  }
  return out;
}

KForm interior_product(const VectorField& x, const KForm& w) {
  require_same_chart(x.chart, w.chart(), "interior product");
  if (w.degree() == 0) throw Error(ErrorKind::DegreeUnderflow, "interior product with 0-form");
  const Chart& c = w.chart();
  int n = c.dim();
  KForm out(c, w.degree() - 1);
  auto tuples = increasing_tuples(n, w.degree() - 1);
  for (const auto& t : tuples) {
    RF acc(n);
    for (int i = 0; i < n; ++i) {
      std::vector<int> full;
      full.push_back(i);
      full.insert(full.end(), t.begin(), t.end());
      std::vector<int> sorted = full;
      int sign = sort_sign(sorted);
      if (sign == 0) continue;
      RF term = x.components[i] * w.coeff_at(sorted);
      acc += (sign > 0) ? term : -term;
    }
    out.set_coeff(t, acc);
  }
  return out;
}

KForm lie_derivative_one_form(const VectorField& x, const KForm& alpha) {
  require_same_chart(x.chart, alpha.chart(), "Lie derivative");
  if (alpha.degree() != 1) throw Error(ErrorKind::Internal, "lie_derivative_one_form needs a 1-form");
  // Cartan formula
  KForm a = interior_product(x, exterior_derivative(alpha));
  KForm b = exterior_derivative(interior_product(x, alpha));
  return a + b;
}

KForm wedge(const KForm& a, const KForm& b) {
  require_same_chart(a.chart(), b.chart(), "wedge");
  int k = a.degree() + b.degree();
  if (k > 3) throw Error(ErrorKind::DegreeOverflow, "wedge beyond degree 3");
  const Chart& c = a.chart();
  int n = c.dim();
  KForm out(c, k);
  auto ta = increasing_tuples(n, a.degree());
  auto tb = increasing_tuples(n, b.degree());
  for (const auto& i : ta) {
    for (const auto& j : tb) {
      std::vector<int> full = i;
      full.insert(full.end(), j.begin(), j.end());
      std::vector<int> sorted = full;
      int sign = sort_sign(sorted);
      if (sign == 0) continue;
      RF term = a.coeff_at(i) * b.coeff_at(j);
      RF cur = out.coeff_at(sorted);
      out.set_coeff(sorted, (sign > 0) ? cur + term : cur - term);
    }
  }
  return out;
}

KForm pullback_form(const SmoothMap& m, const KForm& w) {
  require_same_chart(w.chart(), m.target, "pullback");
  const Chart& src = m.source;
  int ns = src.dim();
  int k = w.degree();
  KForm out(src, k);
  if (k == 0) {
    out.coeff(0) = w.coeff(0).substitute(m.components, ns);
    return out;
  }
  RFMatrix j = jacobian(m);
  auto src_tuples = increasing_tuples(ns, k);
  auto tgt_tuples = increasing_tuples(m.target.dim(), k);
  for (const auto& t : src_tuples) {
    RF acc(ns);
    for (const auto& s : tgt_tuples) {
      RF c = w.coeff_at(s);
      if (c.is_zero()) continue;
      // minor of the Jacobian: rows s (target), cols t (source)
      RFMatrix minor(k, k, rf_zero(ns));
      for (int r = 0; r < k; ++r)
        for (int q = 0; q < k; ++q) minor.at(r, q) = j.at(s[r], t[q]);
      RF det = determinant(minor, rf_zero(ns), rf_one(ns));
      if (det.is_zero()) continue;
      acc += c.substitute(m.components, ns) * det;
    }
    out.set_coeff(t, acc);
  }
  return out;
}

RF pair_form_vector(const KForm& alpha, const VectorField& x) {
  require_same_chart(alpha.chart(), x.chart, "pairing");
  if (alpha.degree() != 1) throw Error(ErrorKind::Internal, "pairing needs a 1-form");
  int n = x.chart.dim();
  RF acc(n);
  for (int i = 0; i < n; ++i) acc += alpha.coeff(i) * x.components[i];
  return acc;
}

std::vector<RF> restrict_components(const std::vector<RF>& comps, const SmoothMap& eps) {
  std::vector<RF> out;
  out.reserve(comps.size());
  for (const auto& c : comps)
    out.push_back(c.substitute(eps.components, eps.source.dim()));
  return out;
}

}  // namespace dgv
