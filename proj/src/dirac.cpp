#include "dgv/dirac.hpp"

#include <sstream>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace dgv {

PSection::PSection(Chart c, VectorField v, KForm a)
    : chart(std::move(c)), vector(std::move(v)), oneform(std::move(a)) {
  require_same_chart(chart, vector.chart, "PSection vector");
  require_same_chart(chart, oneform.chart(), "PSection one-form");
  if (oneform.degree() != 1) throw Error(ErrorKind::Internal, "PSection needs a 1-form");
}

PSection PSection::zero(const Chart& c) {
  return PSection(c, VectorField::zero(c), KForm(c, 1));
}

PSection PSection::operator+(const PSection& o) const {
  return PSection(chart, vector + o.vector, oneform + o.oneform);
}

PSection PSection::operator-(const PSection& o) const {
  return PSection(chart, vector - o.vector, oneform - o.oneform);
}

PSection PSection::scaled(const RF& f) const {
  return PSection(chart, vector.scaled(f), oneform.scaled(f));
}

bool PSection::vector_is_zero() const {
  for (const auto& c : vector.components)
    if (!c.is_zero()) return false;
  return true;
}

RF canonical_pairing(const PSection& a, const PSection& b) {
  require_same_chart(a.chart, b.chart, "canonical pairing");
  return pair_form_vector(a.oneform, b.vector) + pair_form_vector(b.oneform, a.vector);
}

PSection dorfman_bracket(const PSection& a, const PSection& b) {
  require_same_chart(a.chart, b.chart, "Dorfman bracket");
  VectorField xy = lie_bracket(a.vector, b.vector);
  KForm cot = lie_derivative_one_form(a.vector, b.oneform) -
              interior_product(b.vector, exterior_derivative(a.oneform));
  return PSection(a.chart, std::move(xy), std::move(cot));
}

PSection courant_bracket_skew(const PSection& a, const PSection& b) {
  require_same_chart(a.chart, b.chart, "Courant bracket");
  VectorField xy = lie_bracket(a.vector, b.vector);
  RF half = RF::constant(a.chart.dim(), Rational(1, 2));
  KForm cot = lie_derivative_one_form(a.vector, b.oneform) -
              lie_derivative_one_form(b.vector, a.oneform) +
              exterior_derivative(KForm::function(
                  a.chart, pair_form_vector(a.oneform, b.vector) -
                               pair_form_vector(b.oneform, a.vector)))
                  .scaled(half);
  return PSection(a.chart, std::move(xy), std::move(cot));
}

PSection d_operator_standard(const Chart& c, const RF& f) {
  KForm df = exterior_derivative(KForm::function(c, f));
  return PSection(c, VectorField::zero(c), df.scaled(RF::constant(c.dim(), Rational(1, 2))));
}

Bivector Bivector::zero(const Chart& c) {
  int n = c.dim();
  return Bivector{c, std::vector<RF>(static_cast<size_t>(n) * (n - 1) / 2, rf_zero(n))};
}

RF Bivector::entry(int i, int j) const {
  int n = chart.dim();
  if (i == j) return rf_zero(n);
  bool flip = i > j;
  if (flip) std::swap(i, j);
  // rank of the pair (i,j), i<j, in lexicographic order
  int rank = i * n - i * (i + 1) / 2 + (j - i - 1);
  RF v = upper[rank];
  return flip ? -v : v;
}

VectorField Bivector::sharp(const KForm& alpha) const {
  require_same_chart(chart, alpha.chart(), "bivector sharp");
  int n = chart.dim();
  VectorField out = VectorField::zero(chart);
  // pi^#(alpha) = pi(alpha, .) = sum_j (sum_i alpha_i pi^{ij}) d/dj
  for (int j = 0; j < n; ++j) {
    RF acc(n);
    for (int i = 0; i < n; ++i) acc += alpha.coeff(i) * entry(i, j);
    out.components[j] = acc;
  }
  return out;
}

RF Bivector::pair(const KForm& alpha, const KForm& beta) const {
  return pair_form_vector(beta, sharp(alpha));
}

RFMatrix DiracFrame::coefficient_matrix() const {
  int n = chart.dim();
  RFMatrix m(2 * n, static_cast<int>(sections.size()), rf_zero(n));
  for (size_t s = 0; s < sections.size(); ++s) {
    for (int i = 0; i < n; ++i) {
      m.at(i, static_cast<int>(s)) = sections[s].vector.components[i];
      m.at(n + i, static_cast<int>(s)) = sections[s].oneform.coeff(i);
    }
  }
  return m;
}

QMatrix DiracFrame::coefficient_matrix_at(const std::vector<Rational>& p) const {
  return evaluate_matrix(coefficient_matrix(), p);
}

DiracFrame from_bivector(const Bivector& pi, PointP witness, const std::string& label) {
  const Chart& c = pi.chart;
  int n = c.dim();
  DiracFrame f{c, {}, label, std::move(witness)};
  for (int i = 0; i < n; ++i) {
    KForm dxi(c, 1);
    dxi.coeff(i) = rf_one(n);
    f.sections.push_back(PSection(c, pi.sharp(dxi), dxi));
  }
  return f;
}

DiracFrame from_two_form(const KForm& omega, PointP witness, const std::string& label) {
  const Chart& c = omega.chart();
  if (omega.degree() != 2) throw Error(ErrorKind::Internal, "from_two_form needs a 2-form");
  int n = c.dim();
  DiracFrame f{c, {}, label, std::move(witness)};
  for (int i = 0; i < n; ++i) {
    VectorField ei = VectorField::zero(c);
    ei.components[i] = rf_one(n);
    f.sections.push_back(PSection(c, ei, interior_product(ei, omega)));
  }
  return f;
}

Report check_lagrangian(const DiracFrame& frame) {
  Report rep;
  rep.command = "check-lagrangian";
  int n = frame.n();
  CheckEntry& iso = rep.add("isotropy");
  iso.detail = "pairwise pairings vanish identically";
  for (size_t i = 0; i < frame.sections.size() && iso.status == CheckStatus::Pass; ++i) {
    for (size_t j = i; j < frame.sections.size(); ++j) {
      RF p = canonical_pairing(frame.sections[i], frame.sections[j]);
      if (!p.is_zero()) {
        iso.status = CheckStatus::Fail;
        std::ostringstream os;
        os << "<e" << i + 1 << ",e" << j + 1 << "> = " << p.str(frame.chart.coords);
        iso.detail = "isotropy fails";
        iso.witnesses.push_back(os.str());
        break;
      }
    }
  }
  CheckEntry& rk = rep.add("rank-at-witness");
  if (static_cast<int>(frame.sections.size()) != n) {
    rk.status = CheckStatus::Fail;
    rk.detail = "frame must have exactly dim(chart) sections";
    return rep;
  }
  QMatrix m = frame.coefficient_matrix_at(frame.witness.coords);
  int r = rank_of(m, Rational(0), Rational(1));
  if (r == n) {
    rk.detail = "rank " + std::to_string(n) + " at witness";
  } else {
    rk.status = CheckStatus::Fail;
    rk.detail = "rank " + std::to_string(r) + " < " + std::to_string(n) + " at witness";
    std::ostringstream os;
    os << "witness point (";
    for (size_t i = 0; i < frame.witness.coords.size(); ++i)
      os << (i ? "," : "") << frame.witness.coords[i].str();
    os << ")";
    rk.witnesses.push_back(os.str());
  }
  return rep;
}

bool membership_at(const DiracFrame& frame, const PointP& p,
                   const QVec& tangent, const QVec& cotangent) {
  require_same_chart(frame.chart, p.chart, "membership point");
  int n = frame.n();
  QMatrix m = frame.coefficient_matrix_at(p.coords);
  if (rank_of(m, Rational(0), Rational(1)) < n)
    throw Error(ErrorKind::RankDeficientAtPoint, "frame degenerates at the membership point");
  for (int s = 0; s < n; ++s) {
    Rational acc(0);
    for (int i = 0; i < n; ++i) {
      acc += cotangent[i] * m.at(i, s);        // candidate covector on frame vector
      acc += m.at(n + i, s) * tangent[i];      // frame covector on candidate vector
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

namespace {

CourantTensor courant_tensor_impl(const DiracFrame& frame, bool parallel) {
  int n = frame.n();
  CourantTensor t;
  t.n = n;
  t.entries.assign(static_cast<size_t>(n) * n * n, rf_zero(n));
  const long total = static_cast<long>(n) * n * n;
  // cells are independent; each writes only its own slot, so the
  // assembly is deterministic under any schedule
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long cell = 0; cell < total; ++cell) {
    int i = static_cast<int>(cell / (n * n));
    int j = static_cast<int>((cell / n) % n);
    int k = static_cast<int>(cell % n);
    PSection br = dorfman_bracket(frame.sections[i], frame.sections[j]);
    t.entries[static_cast<size_t>(cell)] = canonical_pairing(br, frame.sections[k]);
  }
  (void)parallel;
  for (const auto& e : t.entries)
    if (!e.is_zero()) { t.closed = false; break; }
  return t;
}

}  // namespace

CourantTensor courant_tensor(const DiracFrame& frame) {
  return courant_tensor_impl(frame, true);
}

CourantTensor courant_tensor_serial(const DiracFrame& frame) {
  return courant_tensor_impl(frame, false);
}

CharacteristicRanks characteristic_ranks_at(const DiracFrame& frame, const PointP& p) {
  int n = frame.n();
  QMatrix m = frame.coefficient_matrix_at(p.coords);
  if (rank_of(m, Rational(0), Rational(1)) < n)
    throw Error(ErrorKind::RankDeficientAtPoint, "frame degenerates at the sample point");
  QMatrix tangent(n, n, Rational(0)), cotangent(n, n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < n; ++s) {
      tangent.at(i, s) = m.at(i, s);
      cotangent.at(i, s) = m.at(n + i, s);
    }
  int rt = rank_of(tangent, Rational(0), Rational(1));
  int rc = rank_of(cotangent, Rational(0), Rational(1));
  // G0 = D ∩ (TM ⊕ 0): combinations with vanishing covector block
  return CharacteristicRanks{n - rc, rt, n - rt, rc};
}

}  // namespace dgv
