#include "dgv/bcourant.hpp"

#include <sstream>

namespace dgv {

namespace {

RFMatrix unit_matrix_of(const std::vector<UnitSection>& fam, int fiber_dim, int base_dim) {
  RFMatrix m(2 * fiber_dim, static_cast<int>(fam.size()), rf_zero(base_dim));
  for (size_t s = 0; s < fam.size(); ++s)
    for (int i = 0; i < fiber_dim; ++i) {
      m.at(i, static_cast<int>(s)) = fam[s].vec[i];
      m.at(fiber_dim + i, static_cast<int>(s)) = fam[s].cov[i];
    }
  return m;
}

std::string point_str(const PointP& p) {
  std::string out = "(";
  for (size_t i = 0; i < p.coords.size(); ++i)
    out += (i ? "," : "") + p.coords[i].str();
  return out + ")";
}

}  // namespace

BFrame build_b(const GroupoidDef& def, const Infinitesimal& inf, const DiracFrame& frame) {
  BFrame bf;
  bf.base = def.base;
  bf.modulus = inf.is_frame;
  int n = def.n(), p = def.p();
  RF zero = rf_zero(p), one = rf_one(p);

  // frame of ker TTt|_P: (A_j, 0) and (0, s-annihilator covectors)
  for (int j = 0; j < inf.sym.a_units.cols(); ++j) {
    UnitSection u = zero_unit_section(def.base, n);
    u.vec = inf.sym.a_units.column(j);
    bf.ker_tt_frame.push_back(u);
  }
  for (int j = 0; j < inf.sym.s_ann_units.cols(); ++j) {
    UnitSection u = zero_unit_section(def.base, n);
    u.cov = inf.sym.s_ann_units.column(j);
    bf.ker_tt_frame.push_back(u);
  }
  bf.perp = inf.units_frame;
  bf.perp.insert(bf.perp.end(), bf.ker_tt_frame.begin(), bf.ker_tt_frame.end());

  // representatives: the units frame plus a complement of the t-core
  // inside ker TTt|_P
  bf.representatives = inf.units_frame;
  {
    std::vector<UnitSection> span = inf.it_frame;
    int r0 = generic_rank(span);
    for (const auto& cand : bf.ker_tt_frame) {
      std::vector<UnitSection> trial = span;
      trial.push_back(cand);
      int r1 = generic_rank(trial);
      if (r1 > r0) {
        span = std::move(trial);
        r0 = r1;
        bf.representatives.push_back(cand);
      }
    }
  }
  int r = static_cast<int>(inf.is_frame.size());
  int expected = 2 * n - 2 * r;
  if (static_cast<int>(bf.representatives.size()) != expected)
    throw Error(ErrorKind::RankDrop,
                "quotient presentation has " + std::to_string(bf.representatives.size()) +
                    " representatives, expected " + std::to_string(expected));
  // pairing matrix
  bf.pairing = RFMatrix(expected, expected, zero);
  for (int i = 0; i < expected; ++i)
    for (int j = 0; j < expected; ++j)
      bf.pairing.at(i, j) = pairing_units(bf.representatives[i], bf.representatives[j]);
  // cached lifts
  for (const auto& e : bf.representatives)
    bf.rep_lifts.push_back(lift_to_g(def, inf, frame, e));
  bf.validity = inf.validity;
  (void)one;
  return bf;
}

bool coset_equal(const BFrame& bf, const UnitSection& a, const UnitSection& b) {
  UnitSection d = a - b;
  for (const auto& w : bf.perp)
    if (!pairing_units(d, w).is_zero()) return false;
  return true;
}

bool coset_equal_at(const BFrame& bf, const PointP& p, const QVec& avec, const QVec& acov,
                    const QVec& bvec, const QVec& bcov) {
  size_t n = avec.size();
  for (const auto& w : bf.perp) {
    QVec wv = evaluate_vector(w.vec, p.coords);
    QVec wc = evaluate_vector(w.cov, p.coords);
    Rational acc(0);
    for (size_t i = 0; i < n; ++i) {
      acc += (acov[i] - bcov[i]) * wv[i];
      acc += wc[i] * (avec[i] - bvec[i]);
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

PSection lift_to_g(const GroupoidDef& def, const Infinitesimal& inf, const DiracFrame& frame,
                   const UnitSection& e) {
  UnitSection head = ttt_units(inf.sym, e);
  UnitSection tail = e - head;
  if (!in_units_fiber(inf.sym, head))
    throw Error(ErrorKind::GenericSolveFailed, "TTt of the class leaves TP (+) A*G");
  if (!in_ker_ttt(inf.sym, tail))
    throw Error(ErrorKind::GenericSolveFailed,
                "class does not decompose into units (+) ker TTt");
  StarSection star = star_section(def, inf, frame, head);
  PSection ext = invariant_extension(def, inf.sym, tail, ExtensionSide::Left);
  return star.section + ext;
}

UnitSection b_bracket(const GroupoidDef& def, const Infinitesimal& inf, const DiracFrame& frame,
                      const BFrame& bf, const UnitSection& e1, const UnitSection& e2,
                      bool verify_welldefined) {
  PSection l1 = lift_to_g(def, inf, frame, e1);
  PSection l2 = lift_to_g(def, inf, frame, e2);
  UnitSection out = restrict_psection(def, courant_bracket_skew(l1, l2));
  // the result must pair to zero with the s-core, i.e. lie in its
  // orthogonal units (+) ker TTt|_P
  for (const auto& sigma : bf.modulus)
    if (!pairing_units(out, sigma).is_zero())
      throw Error(ErrorKind::WellDefinednessViolation,
                  "bracket representative leaves units (+) ker TTt|_P");
  if (verify_welldefined) {
    int n = def.n();
    SmoothMap eps_s = compose(def.unit, def.src);
    RF f = rf_zero(n);
    for (int i = 0; i < n; ++i) {
      RF diff = RF::variable(n, i) - eps_s.components[i];
      if (!diff.is_zero()) { f = diff; break; }
    }
    if (!f.is_zero()) {
      for (const auto& sigma : bf.modulus) {
        PSection pert =
            invariant_extension(def, inf.sym, sigma, ExtensionSide::Right).scaled(f);
        UnitSection alt = restrict_psection(def, courant_bracket_skew(l1 + pert, l2));
        if (!coset_equal(bf, alt, out))
          throw Error(ErrorKind::WellDefinednessViolation,
                      "bracket depends on the star-section representative "
                      "(the input frame is not closed)");
      }
    }
  }
  return out;
}

RFVec b_anchor(const Infinitesimal& inf, const UnitSection& e) {
  return inf.sym.j_s_units.apply(e.vec, rf_zero(e.base.dim()));
}

UnitSection d_operator(const GroupoidDef& def, const Infinitesimal& inf, const RF& f) {
  int n = def.n(), p = def.p();
  RFVec df;
  for (int k = 0; k < p; ++k) df.push_back(f.derivative(k));
  UnitSection out = zero_unit_section(def.base, n);
  RFVec pull = inf.sym.j_s_units.transposed().apply(df, rf_zero(p));
  for (int i = 0; i < n; ++i) out.cov[i] = pull[i].scaled(Rational(1, 2));
  return out;
}

namespace {

RF random_base_fn(RationalSampler& s, int p) {
  Polynomial out(p);
  for (int t = 0; t < 3; ++t) {
    Monomial m(p, 0);
    unsigned left = 2;
    for (int i = 0; i < p; ++i) {
      unsigned e = static_cast<unsigned>(s.next().numerator().get_ui()) % (left + 1);
      m[i] = e;
      left -= e;
    }
    out.add_term(m, s.next());
  }
  return RF::from_polynomial(out);
}

}  // namespace

Report check_courant_axioms(const GroupoidDef& def, const Infinitesimal& inf,
                            const DiracFrame& frame, const BFrame& bf, std::uint64_t seed) {
  Report rep;
  rep.command = "courant-axioms";
  rep.seed = seed;
  int n = def.n(), p = def.p();
  int nb = bf.rank();
  RF zero = rf_zero(p);

  CheckEntry& gate = rep.add("input frame closed");
  CourantTensor t = courant_tensor(frame);
  if (!t.closed) {
    gate.status = CheckStatus::NotApplicable;
    gate.detail = "input frame is not closed; the quotient carries no Courant bracket";
    return rep;
  }
  gate.detail = "Courant tensor vanishes identically";

  CheckEntry& rk = rep.add("rank of the quotient bundle");
  rk.detail = "rank " + std::to_string(nb) + " = 2 dim G - 2 rank(s-core)";

  CheckEntry& pairing_nd = rep.add("pairing nondegenerate at witness");
  try {
    PointP base_witness = def.src.apply(frame.witness);
    QMatrix pw = evaluate_matrix(bf.pairing, base_witness.coords);
    if (rank_of(pw, Rational(0), Rational(1)) < nb) {
      pairing_nd.status = CheckStatus::Fail;
      pairing_nd.detail = "induced pairing degenerate at the witness";
    } else {
      pairing_nd.detail = "rank " + std::to_string(nb) + " at witness";
    }
  } catch (const Error&) {
    pairing_nd.status = CheckStatus::Fail;
    pairing_nd.detail = "pairing matrix has a pole at the witness";
  }

  // pairing descends: the s-core is orthogonal to units (+) ker TTt|_P
  CheckEntry& desc = rep.add("pairing descends to the quotient");
  desc.detail = "core pairs to zero with all representatives";
  for (const auto& sigma : bf.modulus)
    for (const auto& e : bf.perp)
      if (!pairing_units(sigma, e).is_zero()) {
        desc.status = CheckStatus::Fail;
        desc.detail = "core does not annihilate the representative frame";
      }

  // precompute pairwise brackets and their lifts
  std::vector<std::vector<UnitSection>> br(nb);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      br[i].push_back(restrict_psection(
          def, courant_bracket_skew(bf.rep_lifts[i], bf.rep_lifts[j])));

  RationalSampler s(seed);
  RF f = random_base_fn(s, p), g = random_base_fn(s, p);

  CheckEntry& ax1 = rep.add("axiom 1: Jacobi anomaly");
  for (int i = 0; i < nb && ax1.status == CheckStatus::Pass; ++i)
    for (int j = 0; j < nb && ax1.status == CheckStatus::Pass; ++j)
      for (int k = 0; k < nb; ++k) {
        UnitSection lhs = b_bracket(def, inf, frame, bf, br[i][j], bf.representatives[k]) +
                          b_bracket(def, inf, frame, bf, br[j][k], bf.representatives[i]) +
                          b_bracket(def, inf, frame, bf, br[k][i], bf.representatives[j]);
        RF cyc = pairing_units(br[i][j], bf.representatives[k]) +
                 pairing_units(br[j][k], bf.representatives[i]) +
                 pairing_units(br[k][i], bf.representatives[j]);
        UnitSection rhs = d_operator(def, inf, cyc.scaled(Rational(1, 3)));
        if (!coset_equal(bf, lhs, rhs)) {
          ax1.status = CheckStatus::Fail;
          ax1.witnesses.push_back("triple " + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + "," + std::to_string(k + 1));
          break;
        }
      }
  if (ax1.status == CheckStatus::Pass)
    ax1.detail = "Jacobiator equals one third of D(cyclic pairing sum) on all triples";

  CheckEntry& ax2 = rep.add("axiom 2: anchor is bracket-preserving");
  for (int i = 0; i < nb && ax2.status == CheckStatus::Pass; ++i)
    for (int j = 0; j < nb; ++j) {
      RFVec lhs = b_anchor(inf, br[i][j]);
      VectorField a{def.base, b_anchor(inf, bf.representatives[i])};
      VectorField b{def.base, b_anchor(inf, bf.representatives[j])};
      VectorField rhs = lie_bracket(a, b);
      bool ok = true;
      for (int c = 0; c < p; ++c)
        if (lhs[c] != rhs.components[c]) ok = false;
      if (!ok) {
        ax2.status = CheckStatus::Fail;
        ax2.witnesses.push_back("pair " + std::to_string(i + 1) + "," + std::to_string(j + 1));
        break;
      }
    }
  if (ax2.status == CheckStatus::Pass) ax2.detail = "b[e1,e2] = [b e1, b e2] on the basis";

  CheckEntry& ax3 = rep.add("axiom 3: Leibniz rule");
  for (int i = 0; i < nb && ax3.status == CheckStatus::Pass; ++i)
    for (int j = 0; j < nb; ++j) {
      // [e_i, f e_j] computed through the lift s^*f * lift(e_j)
      RF sf = f.substitute(def.src.components, n);
      UnitSection lhs = restrict_psection(
          def, courant_bracket_skew(bf.rep_lifts[i], bf.rep_lifts[j].scaled(sf)));
      RF bf_e1 = dot(b_anchor(inf, bf.representatives[i]),
                     [&] {
                       RFVec dfv;
                       for (int c = 0; c < p; ++c) dfv.push_back(f.derivative(c));
                       return dfv;
                     }(),
                     zero);
      UnitSection rhs = br[i][j].scaled(f) + bf.representatives[j].scaled(bf_e1) -
                        d_operator(def, inf, f)
                            .scaled(pairing_units(bf.representatives[i], bf.representatives[j]));
      if (!coset_equal(bf, lhs, rhs)) {
        ax3.status = CheckStatus::Fail;
        ax3.witnesses.push_back("pair " + std::to_string(i + 1) + "," + std::to_string(j + 1));
        break;
      }
    }
  if (ax3.status == CheckStatus::Pass)
    ax3.detail = "[e1, f e2] = f[e1,e2] + (b(e1)f)e2 - <e1,e2> D f";

  CheckEntry& ax4 = rep.add("axiom 4: b ∘ D = 0 and <Df, Dg> = 0");
  {
    UnitSection df = d_operator(def, inf, f), dg = d_operator(def, inf, g);
    RFVec bd = b_anchor(inf, df);
    bool ok = true;
    for (const auto& x : bd)
      if (!x.is_zero()) ok = false;
    if (!pairing_units(df, dg).is_zero()) ok = false;
    // <Df, e> = 1/2 b(e)(f) on the basis
    for (int i = 0; i < nb; ++i) {
      RFVec dfv;
      for (int c = 0; c < p; ++c) dfv.push_back(f.derivative(c));
      RF want = dot(b_anchor(inf, bf.representatives[i]), dfv, zero).scaled(Rational(1, 2));
      if (pairing_units(df, bf.representatives[i]) != want) ok = false;
    }
    if (!ok) ax4.status = CheckStatus::Fail;
    else ax4.detail = "holds with the seeded random functions";
  }

  CheckEntry& ax5 = rep.add("axiom 5: metric compatibility");
  for (int i = 0; i < nb && ax5.status == CheckStatus::Pass; ++i)
    for (int j = 0; j < nb && ax5.status == CheckStatus::Pass; ++j)
      for (int k = 0; k < nb; ++k) {
        RF pair_jk = pairing_units(bf.representatives[j], bf.representatives[k]);
        RFVec dpair;
        for (int c = 0; c < p; ++c) dpair.push_back(pair_jk.derivative(c));
        RF lhs = dot(b_anchor(inf, bf.representatives[i]), dpair, zero);
        RF rhs =
            pairing_units(br[i][j] + d_operator(def, inf,
                                                pairing_units(bf.representatives[i],
                                                              bf.representatives[j])),
                          bf.representatives[k]) +
            pairing_units(bf.representatives[j],
                          br[i][k] + d_operator(def, inf,
                                                pairing_units(bf.representatives[i],
                                                              bf.representatives[k])));
        if (lhs != rhs) {
          ax5.status = CheckStatus::Fail;
          ax5.witnesses.push_back("triple " + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + "," + std::to_string(k + 1));
          break;
        }
      }
  if (ax5.status == CheckStatus::Pass)
    ax5.detail = "b(e1)<e2,e3> expands through brackets and D on all triples";

  return rep;
}

// ---------------------------------------------------------------------------
// Isomorphisms

PoissonIso make_poisson_iso(const GroupoidDef& def, const Infinitesimal& inf,
                            const Bivector& pi) {
  require_same_chart(pi.chart, def.total, "Poisson iso bivector");
  int n = def.n(), p = def.p();
  RF zg = rf_zero(n);
  PoissonIso iso;
  // ambient sharp matrix: (pi# a)_j = sum_i a_i pi^{ij}
  RFMatrix sharp(n, n, zg);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) sharp.at(j, i) = pi.entry(i, j);
  iso.pi_sharp_units = substitute_matrix(sharp, def.unit.components, p);
  iso.ag_basis = inf.sym.a_units;
  auto astar = null_space(inf.sym.j_eps.transposed(), rf_zero(p), rf_one(p));
  iso.astar_basis = RFMatrix::from_columns(n, astar, rf_zero(p));
  return iso;
}

UnitSection psi_apply(const GroupoidDef& def, const PoissonIso& iso, const RFVec& x,
                      const RFVec& xi) {
  int p = def.p();
  UnitSection out = zero_unit_section(def.base, def.n());
  RFVec sharp_xi = iso.pi_sharp_units.apply(xi, rf_zero(p));
  for (int i = 0; i < def.n(); ++i) {
    out.vec[i] = x[i] + sharp_xi[i];
    out.cov[i] = xi[i];
  }
  return out;
}

std::pair<RFVec, RFVec> psi_invert(const GroupoidDef& def, const Infinitesimal& inf,
                                   const PoissonIso& iso, const UnitSection& e) {
  int p = def.p();
  RFVec sharp_a = iso.pi_sharp_units.apply(e.cov, rf_zero(p));
  RFVec x = e.vec;
  for (size_t i = 0; i < x.size(); ++i) x[i] -= sharp_a[i];
  RFVec xi = hat_s_symbolic(inf.sym.unit_side_s, e.cov);
  return {x, xi};
}

Report iso_poisson_check(const GroupoidDef& def, const Infinitesimal& inf,
                         [[maybe_unused]] const DiracFrame& frame, const BFrame& bf,
                         const Bivector& pi) {
  Report rep;
  rep.command = "iso-check poisson";
  PoissonIso iso = make_poisson_iso(def, inf, pi);
  int n = def.n(), p = def.p();
  RF zero = rf_zero(p);

  // basis of AG (+) A*G
  std::vector<std::pair<RFVec, RFVec>> basis;
  for (int j = 0; j < iso.ag_basis.cols(); ++j)
    basis.push_back({iso.ag_basis.column(j), RFVec(static_cast<size_t>(n), zero)});
  for (int j = 0; j < iso.astar_basis.cols(); ++j)
    basis.push_back({RFVec(static_cast<size_t>(n), zero), iso.astar_basis.column(j)});

  CheckEntry& bij = rep.add("Psi bijective on bases at witness");
  {
    std::vector<UnitSection> images;
    for (const auto& b : basis) images.push_back(psi_apply(def, iso, b.first, b.second));
    std::vector<UnitSection> ext = images;
    ext.insert(ext.end(), bf.modulus.begin(), bf.modulus.end());
    int want = bf.rank() + static_cast<int>(bf.modulus.size());
    if (generic_rank(ext) != want || static_cast<int>(images.size()) != bf.rank()) {
      bij.status = CheckStatus::Fail;
      bij.detail = "image ranks do not match the quotient presentation";
    } else {
      bij.detail = "rank " + std::to_string(bf.rank()) + " image modulo the s-core";
    }
  }

  CheckEntry& inv_check = rep.add("Psi inverse on images");
  for (const auto& b : basis) {
    UnitSection e = psi_apply(def, iso, b.first, b.second);
    auto [x, xi] = psi_invert(def, inf, iso, e);
    bool ok = true;
    for (int i = 0; i < n; ++i)
      if (x[i] != b.first[i] || xi[i] != b.second[i]) ok = false;
    if (!ok) {
      inv_check.status = CheckStatus::Fail;
      inv_check.detail = "Psi^-1 ∘ Psi differs from the identity on a basis element";
      break;
    }
  }
  if (inv_check.status == CheckStatus::Pass)
    inv_check.detail = "Psi^-1 ∘ Psi = id on the basis of AG (+) A*G";

  CheckEntry& pair_check = rep.add("Psi preserves the pairing");
  for (size_t a = 0; a < basis.size() && pair_check.status == CheckStatus::Pass; ++a)
    for (size_t b = 0; b < basis.size(); ++b) {
      RF lhs = pairing_units(psi_apply(def, iso, basis[a].first, basis[a].second),
                             psi_apply(def, iso, basis[b].first, basis[b].second));
      RF rhs = zero;
      for (int i = 0; i < n; ++i)
        rhs += basis[a].second[i] * basis[b].first[i] + basis[b].second[i] * basis[a].first[i];
      if (lhs != rhs) {
        pair_check.status = CheckStatus::Fail;
        pair_check.witnesses.push_back("pair " + std::to_string(a + 1) + "," +
                                       std::to_string(b + 1));
        break;
      }
    }
  if (pair_check.status == CheckStatus::Pass)
    pair_check.detail = "<Psi a, Psi b> = <a, b> on the basis";
  return rep;
}

PresymplecticIso make_presymplectic_iso(const GroupoidDef& def, const KForm& omega_g) {
  require_same_chart(omega_g.chart(), def.total, "presymplectic iso form");
  int n = def.n(), p = def.p();
  RF zg = rf_zero(n);
  RFMatrix flat(n, n, zg);
  // (omega_flat v)_j = sum_i v^i omega_{ij}
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<int> idx = {std::min(i, j), std::max(i, j)};
      RF w = omega_g.coeff_at(idx);
      flat.at(j, i) = (i < j) ? w : -w;
    }
  PresymplecticIso iso;
  iso.omega_flat_units = substitute_matrix(flat, def.unit.components, p);
  return iso;
}

PSection lambda_apply(const GroupoidDef& def, const Infinitesimal& inf,
                      const PresymplecticIso& iso, const UnitSection& e) {
  int p = def.p();
  RF zero = rf_zero(p);
  RFVec ts = inf.sym.j_s_units.apply(e.vec, zero);
  RFVec flat_v = iso.omega_flat_units.apply(e.vec, zero);
  RFVec rem = e.cov;
  for (size_t i = 0; i < rem.size(); ++i) rem[i] -= flat_v[i];
  RFVec beta = inf.sym.j_eps.transposed().apply(rem, zero);
  return PSection(def.base, VectorField{def.base, ts}, KForm::one_form(def.base, beta));
}

UnitSection lambda_invert(const GroupoidDef& def, const Infinitesimal& inf,
                          const PresymplecticIso& iso, const PSection& s) {
  int n = def.n(), p = def.p();
  RF zero = rf_zero(p);
  UnitSection out = zero_unit_section(def.base, n);
  out.vec = inf.sym.j_eps.apply(s.vector.components, zero);
  RFVec pull = inf.sym.j_s_units.transposed().apply(s.oneform.coeffs(), zero);
  RFVec flat_v = iso.omega_flat_units.apply(out.vec, zero);
  for (int i = 0; i < n; ++i) out.cov[i] = pull[i] + flat_v[i];
  return out;
}

Report iso_presymplectic_check(const GroupoidDef& def, const Infinitesimal& inf,
                               const DiracFrame& frame, const BFrame& bf, const KForm& omega_g) {
  Report rep;
  rep.command = "iso-check presymplectic";
  PresymplecticIso iso = make_presymplectic_iso(def, omega_g);
  int p = def.p();
  RF zero = rf_zero(p), one = rf_one(p);

  // basis sections of the base Pontryagin bundle plus two polynomial ones
  std::vector<PSection> base_secs;
  for (int i = 0; i < p; ++i) {
    VectorField v = VectorField::zero(def.base);
    v.components[i] = one;
    base_secs.push_back(PSection(def.base, v, KForm(def.base, 1)));
    KForm a(def.base, 1);
    a.coeff(i) = one;
    base_secs.push_back(PSection(def.base, VectorField::zero(def.base), a));
  }
  if (p >= 2) {
    VectorField v = VectorField::zero(def.base);
    v.components[1] = RF::variable(p, 0);  // x d/dy
    KForm a(def.base, 1);
    a.coeff(0) = RF::variable(p, 1) * RF::variable(p, 1);  // y^2 dx
    base_secs.push_back(PSection(def.base, v, a));
  }

  CheckEntry& lr = rep.add("Lambda ∘ Lambda^-1 = id");
  for (const auto& s : base_secs) {
    PSection back = lambda_apply(def, inf, iso, lambda_invert(def, inf, iso, s));
    if (!(back - s).is_zero()) {
      lr.status = CheckStatus::Fail;
      break;
    }
  }
  if (lr.status == CheckStatus::Pass) lr.detail = "identity on base sections";

  CheckEntry& rl = rep.add("Lambda^-1 ∘ Lambda = id modulo the s-core");
  for (const auto& e : bf.representatives) {
    UnitSection back = lambda_invert(def, inf, iso, lambda_apply(def, inf, iso, e));
    if (!coset_equal(bf, back, e)) {
      rl.status = CheckStatus::Fail;
      break;
    }
  }
  if (rl.status == CheckStatus::Pass) rl.detail = "identity on representatives";

  CheckEntry& pr = rep.add("Lambda preserves the pairing");
  for (const auto& e1 : bf.representatives)
    for (const auto& e2 : bf.representatives) {
      RF lhs = pairing_units(e1, e2);
      RF rhs = canonical_pairing(lambda_apply(def, inf, iso, e1),
                                 lambda_apply(def, inf, iso, e2));
      if (lhs != rhs) {
        pr.status = CheckStatus::Fail;
        break;
      }
    }
  if (pr.status == CheckStatus::Pass) pr.detail = "pairing matches on representatives";

  CheckEntry& tr = rep.add("transported bracket is the standard Courant bracket");
  for (size_t a = 0; a < base_secs.size() && tr.status == CheckStatus::Pass; ++a)
    for (size_t b = 0; b < base_secs.size(); ++b) {
      UnitSection ea = lambda_invert(def, inf, iso, base_secs[a]);
      UnitSection eb = lambda_invert(def, inf, iso, base_secs[b]);
      UnitSection bru = b_bracket(def, inf, frame, bf, ea, eb);
      PSection got = lambda_apply(def, inf, iso, bru);
      PSection want = courant_bracket_skew(base_secs[a], base_secs[b]);
      if (!(got - want).is_zero()) {
        tr.status = CheckStatus::Fail;
        tr.witnesses.push_back("sections " + std::to_string(a + 1) + "," +
                               std::to_string(b + 1));
        break;
      }
    }
  if (tr.status == CheckStatus::Pass)
    tr.detail = "Lambda [Lambda^-1 a, Lambda^-1 b] = [a, b] on the sample sections";
  return rep;
}

PSection pi_pair_apply(const Chart& m, const UnitSection& e) {
  int d = m.dim();
  RFVec v, a;
  for (int i = 0; i < d; ++i) {
    v.push_back(e.vec[d + i]);
    a.push_back(e.cov[d + i]);
  }
  return PSection(m, VectorField{m, v}, KForm::one_form(m, a));
}

UnitSection pi_pair_invert(const GroupoidDef& def, const PSection& s) {
  int d = s.chart.dim();
  UnitSection out = zero_unit_section(def.base, def.n());
  for (int i = 0; i < d; ++i) {
    out.vec[d + i] = s.vector.components[i];
    out.cov[d + i] = s.oneform.coeff(i);
  }
  return out;
}

Report iso_pair_check(const DiracFrame& d_m, const PairDirac& pd, const Infinitesimal& inf,
                      const BFrame& bf) {
  Report rep;
  rep.command = "iso-check pair";
  const Chart& m = d_m.chart;
  int d = m.dim();
  RF zero = rf_zero(d), one = rf_one(d);

  std::vector<PSection> base_secs;
  for (int i = 0; i < d; ++i) {
    VectorField v = VectorField::zero(m);
    v.components[i] = one;
    base_secs.push_back(PSection(m, v, KForm(m, 1)));
    KForm a(m, 1);
    a.coeff(i) = one;
    base_secs.push_back(PSection(m, VectorField::zero(m), a));
  }
  if (d >= 2) {
    VectorField v = VectorField::zero(m);
    v.components[1] = RF::variable(d, 0);
    KForm a(m, 1);
    a.coeff(0) = RF::variable(d, 1);
    base_secs.push_back(PSection(m, v, a));
  }

  CheckEntry& pi_id = rep.add("Pi ∘ Pi^-1 = id");
  for (const auto& s : base_secs) {
    PSection back = pi_pair_apply(m, pi_pair_invert(pd.def, s));
    if (!(back - s).is_zero()) { pi_id.status = CheckStatus::Fail; break; }
  }
  if (pi_id.status == CheckStatus::Pass) pi_id.detail = "identity on base sections";

  CheckEntry& pi_inv = rep.add("Pi^-1 ∘ Pi = id modulo the s-core");
  for (const auto& e : bf.representatives) {
    UnitSection back = pi_pair_invert(pd.def, pi_pair_apply(m, e));
    if (!coset_equal(bf, back, e)) { pi_inv.status = CheckStatus::Fail; break; }
  }
  if (pi_inv.status == CheckStatus::Pass) pi_inv.detail = "identity on representatives";

  CheckEntry& tr = rep.add("transported bracket is the standard Courant bracket on the base");
  for (size_t a = 0; a < base_secs.size() && tr.status == CheckStatus::Pass; ++a)
    for (size_t b = 0; b < base_secs.size(); ++b) {
      UnitSection ea = pi_pair_invert(pd.def, base_secs[a]);
      UnitSection eb = pi_pair_invert(pd.def, base_secs[b]);
      UnitSection bru = b_bracket(pd.def, inf, pd.frame, bf, ea, eb);
      PSection got = pi_pair_apply(m, bru);
      PSection want = courant_bracket_skew(base_secs[a], base_secs[b]);
      if (!(got - want).is_zero()) {
        tr.status = CheckStatus::Fail;
        tr.witnesses.push_back("sections " + std::to_string(a + 1) + "," +
                               std::to_string(b + 1));
        break;
      }
    }
  if (tr.status == CheckStatus::Pass)
    tr.detail = "independent of the input structure: the standard bracket is recovered";
  (void)zero;
  return rep;
}

// ---------------------------------------------------------------------------
// Bisection action

BActionResult bisection_action(const GroupoidDef& def, const Infinitesimal& inf,
                               const DiracFrame& frame, const BFrame& bf, const Bisection& k,
                               const UnitSection& e, const PointP& p) {
  int n = def.n(), pd = def.p();
  PointP g = k.map.apply(p);
  PointP ginv = def.inv.apply(g);
  PointP image = def.src.apply(g);

  // TTt(e) at p, as conditions for the lift at g^{-1}
  UnitSection head = ttt_units(inf.sym, e);
  QVec head_vec = evaluate_vector(head.vec, p.coords);
  QVec head_cov = evaluate_vector(head.cov, p.coords);
  QVec w = evaluate_matrix(inf.sym.j_s_units, p.coords).apply(head_vec, Rational(0));

  QMatrix dmat = frame.coefficient_matrix_at(ginv.coords);
  if (rank_of(dmat, Rational(0), Rational(1)) < n)
    throw Error(ErrorKind::RankDeficientAtPoint, "frame degenerates at K(p)^{-1}");
  QMatrix js = evaluate_matrix(jacobian(def.src), ginv.coords);
  // hat_s values of the frame covectors at g^{-1} on the A-basis at p
  QMatrix a_at = evaluate_matrix(inf.sym.a_units, p.coords);
  QMatrix hat_rows(n - pd, n, Rational(0));
  {
    RF zg = rf_zero(n), og = rf_one(n);
    for (int j = 0; j < n - pd; ++j) {
      RFVec tl = tangent_product(inf.sym.s_side.ctx, RFVec(static_cast<size_t>(n), zg),
                                 inf.sym.s_side.a_basis.column(j), zg, og);
      QVec tl_num = evaluate_vector(tl, ginv.coords);
      for (int s = 0; s < n; ++s) {
        Rational acc(0);
        for (int i = 0; i < n; ++i) acc += dmat.at(n + i, s) * tl_num[i];
        hat_rows.at(j, s) = acc;
      }
    }
  }
  QMatrix sys(n, n, Rational(0));
  QVec rhs(static_cast<size_t>(n), Rational(0));
  for (int i = 0; i < pd; ++i) {
    for (int s = 0; s < n; ++s) {
      Rational acc(0);
      for (int kk = 0; kk < n; ++kk) acc += js.at(i, kk) * dmat.at(kk, s);
      sys.at(i, s) = acc;
    }
    rhs[static_cast<size_t>(i)] = w[static_cast<size_t>(i)];
  }
  for (int j = 0; j < n - pd; ++j) {
    for (int s = 0; s < n; ++s) sys.at(pd + j, s) = hat_rows.at(j, s);
    Rational acc(0);
    for (int i = 0; i < n; ++i) acc += head_cov[i] * a_at.at(i, j);
    rhs[static_cast<size_t>(pd + j)] = acc;
  }
  auto sol = solve_linear(sys, rhs, Rational(0), Rational(1));
  if (!sol.consistent)
    throw Error(ErrorKind::NoLift,
                "no element of D(K(p)^{-1}) has Pontryagin source TTt(e)(p)");

  // composable context at lift(g^{-1}, eps(p))
  PointP up = def.unit.apply(p);
  PointP pair_pt{def.pair_chart, ginv.coords};
  pair_pt.coords.insert(pair_pt.coords.end(), up.coords.begin(), up.coords.end());
  PointP c{def.composable, {}};
  for (const auto& comp : def.lift.components) c.coords.push_back(comp.evaluate(pair_pt.coords));
  MultCtx<Rational> ctx = mult_ctx_at(def, c);

  SmoothMap rk = right_translation_map(def, k);
  QMatrix j_rk = evaluate_matrix(jacobian(rk), ginv.coords);
  SmoothMap rk_inv = right_translation_map(def, inverse_bisection(def, k));
  QMatrix j_rki = evaluate_matrix(jacobian(rk_inv), def.unit.apply(image).coords);

  QVec e_vec = evaluate_vector(e.vec, p.coords);
  QVec e_cov = evaluate_vector(e.cov, p.coords);

  auto act = [&](const QVec& coeffs) {
    QVec v(n, Rational(0)), a(n, Rational(0));
    for (int s = 0; s < n; ++s)
      for (int i = 0; i < n; ++i) {
        v[i] += dmat.at(i, s) * coeffs[s];
        a[i] += dmat.at(n + i, s) * coeffs[s];
      }
    QVec v_star = tangent_product(ctx, v, e_vec, Rational(0), Rational(1));
    QVec a_star = cotangent_product(ctx, a, e_cov, Rational(0), Rational(1));
    BActionResult r;
    r.base_point = image;
    r.vec = j_rk.apply(v_star, Rational(0));
    r.cov = j_rki.transposed().apply(a_star, Rational(0));
    return r;
  };

  BActionResult out = act(sol.particular);
  // independence of the lift: every homogeneous direction must move the
  // result inside the s-core
  for (const auto& dir : sol.nullspace) {
    QVec shifted = sol.particular;
    for (size_t i = 0; i < shifted.size(); ++i) shifted[i] += dir[i];
    BActionResult alt = act(shifted);
    if (!coset_equal_at(bf, image, alt.vec, alt.cov, out.vec, out.cov))
      throw Error(ErrorKind::NoLift,
                  "action depends on the lift (the input frame is not multiplicative)");
  }
  return out;
}

}  // namespace dgv
