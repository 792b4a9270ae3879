#include "dgv/infinitesimal.hpp"

#include <sstream>

namespace dgv {

namespace {

RF zero_rf(const Chart& c) { return rf_zero(c.dim()); }
RF one_rf(const Chart& c) { return rf_one(c.dim()); }

std::string point_str(const PointP& p) {
  std::string out = "(";
  for (size_t i = 0; i < p.coords.size(); ++i)
    out += (i ? "," : "") + p.coords[i].str();
  return out + ")";
}

RFMatrix unit_sections_matrix(const std::vector<UnitSection>& fam) {
  if (fam.empty()) return RFMatrix();
  int n = static_cast<int>(fam[0].vec.size());
  RFMatrix m(2 * n, static_cast<int>(fam.size()), rf_zero(fam[0].base.dim()));
  for (size_t s = 0; s < fam.size(); ++s)
    for (int i = 0; i < n; ++i) {
      m.at(i, static_cast<int>(s)) = fam[s].vec[i];
      m.at(n + i, static_cast<int>(s)) = fam[s].cov[i];
    }
  return m;
}

std::string denominators_of(const RFMatrix& m, const std::vector<std::string>& names) {
  std::vector<Polynomial> seen;
  std::string out;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const Polynomial& d = m.at(i, j).den();
      if (d.is_constant()) continue;
      bool dup = false;
      for (const auto& s : seen)
        if (s == d) { dup = true; break; }
      if (!dup) {
        seen.push_back(d);
        if (!out.empty()) out += "; ";
        out += d.str(names);
      }
    }
  return out;
}

}  // namespace

UnitSection unit_section(const Chart& base, RFVec vec, RFVec cov) {
  return UnitSection{base, std::move(vec), std::move(cov)};
}

UnitSection zero_unit_section(const Chart& base, int fiber_dim) {
  return UnitSection{base, RFVec(static_cast<size_t>(fiber_dim), rf_zero(base.dim())),
                     RFVec(static_cast<size_t>(fiber_dim), rf_zero(base.dim()))};
}

UnitSection UnitSection::operator+(const UnitSection& o) const {
  UnitSection r = *this;
  for (size_t i = 0; i < vec.size(); ++i) {
    r.vec[i] += o.vec[i];
    r.cov[i] += o.cov[i];
  }
  return r;
}

UnitSection UnitSection::operator-(const UnitSection& o) const {
  UnitSection r = *this;
  for (size_t i = 0; i < vec.size(); ++i) {
    r.vec[i] -= o.vec[i];
    r.cov[i] -= o.cov[i];
  }
  return r;
}

UnitSection UnitSection::scaled(const RF& f) const {
  UnitSection r = *this;
  for (size_t i = 0; i < vec.size(); ++i) {
    r.vec[i] *= f;
    r.cov[i] *= f;
  }
  return r;
}

bool UnitSection::is_zero() const {
  for (const auto& x : vec)
    if (!x.is_zero()) return false;
  for (const auto& x : cov)
    if (!x.is_zero()) return false;
  return true;
}

RF pairing_units(const UnitSection& a, const UnitSection& b) {
  RF acc = zero_rf(a.base);
  for (size_t i = 0; i < a.vec.size(); ++i)
    acc += a.cov[i] * b.vec[i] + b.cov[i] * a.vec[i];
  return acc;
}

UnitSection restrict_psection(const GroupoidDef& def, const PSection& s) {
  require_same_chart(s.chart, def.total, "restricted section");
  return UnitSection{def.base, restrict_components(s.vector.components, def.unit),
                     restrict_components(s.oneform.coeffs(), def.unit)};
}

std::vector<UnitSection> restrict_frame(const GroupoidDef& def, const DiracFrame& frame) {
  std::vector<UnitSection> out;
  out.reserve(frame.sections.size());
  for (const auto& s : frame.sections) out.push_back(restrict_psection(def, s));
  return out;
}

UnitSection tts_units(const GroupoidSym& sym, const UnitSection& u) {
  AmbientPair p = pontryagin_source(sym.unit_side_s, u.vec, u.cov);
  return UnitSection{u.base, p.vec, p.cov};
}

UnitSection ttt_units(const GroupoidSym& sym, const UnitSection& u) {
  AmbientPair p = pontryagin_target(sym.unit_side_t, u.vec, u.cov);
  return UnitSection{u.base, p.vec, p.cov};
}

bool in_ker_tts(const GroupoidSym& sym, const UnitSection& u) {
  return tts_units(sym, u).is_zero();
}

bool in_ker_ttt(const GroupoidSym& sym, const UnitSection& u) {
  return ttt_units(sym, u).is_zero();
}

bool in_units_fiber(const GroupoidSym& sym, const UnitSection& u) {
  RF zero = rf_zero(u.base.dim());
  // tangent part reproduced by T eps of its base shadow
  RFVec shadow = sym.j_s_units.apply(u.vec, zero);
  RFVec back = sym.j_eps.apply(shadow, zero);
  for (size_t i = 0; i < u.vec.size(); ++i)
    if (u.vec[i] != back[i]) return false;
  // cotangent part annihilates T eps(TP)
  RFVec on_tp = sym.j_eps.transposed().apply(u.cov, zero);
  for (const auto& x : on_tp)
    if (!x.is_zero()) return false;
  return true;
}

int generic_rank(const std::vector<UnitSection>& fam) {
  if (fam.empty()) return 0;
  const Chart& base = fam[0].base;
  return rank_of(unit_sections_matrix(fam), rf_zero(base.dim()), rf_one(base.dim()));
}

bool span_equal(const std::vector<UnitSection>& a, const std::vector<UnitSection>& b) {
  std::vector<UnitSection> both = a;
  both.insert(both.end(), b.begin(), b.end());
  int ra = generic_rank(a), rb = generic_rank(b), rab = generic_rank(both);
  return ra == rb && rb == rab;
}

bool in_span(const std::vector<UnitSection>& fam, const UnitSection& u) {
  std::vector<UnitSection> ext = fam;
  ext.push_back(u);
  return generic_rank(ext) == generic_rank(fam);
}

// ---------------------------------------------------------------------------

Infinitesimal compute_infinitesimal(const GroupoidDef& def, const DiracFrame& frame) {
  Infinitesimal inf{groupoid_sym(def), {}, {}, {}, {}, ""};
  inf.restricted = restrict_frame(def, frame);
  int n = def.n(), p = def.p();
  const Chart& base = def.base;
  RF zero = zero_rf(base), one = one_rf(base);

  // units algebroid: TTt of the restriction, reduced to an independent set
  std::vector<UnitSection> images;
  for (const auto& u : inf.restricted) images.push_back(ttt_units(inf.sym, u));
  RFMatrix img = unit_sections_matrix(images);
  Echelon<RF> ech = echelon(img, zero, one);
  if (ech.rank() == 0 && n > p)
    throw Error(ErrorKind::RankDrop, "units algebroid degenerates along the units");
  for (int c : ech.pivot_cols) inf.units_frame.push_back(images[c]);

  // cores: solve TTs = 0 (resp. TTt = 0) on the restricted span
  auto core_of = [&](bool s_side) {
    std::vector<UnitSection> src;
    for (const auto& u : inf.restricted)
      src.push_back(s_side ? tts_units(inf.sym, u) : ttt_units(inf.sym, u));
    RFMatrix cond = unit_sections_matrix(src);
    auto coeffs = null_space(cond, zero, one);
    std::vector<UnitSection> out;
    for (const auto& c : coeffs) {
      UnitSection acc = zero_unit_section(base, n);
      for (size_t s = 0; s < inf.restricted.size(); ++s)
        acc = acc + inf.restricted[s].scaled(c[s]);
      out.push_back(acc);
    }
    return out;
  };
  inf.is_frame = core_of(true);
  inf.it_frame = core_of(false);

  int r = static_cast<int>(inf.is_frame.size());
  if (static_cast<int>(inf.it_frame.size()) != r)
    throw Error(ErrorKind::RankDrop, "s-core and t-core have different generic ranks");
  if (static_cast<int>(inf.units_frame.size()) + r != n)
    throw Error(ErrorKind::RankDrop,
                "splitting rank mismatch: rank(units) + rank(core) != dim G");

  inf.validity = denominators_of(unit_sections_matrix(inf.units_frame), base.coords);
  std::string v2 = denominators_of(unit_sections_matrix(inf.is_frame), base.coords);
  if (!v2.empty()) inf.validity += (inf.validity.empty() ? "" : "; ") + v2;
  return inf;
}

RFVec units_anchor(const GroupoidSym& sym, const UnitSection& u) {
  return sym.j_s_units.apply(u.vec, rf_zero(u.base.dim()));
}

// ---------------------------------------------------------------------------

namespace {

// The n x n symbolic system over G expressing TTs(sum c_i e_i(g)) on the
// tangential block and the A-basis values; shared by star-section solves.
struct StarSystem {
  RFMatrix lhs;  // n x n over G
  int n, p;
};

StarSystem star_system(const GroupoidDef& def, const GroupoidSym& sym, const DiracFrame& frame) {
  int n = def.n(), p = def.p();
  RF zero = rf_zero(n), one = rf_one(n);
  RFMatrix x_block(n, n, zero), a_block(n, n, zero);
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < n; ++i) {
      x_block.at(i, s) = frame.sections[s].vector.components[i];
      a_block.at(i, s) = frame.sections[s].oneform.coeff(i);
    }
  StarSystem sys{RFMatrix(n, n, zero), n, p};
  RFMatrix tangential = jacobian(def.src).multiply(x_block, zero);
  for (int i = 0; i < p; ++i)
    for (int s = 0; s < n; ++s) sys.lhs.at(i, s) = tangential.at(i, s);
  for (int j = 0; j < n - p; ++j) {
    RFVec tl = tangent_product(sym.s_side.ctx, RFVec(static_cast<size_t>(n), zero),
                               sym.s_side.a_basis.column(j), zero, one);
    for (int s = 0; s < n; ++s) sys.lhs.at(p + j, s) = dot(a_block.column(s), tl, zero);
  }
  return sys;
}

RFVec compose_with(const RFVec& v, const SmoothMap& inner) {
  return substitute_vector(v, inner.components, inner.source.dim());
}

}  // namespace

PSection invariant_extension(const GroupoidDef& def, const GroupoidSym& sym,
                             const UnitSection& sigma, ExtensionSide side) {
  int n = def.n();
  RF zero = rf_zero(n), one = rf_one(n);
  const bool left = side == ExtensionSide::Left;
  if (left && !in_ker_ttt(sym, sigma))
    throw Error(ErrorKind::WrongKernel, "left extension needs a section of ker TTt");
  if (!left && !in_ker_tts(sym, sigma))
    throw Error(ErrorKind::WrongKernel, "right extension needs a section of ker TTs");
  const SmoothMap& proj = left ? def.src : def.tgt;
  RFVec v_at = compose_with(sigma.vec, proj);
  RFVec tangent = left ? tangent_product(sym.s_side.ctx, RFVec(static_cast<size_t>(n), zero),
                                         v_at, zero, one)
                       : tangent_product(sym.t_side.ctx, v_at,
                                         RFVec(static_cast<size_t>(n), zero), zero, one);
  // base covector gamma with sigma.cov = (T proj)^* gamma
  RFVec gamma = sym.j_eps.transposed().apply(sigma.cov, rf_zero(def.p()));
  RFVec gamma_at = compose_with(gamma, proj);
  RFVec cov = jacobian(proj).transposed().apply(gamma_at, zero);
  VectorField v{def.total, tangent};
  KForm a = KForm::one_form(def.total, cov);
  return PSection(def.total, std::move(v), std::move(a));
}

StarSection star_section(const GroupoidDef& def, const Infinitesimal& inf,
                         const DiracFrame& frame, const UnitSection& shadow) {
  int n = def.n(), p = def.p();
  RF zero = rf_zero(n), one = rf_one(n);
  if (!in_units_fiber(inf.sym, shadow))
    throw Error(ErrorKind::GenericSolveFailed, "shadow is not a section of TP (+) A*G");
  StarSystem sys = star_system(def, inf.sym, frame);
  // right-hand side: the shadow's data pulled back through s
  RFVec rhs(static_cast<size_t>(n), zero);
  RFVec tp_coords = inf.sym.j_s_units.apply(shadow.vec, rf_zero(p));
  RFVec tp_at = compose_with(tp_coords, def.src);
  for (int i = 0; i < p; ++i) rhs[static_cast<size_t>(i)] = tp_at[static_cast<size_t>(i)];
  for (int j = 0; j < n - p; ++j) {
    RF val = dot(shadow.cov, inf.sym.a_units.column(j), rf_zero(p));
    rhs[static_cast<size_t>(p + j)] = val.substitute(def.src.components, n);
  }
  LinearSolution<RF> sol = solve_linear(sys.lhs, rhs, zero, one);
  if (!sol.consistent)
    throw Error(ErrorKind::GenericSolveFailed, "star-section system inconsistent over the function field");
  PSection xi = PSection::zero(def.total);
  for (int s = 0; s < n; ++s) xi = xi + frame.sections[s].scaled(sol.particular[s]);
  // correct the restriction to reproduce the shadow exactly
  UnitSection delta = restrict_psection(def, xi) - shadow;
  if (!delta.is_zero()) {
    if (!in_ker_tts(inf.sym, delta))
      throw Error(ErrorKind::GenericSolveFailed, "star-section correction leaves ker TTs");
    xi = xi - invariant_extension(def, inf.sym, delta, ExtensionSide::Right);
  }
  return StarSection{xi, shadow};
}

UnitSection star_bracket(const GroupoidDef& def, const Infinitesimal& inf,
                         const DiracFrame& frame, const UnitSection& xi_bar,
                         const UnitSection& eta_bar) {
  StarSection xi = star_section(def, inf, frame, xi_bar);
  StarSection eta = star_section(def, inf, frame, eta_bar);
  UnitSection out = restrict_psection(def, dorfman_bracket(xi.section, eta.section));
  if (!in_units_fiber(inf.sym, out))
    throw Error(ErrorKind::GenericSolveFailed,
                "star bracket does not restrict into TP (+) A*G");
  // independence of the representative: perturb by f * sigma^r with f
  // vanishing on the units, one deterministic direction per core generator
  int n = def.n();
  SmoothMap eps_s = compose(def.unit, def.src);  // G -> G
  RF f = rf_zero(n);
  for (int i = 0; i < n; ++i) {
    RF diff = RF::variable(n, i) - eps_s.components[i];
    if (!diff.is_zero()) { f = diff; break; }
  }
  if (!f.is_zero()) {
    for (const UnitSection& sigma : inf.is_frame) {
      PSection pert = invariant_extension(def, inf.sym, sigma, ExtensionSide::Right).scaled(f);
      UnitSection out2 =
          restrict_psection(def, dorfman_bracket(xi.section + pert, eta.section));
      UnitSection d = out2 - out;
      if (!d.is_zero())
        throw Error(ErrorKind::GenericSolveFailed,
                    "star bracket depends on the star-section representative");
    }
  }
  return out;
}

UnitSection core_bracket(const GroupoidDef& def, const Infinitesimal& inf,
                         const UnitSection& sigma, const UnitSection& tau) {
  PSection sr = invariant_extension(def, inf.sym, sigma, ExtensionSide::Right);
  PSection tr = invariant_extension(def, inf.sym, tau, ExtensionSide::Right);
  return restrict_psection(def, dorfman_bracket(sr, tr));
}

StarDerivative lie_derivative_star(const GroupoidDef& def, const Infinitesimal& inf,
                                   [[maybe_unused]] const DiracFrame& frame,
                                   const RFVec& z_column, const StarSection& xi) {
  int n = def.n();
  // Z must lie in ker Tt along the units
  RFVec tt = inf.sym.j_t_units.apply(z_column, rf_zero(def.p()));
  for (const auto& x : tt)
    if (!x.is_zero())
      throw Error(ErrorKind::WrongKernel, "Z is not a section of ker Tt along the units");
  UnitSection z_sec = unit_section(def.base, z_column,
                                   RFVec(static_cast<size_t>(n), rf_zero(def.p())));
  PSection zl = invariant_extension(def, inf.sym, z_sec, ExtensionSide::Left);
  // plain Lie derivative of the pair
  VectorField dv = lie_bracket(zl.vector, xi.section.vector);
  KForm da = lie_derivative_one_form(zl.vector, xi.section.oneform);
  PSection der(def.total, dv, da);
  UnitSection rest = restrict_psection(def, der);
  UnitSection head = ttt_units(inf.sym, rest);
  UnitSection remainder = rest - head;
  if (!in_ker_ttt(inf.sym, remainder))
    throw Error(ErrorKind::GenericSolveFailed, "derivative remainder leaves ker TTt");
  PSection rem_l = invariant_extension(def, inf.sym, remainder, ExtensionSide::Left);
  PSection star_part = der - rem_l;
  return StarDerivative{der, StarSection{star_part, head}, remainder};
}

BaseDirac base_dirac(const GroupoidDef& def, const Infinitesimal& inf, const DiracFrame& frame,
                     int samples, std::uint64_t seed) {
  BaseDirac out;
  out.report.command = "base-dirac";
  out.report.seed = seed;
  out.report.samples = samples;
  int n = def.n(), p = def.p();
  const Chart& base = def.base;
  RF zero = rf_zero(p), one = rf_one(p);

  // rank constancy of G0 ∩ TP at sampled base points (the smoothness
  // hypothesis of the construction)
  CheckEntry& hyp = out.report.add("rank-constancy of G0 ∩ TP");
  {
    RationalSampler s(seed);
    int done = 0, guard = 0;
    int seen_rank = -1;
    std::vector<std::string> visited;
    while (done < samples && guard < 100 * samples + 100) {
      ++guard;
      PointP bp = sample_base_point(def, s);
      try {
        PointP up = def.unit.apply(bp);
        QMatrix dmat = frame.coefficient_matrix_at(up.coords);
        if (rank_of(dmat, Rational(0), Rational(1)) < n) continue;
        visited.push_back(point_str(bp));
        // { w in TP : (T eps w, 0) in D(eps p) }: solve on coefficients
        QMatrix je = evaluate_matrix(inf.sym.j_eps, bp.coords);
        QMatrix sys(2 * n, n + p, Rational(0));
        for (int i = 0; i < n; ++i) {
          for (int c = 0; c < n; ++c) {
            sys.at(i, c) = dmat.at(i, c);
            sys.at(n + i, c) = dmat.at(n + i, c);
          }
          for (int w = 0; w < p; ++w) sys.at(i, n + w) = -je.at(i, w);
        }
        auto ns = null_space(sys, Rational(0), Rational(1));
        // project solutions onto the w-block and count independent ones
        QMatrix wblock(p, static_cast<int>(ns.size()), Rational(0));
        for (size_t c = 0; c < ns.size(); ++c)
          for (int w = 0; w < p; ++w) wblock.at(w, static_cast<int>(c)) = ns[c][n + w];
        int rk = rank_of(wblock, Rational(0), Rational(1));
        if (seen_rank < 0) seen_rank = rk;
        if (rk != seen_rank) {
          hyp.status = CheckStatus::Fail;
          hyp.detail = "rank of G0 ∩ TP jumps between samples (" + std::to_string(seen_rank) +
                       " vs " + std::to_string(rk) + ")";
          hyp.witnesses.push_back("p=(" + bp.coords[0].str() + ",...)");
          break;
        }
        ++done;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleAtPoint) throw;
      }
    }
    if (hyp.status == CheckStatus::Pass)
      hyp.detail = "constant rank " + std::to_string(seen_rank < 0 ? 0 : seen_rank) + " at " +
                   std::to_string(done) + " samples";
    for (const auto& w : visited) hyp.witnesses.push_back(w);
  }
  if (out.report.entries.back().status == CheckStatus::Fail) {
    CheckEntry& na = out.report.add("base structure");
    na.status = CheckStatus::NotApplicable;
    na.detail = "hypothesis failed; no base structure produced";
    return out;
  }

  // generic solve: combinations of the restricted frame with cotangent
  // part annihilating AG
  RFMatrix cond(n - p, n, zero);
  for (int j = 0; j < n - p; ++j)
    for (int s = 0; s < n; ++s)
      cond.at(j, s) = dot(inf.restricted[s].cov, inf.sym.a_units.column(j), zero);
  auto coeffs = null_space(cond, zero, one);
  std::vector<PSection> base_sections;
  for (const auto& c : coeffs) {
    UnitSection acc = zero_unit_section(base, n);
    for (int s = 0; s < n; ++s) acc = acc + inf.restricted[s].scaled(c[s]);
    // push forward: tangent by Tt, cotangent by pulling back along eps
    RFVec tv = inf.sym.j_t_units.apply(acc.vec, zero);
    RFVec gamma = inf.sym.j_eps.transposed().apply(acc.cov, zero);
    base_sections.push_back(
        PSection(base, VectorField{base, tv}, KForm::one_form(base, gamma)));
  }
  CheckEntry& built = out.report.add("base frame");
  if (static_cast<int>(base_sections.size()) != p) {
    built.status = CheckStatus::Fail;
    built.detail = "generic solution space has rank " +
                   std::to_string(base_sections.size()) + ", expected " + std::to_string(p);
    return out;
  }
  out.frame = DiracFrame{base, base_sections, frame.label + " on base", PointP{base, {}}};
  // witness: first pole-free sampled base point with full rank
  {
    RationalSampler s(seed ^ 0xabcdefull);
    for (int a = 0; a < 100; ++a) {
      PointP bp = sample_base_point(def, s);
      try {
        QMatrix m = out.frame.coefficient_matrix_at(bp.coords);
        if (rank_of(m, Rational(0), Rational(1)) == p) {
          out.frame.witness = bp;
          break;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleAtPoint) throw;
      }
    }
  }
  Report lag = check_lagrangian(out.frame);
  out.report.append(lag, "lagrangian");
  built.detail = "frame of rank " + std::to_string(p) + " on the base";

  // forward-Dirac spot check of t at sampled arrows: every element of the
  // base structure lifts through TTt from D at sampled arrows over it
  CheckEntry& fwd = out.report.add("forward-Dirac spot check of t");
  {
    RationalSampler s(seed ^ 0x5bd1e995ull);
    int done = 0, guard = 0;
    while (done < samples && guard < 100 * samples + 100 &&
           fwd.status == CheckStatus::Pass) {
      ++guard;
      ComposablePoint cp = sample_composable(def, s);
      const PointP& g = cp.g;
      try {
        PointP bp = def.tgt.apply(g);
        QMatrix dmat = frame.coefficient_matrix_at(g.coords);
        if (rank_of(dmat, Rational(0), Rational(1)) < n) continue;
        QMatrix bmat = out.frame.coefficient_matrix_at(bp.coords);
        if (rank_of(bmat, Rational(0), Rational(1)) < p) continue;
        QMatrix jt = evaluate_matrix(jacobian(def.tgt), g.coords);
        // for each base generator (v, gamma): find d in D(g) with
        // Tt(d_vec) = v and d_cov = (Tt)^* gamma
        for (int bidx = 0; bidx < p && fwd.status == CheckStatus::Pass; ++bidx) {
          QVec v(p, Rational(0)), gamma(p, Rational(0));
          for (int i = 0; i < p; ++i) {
            v[i] = bmat.at(i, bidx);
            gamma[i] = bmat.at(p + i, bidx);
          }
          QVec alpha = jt.transposed().apply(gamma, Rational(0));
          // solve: dmat-combination with tangent pushing to v and exact
          // cotangent alpha
          QMatrix sys(p + n, n, Rational(0));
          QVec rhs(static_cast<size_t>(p + n), Rational(0));
          for (int c = 0; c < n; ++c) {
            for (int i = 0; i < p; ++i) {
              Rational acc(0);
              for (int k = 0; k < n; ++k) acc += jt.at(i, k) * dmat.at(k, c);
              sys.at(i, c) = acc;
            }
            for (int i = 0; i < n; ++i) sys.at(p + i, c) = dmat.at(n + i, c);
          }
          for (int i = 0; i < p; ++i) rhs[i] = v[i];
          for (int i = 0; i < n; ++i) rhs[p + i] = alpha[i];
          auto sol = solve_linear(sys, rhs, Rational(0), Rational(1));
          if (!sol.consistent) {
            fwd.status = CheckStatus::Fail;
            fwd.detail = "a base element does not lift through TTt";
            fwd.witnesses.push_back("arrow with target (" + bp.coords[0].str() + ",...)");
          }
        }
        ++done;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleAtPoint) throw;
      }
    }
    if (fwd.status == CheckStatus::Pass)
      fwd.detail = "t pushes D onto the base structure at " + std::to_string(done) + " samples";
  }
  out.applicable = out.report.passed();
  return out;
}

Report integrability_criterion(const GroupoidDef& def, const Infinitesimal& inf,
                               const DiracFrame& frame) {
  Report rep;
  rep.command = "integrability";
  int n_units = static_cast<int>(inf.units_frame.size());

  // star sections of the units frame, reused across all brackets
  std::vector<StarSection> stars;
  for (const auto& u : inf.units_frame) stars.push_back(star_section(def, inf, frame, u));

  CheckEntry& closure_a = rep.add("star bracket closes in the units algebroid");
  std::vector<std::vector<UnitSection>> table(
      n_units, std::vector<UnitSection>());
  std::vector<UnitSection> dp_frame = inf.restricted;
  for (int i = 0; i < n_units && closure_a.status == CheckStatus::Pass; ++i) {
    for (int j = 0; j < n_units; ++j) {
      UnitSection br = restrict_psection(def, dorfman_bracket(stars[i].section, stars[j].section));
      table[i].push_back(br);
      if (!in_units_fiber(inf.sym, br)) {
        closure_a.status = CheckStatus::Fail;
        closure_a.detail = "bracket leaves TP (+) A*G";
        closure_a.witnesses.push_back("generators " + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1));
        break;
      }
      // membership in D|_P by pairing against the restricted frame
      for (const auto& d : dp_frame) {
        if (!pairing_units(br, d).is_zero()) {
          closure_a.status = CheckStatus::Fail;
          closure_a.detail = "bracket leaves the structure along the units";
          closure_a.witnesses.push_back("generators " + std::to_string(i + 1) + "," +
                                        std::to_string(j + 1));
          break;
        }
      }
      if (closure_a.status == CheckStatus::Fail) break;
    }
  }
  if (closure_a.status == CheckStatus::Pass)
    closure_a.detail = "all generator brackets are sections of the units algebroid";

  CheckEntry& jacobi = rep.add("Jacobi identity for the star bracket");
  if (closure_a.status == CheckStatus::Fail) {
    jacobi.status = CheckStatus::NotApplicable;
    jacobi.detail = "bracket not closed";
  } else {
    for (int i = 0; i < n_units && jacobi.status == CheckStatus::Pass; ++i)
      for (int j = 0; j < n_units && jacobi.status == CheckStatus::Pass; ++j)
        for (int k = 0; k < n_units; ++k) {
          // [zeta,[xi,eta]]|_P through double Dorfman brackets of star
          // sections (valid once single brackets close)
          UnitSection a = restrict_psection(
              def, dorfman_bracket(stars[i].section,
                                   dorfman_bracket(stars[j].section, stars[k].section)));
          UnitSection b = restrict_psection(
              def, dorfman_bracket(stars[j].section,
                                   dorfman_bracket(stars[k].section, stars[i].section)));
          UnitSection c = restrict_psection(
              def, dorfman_bracket(stars[k].section,
                                   dorfman_bracket(stars[i].section, stars[j].section)));
          UnitSection sum = a + b + c;
          if (!sum.is_zero()) {
            jacobi.status = CheckStatus::Fail;
            jacobi.detail = "Jacobi identity fails on generators";
            jacobi.witnesses.push_back(std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                       "," + std::to_string(k + 1));
            break;
          }
        }
    if (jacobi.status == CheckStatus::Pass)
      jacobi.detail = "holds on all generator triples";
  }

  CheckEntry& closure_c = rep.add("core bracket closes in the s-core");
  for (size_t i = 0; i < inf.is_frame.size() && closure_c.status == CheckStatus::Pass; ++i)
    for (size_t j = 0; j < inf.is_frame.size(); ++j) {
      UnitSection br = core_bracket(def, inf, inf.is_frame[i], inf.is_frame[j]);
      bool ok = in_ker_tts(inf.sym, br);
      if (ok)
        for (const auto& d : dp_frame)
          if (!pairing_units(br, d).is_zero()) { ok = false; break; }
      if (!ok) {
        closure_c.status = CheckStatus::Fail;
        closure_c.detail = "core bracket leaves the s-core";
        closure_c.witnesses.push_back("generators " + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1));
        break;
      }
    }
  if (closure_c.status == CheckStatus::Pass)
    closure_c.detail = "all core generator brackets stay in the s-core";

  bool criterion = rep.passed();
  CourantTensor t = courant_tensor(frame);
  CheckEntry& cross = rep.add("criterion agrees with the Courant tensor");
  if (criterion == t.closed) {
    cross.detail = criterion ? "both report a closed structure"
                             : "both report a non-closed structure";
  } else {
    cross.status = CheckStatus::Fail;
    cross.detail = "criterion and direct tensor disagree";
  }
  return rep;
}

}  // namespace dgv
