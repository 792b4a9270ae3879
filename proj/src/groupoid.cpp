#include "dgv/groupoid.hpp"

#include <sstream>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace dgv {

namespace {

std::string point_str(const PointP& p) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < p.coords.size(); ++i) os << (i ? "," : "") << p.coords[i].str();
  os << ")";
  return os.str();
}

RFMatrix hstack(const RFMatrix& a, const RFMatrix& b, const RF& zero) {
  RFMatrix out(a.rows(), a.cols() + b.cols(), zero);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) out.at(i, a.cols() + j) = b.at(i, j);
  }
  return out;
}

RFMatrix columns_matrix(int rows, const std::vector<RFVec>& cols, const RF& zero) {
  return RFMatrix::from_columns(rows, cols, zero);
}

// Distinct non-constant denominators of the entries, as a readable string.
std::string denominators_string(const RFMatrix& m, const std::vector<std::string>& names) {
  std::vector<Polynomial> seen;
  std::string out;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const Polynomial& d = m.at(i, j).den();
      if (d.is_constant()) continue;
      bool dup = false;
      for (const auto& s : seen)
        if (s == d) { dup = true; break; }
      if (dup) continue;
      seen.push_back(d);
      if (!out.empty()) out += "; ";
      out += d.str(names);
    }
  return out;
}

}  // namespace

SmoothMap lift_apply(const GroupoidDef& def, const SmoothMap& f1, const SmoothMap& f2) {
  require_same_chart(f1.source, f2.source, "lift_apply pair source");
  require_same_chart(f1.target, def.total, "lift_apply first factor");
  require_same_chart(f2.target, def.total, "lift_apply second factor");
  std::vector<RF> assignment = f1.components;
  assignment.insert(assignment.end(), f2.components.begin(), f2.components.end());
  SmoothMap out{f1.source, def.composable, {}};
  for (const auto& c : def.lift.components)
    out.components.push_back(c.substitute(assignment, f1.source.dim()));
  return out;
}

namespace {

void check_identity(Report& rep, const std::string& name, const SmoothMap& a, const SmoothMap& b,
                    const Chart& value_chart) {
  CheckEntry& e = rep.add(name);
  for (size_t i = 0; i < a.components.size(); ++i) {
    if (a.components[i] != b.components[i]) {
      e.status = CheckStatus::Fail;
      e.detail = "component '" + value_chart.coords[i] + "' differs";
      e.witnesses.push_back(a.components[i].str(a.source.coords) + "  vs  " +
                            b.components[i].str(b.source.coords));
      return;
    }
  }
  e.detail = "rational-map identity";
}

SmoothMap projection_map(const Chart& source, const Chart& target, int offset) {
  SmoothMap m{source, target, {}};
  for (int i = 0; i < target.dim(); ++i)
    m.components.push_back(RF::variable(source.dim(), offset + i));
  return m;
}

}  // namespace

Report check_groupoid_axioms(const GroupoidDef& def, int samples, std::uint64_t seed) {
  Report rep;
  rep.command = "check-groupoid-axioms";
  rep.samples = samples;
  rep.seed = seed;
  SmoothMap id_p = SmoothMap::identity(def.base);
  SmoothMap id_g = SmoothMap::identity(def.total);

  check_identity(rep, "src(unit) = id", compose(def.src, def.unit), id_p, def.base);
  check_identity(rep, "tgt(unit) = id", compose(def.tgt, def.unit), id_p, def.base);
  check_identity(rep, "tgt(mult) = tgt(pr1)", compose(def.tgt, def.mult),
                 compose(def.tgt, def.pr1), def.base);
  check_identity(rep, "src(mult) = src(pr2)", compose(def.src, def.mult),
                 compose(def.src, def.pr2), def.base);
  check_identity(rep, "src(pr1) = tgt(pr2)", compose(def.src, def.pr1),
                 compose(def.tgt, def.pr2), def.base);
  check_identity(rep, "src(inv) = tgt", compose(def.src, def.inv), def.tgt, def.base);
  check_identity(rep, "tgt(inv) = src", compose(def.tgt, def.inv), def.src, def.base);

  // lift contract
  int n = def.n();
  SmoothMap proj1 = projection_map(def.pair_chart, def.total, 0);
  SmoothMap proj2 = projection_map(def.pair_chart, def.total, n);
  SmoothMap lifted = def.lift;
  check_identity(rep, "pr1(lift) = first", compose(def.pr1, lifted), proj1, def.total);
  check_identity(rep, "tgt(pr2(lift)) = src(first)", compose(def.tgt, compose(def.pr2, lifted)),
                 compose(def.src, proj1), def.base);
  SmoothMap relift = lift_apply(def, def.pr1, def.pr2);  // C -> C
  check_identity(rep, "pr2(lift(pr1,pr2)) = pr2", compose(def.pr2, relift), def.pr2, def.total);
  check_identity(rep, "mult(lift(pr1,pr2)) = mult", compose(def.mult, relift), def.mult, def.total);

  // unit and inverse laws, symbolically through the lift
  SmoothMap unit_s = compose(def.unit, def.src);
  SmoothMap unit_t = compose(def.unit, def.tgt);
  check_identity(rep, "g * unit(src(g)) = g",
                 compose(def.mult, lift_apply(def, id_g, unit_s)), id_g, def.total);
  check_identity(rep, "unit(tgt(g)) * g = g",
                 compose(def.mult, lift_apply(def, unit_t, id_g)), id_g, def.total);
  check_identity(rep, "g * inv(g) = unit(tgt(g))",
                 compose(def.mult, lift_apply(def, id_g, def.inv)), unit_t, def.total);
  check_identity(rep, "inv(g) * g = unit(src(g))",
                 compose(def.mult, lift_apply(def, def.inv, id_g)), unit_s, def.total);

  // associativity on three independent arrow slots, composability arranged
  // through the lift's fiber projection
  Chart triple{"triple:" + def.total.name, {}};
  for (int copy = 0; copy < 3; ++copy)
    for (const auto& c : def.total.coords)
      triple.coords.push_back(c + "_w" + std::to_string(copy + 1));
  SmoothMap q1 = projection_map(triple, def.total, 0);
  SmoothMap q2 = projection_map(triple, def.total, n);
  SmoothMap q3 = projection_map(triple, def.total, 2 * n);
  SmoothMap h = compose(def.pr2, lift_apply(def, q1, q2));   // composable with q1
  SmoothMap k = compose(def.pr2, lift_apply(def, h, q3));    // composable with h
  SmoothMap gh = compose(def.mult, lift_apply(def, q1, h));
  SmoothMap hk = compose(def.mult, lift_apply(def, h, k));
  SmoothMap lhs = compose(def.mult, lift_apply(def, gh, k));
  SmoothMap rhs = compose(def.mult, lift_apply(def, q1, hk));
  check_identity(rep, "associativity", lhs, rhs, def.total);

  // submersivity of s and t: only dense-open evidence is decidable
  CheckEntry& sub = rep.add("source/target submersive (sampled evidence)");
  {
    RFMatrix js = jacobian(def.src), jt = jacobian(def.tgt);
    RationalSampler smp(seed);
    int done = 0, guard = 0;
    std::vector<std::string> visited;
    while (done < samples && guard < 100 * samples + 100) {
      ++guard;
      try {
        ComposablePoint cp = sample_composable(def, smp);
        QMatrix js_at = evaluate_matrix(js, cp.g.coords);
        QMatrix jt_at = evaluate_matrix(jt, cp.g.coords);
        if (rank_of(js_at, Rational(0), Rational(1)) < def.p() ||
            rank_of(jt_at, Rational(0), Rational(1)) < def.p()) {
          sub.status = CheckStatus::Fail;
          sub.detail = "rank drop of Ts or Tt";
          sub.witnesses.push_back(point_str(cp.g));
          break;
        }
        visited.push_back(point_str(cp.g));
        ++done;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleAtPoint) throw;
      }
    }
    if (sub.status == CheckStatus::Pass) {
      sub.detail = "full rank at " + std::to_string(done) +
                   " sampled arrows; submersivity holds on a dense open set only";
      for (const auto& w : visited) sub.witnesses.push_back(w);
    }
  }

  return rep;
}

// ---------------------------------------------------------------------------

template <class F>
Vec<F> tangent_product(const MultCtx<F>& ctx, const Vec<F>& v_g, const Vec<F>& v_h,
                       const F& zero, const F& one) {
  Matrix<F> stacked = ctx.j_pr1.stacked(ctx.j_pr2);
  Vec<F> rhs = v_g;
  rhs.insert(rhs.end(), v_h.begin(), v_h.end());
  LinearSolution<F> sol = solve_linear(stacked, rhs, zero, one);
  if (!sol.consistent)
    throw Error(ErrorKind::NotComposableTangent, "no composable lift of the tangent pair");
  for (const auto& w : sol.nullspace) {
    Vec<F> img = ctx.j_mult.apply(w, zero);
    for (const auto& x : img)
      if (!FieldOps<F>::is_zero(x))
        throw Error(ErrorKind::SingularSystem, "tangent product depends on the lift");
  }
  return ctx.j_mult.apply(sol.particular, zero);
}

template <class F>
Vec<F> cotangent_product(const MultCtx<F>& ctx, const Vec<F>& a_g, const Vec<F>& a_h,
                         const F& zero, const F& one) {
  Matrix<F> a = ctx.j_mult.transposed();
  Vec<F> rhs = ctx.j_pr1.transposed().apply(a_g, zero);
  Vec<F> rhs2 = ctx.j_pr2.transposed().apply(a_h, zero);
  for (size_t i = 0; i < rhs.size(); ++i) rhs[i] = rhs[i] + rhs2[i];
  LinearSolution<F> sol = solve_linear(a, rhs, zero, one);
  if (!sol.consistent)
    throw Error(ErrorKind::NotComposableCovector,
                "hat_s of the first covector differs from hat_t of the second");
  if (!sol.nullspace.empty())
    throw Error(ErrorKind::SingularSystem, "multiplication not submersive at the point");
  return sol.particular;
}

template Vec<Rational> tangent_product(const MultCtx<Rational>&, const Vec<Rational>&,
                                       const Vec<Rational>&, const Rational&, const Rational&);
template Vec<RF> tangent_product(const MultCtx<RF>&, const Vec<RF>&, const Vec<RF>&,
                                 const RF&, const RF&);
template Vec<Rational> cotangent_product(const MultCtx<Rational>&, const Vec<Rational>&,
                                         const Vec<Rational>&, const Rational&, const Rational&);
template Vec<RF> cotangent_product(const MultCtx<RF>&, const Vec<RF>&, const Vec<RF>&,
                                   const RF&, const RF&);

MultCtx<RF> mult_ctx_along(const GroupoidDef& def, const SmoothMap& into_c) {
  int d = into_c.source.dim();
  MultCtx<RF> ctx;
  ctx.j_pr1 = substitute_matrix(jacobian(def.pr1), into_c.components, d);
  ctx.j_pr2 = substitute_matrix(jacobian(def.pr2), into_c.components, d);
  ctx.j_mult = substitute_matrix(jacobian(def.mult), into_c.components, d);
  return ctx;
}

MultCtx<Rational> mult_ctx_at(const GroupoidDef& def, const PointP& c_point) {
  MultCtx<Rational> ctx;
  ctx.j_pr1 = evaluate_matrix(jacobian(def.pr1), c_point.coords);
  ctx.j_pr2 = evaluate_matrix(jacobian(def.pr2), c_point.coords);
  ctx.j_mult = evaluate_matrix(jacobian(def.mult), c_point.coords);
  return ctx;
}

namespace {

RFMatrix compose_matrix(const RFMatrix& m, const SmoothMap& inner) {
  return substitute_matrix(m, inner.components, inner.source.dim());
}

SideCtx make_side(const GroupoidDef& def, const GroupoidSym& sym, bool s_side_flag,
                  bool at_units) {
  SideCtx side;
  const SmoothMap id_g = SmoothMap::identity(def.total);
  if (at_units) {
    side.domain = def.base;
    side.u_basis = sym.j_eps;
    side.a_basis = sym.a_units;
    side.w_basis = sym.w_units;  // replaced below for t-sides
    side.ctx = mult_ctx_along(def, lift_apply(def, def.unit, def.unit));
    side.source_or_target = s_side_flag ? compose(def.src, def.unit) : compose(def.tgt, def.unit);
    side.j_proj = s_side_flag ? sym.j_s_units : sym.j_t_units;
    side.j_eps_at = sym.j_eps;
  } else {
    side.domain = def.total;
    const SmoothMap& proj = s_side_flag ? def.src : def.tgt;
    side.u_basis = compose_matrix(sym.j_eps, proj);
    side.a_basis = compose_matrix(sym.a_units, proj);
    side.w_basis = compose_matrix(sym.w_units, proj);
    if (s_side_flag)
      side.ctx = mult_ctx_along(def, lift_apply(def, id_g, compose(def.unit, def.src)));
    else
      side.ctx = mult_ctx_along(def, lift_apply(def, compose(def.unit, def.tgt), id_g));
    side.source_or_target = proj;
    side.j_proj = jacobian(proj);
    side.j_eps_at = side.u_basis;
  }
  RF zero = rf_zero(side.domain.dim()), one = rf_one(side.domain.dim());
  if (!s_side_flag) {
    // matched ker-Ts representatives w_j = a_j - T eps(Ts a_j)
    RFMatrix js = at_units ? sym.j_s_units : compose_matrix(sym.j_s_units, def.tgt);
    RFMatrix proj_a = side.j_eps_at.multiply(js.multiply(side.a_basis, zero), zero);
    RFMatrix w(side.a_basis.rows(), side.a_basis.cols(), zero);
    for (int i = 0; i < w.rows(); ++i)
      for (int j = 0; j < w.cols(); ++j) w.at(i, j) = side.a_basis.at(i, j) - proj_a.at(i, j);
    side.w_basis = w;
  }
  RFMatrix basis = hstack(side.u_basis, side.a_basis, zero);
  auto inv = inverse_of(basis.transposed(), zero, one);
  if (!inv)
    throw Error(ErrorKind::GenericSolveFailed,
                "unit-locus frame T eps(TP) + AG is generically degenerate");
  side.basis_inv_t = *inv;
  return side;
}

}  // namespace

GroupoidSym groupoid_sym(const GroupoidDef& def) {
  GroupoidSym sym;
  int n = def.n(), p = def.p();
  RF zp = rf_zero(p), op = rf_one(p);
  sym.j_eps = jacobian(def.unit);
  sym.j_s_units = compose_matrix(jacobian(def.src), def.unit);
  sym.j_t_units = compose_matrix(jacobian(def.tgt), def.unit);
  auto a_cols = null_space(sym.j_t_units, zp, op);
  if (static_cast<int>(a_cols.size()) != n - p)
    throw Error(ErrorKind::RankDrop, "ker Tt along units has generic rank " +
                                         std::to_string(a_cols.size()) + ", expected " +
                                         std::to_string(n - p));
  sym.a_units = columns_matrix(n, a_cols, zp);
  auto w_cols = null_space(sym.j_s_units, zp, op);
  if (static_cast<int>(w_cols.size()) != n - p)
    throw Error(ErrorKind::RankDrop, "ker Ts along units has generic rank " +
                                         std::to_string(w_cols.size()) + ", expected " +
                                         std::to_string(n - p));
  sym.w_units = columns_matrix(n, w_cols, zp);
  auto s_ann = null_space(sym.w_units.transposed(), zp, op);
  sym.s_ann_units = columns_matrix(n, s_ann, zp);
  auto t_ann = null_space(sym.a_units.transposed(), zp, op);
  sym.t_ann_units = columns_matrix(n, t_ann, zp);
  sym.s_side = make_side(def, sym, true, false);
  sym.t_side = make_side(def, sym, false, false);
  sym.unit_side_s = make_side(def, sym, true, true);
  sym.unit_side_t = make_side(def, sym, false, true);
  return sym;
}

RFVec hat_s_symbolic(const SideCtx& side, const RFVec& alpha) {
  int d = side.domain.dim();
  RF zero = rf_zero(d), one = rf_one(d);
  int n = side.u_basis.rows();
  RFVec rhs(static_cast<size_t>(n), zero);
  int p = side.u_basis.cols();
  for (int j = 0; j < side.a_basis.cols(); ++j) {
    RFVec tl = tangent_product(side.ctx, RFVec(static_cast<size_t>(n), zero),
                               side.a_basis.column(j), zero, one);
    rhs[static_cast<size_t>(p + j)] = dot(alpha, tl, zero);
  }
  return side.basis_inv_t.apply(rhs, zero);
}

RFVec hat_t_symbolic(const SideCtx& side, const RFVec& alpha) {
  int d = side.domain.dim();
  RF zero = rf_zero(d), one = rf_one(d);
  int n = side.u_basis.rows();
  RFVec rhs(static_cast<size_t>(n), zero);
  int p = side.u_basis.cols();
  for (int j = 0; j < side.a_basis.cols(); ++j) {
    RFVec tr = tangent_product(side.ctx, side.w_basis.column(j),
                               RFVec(static_cast<size_t>(n), zero), zero, one);
    rhs[static_cast<size_t>(p + j)] = dot(alpha, tr, zero);
  }
  return side.basis_inv_t.apply(rhs, zero);
}

AmbientPair pontryagin_source(const SideCtx& s_side, const RFVec& v, const RFVec& a) {
  int d = s_side.domain.dim();
  RF zero = rf_zero(d);
  AmbientPair out;
  out.vec = s_side.j_eps_at.apply(s_side.j_proj.apply(v, zero), zero);
  out.cov = hat_s_symbolic(s_side, a);
  return out;
}

AmbientPair pontryagin_target(const SideCtx& t_side, const RFVec& v, const RFVec& a) {
  int d = t_side.domain.dim();
  RF zero = rf_zero(d);
  AmbientPair out;
  out.vec = t_side.j_eps_at.apply(t_side.j_proj.apply(v, zero), zero);
  out.cov = hat_t_symbolic(t_side, a);
  return out;
}

namespace {

RFVec constant_vector(const QVec& v, int nvars) {
  RFVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(RF::constant(nvars, x));
  return out;
}

}  // namespace

QVec hat_s_at(const GroupoidDef& def, const GroupoidSym& sym, const PointP& g, const QVec& alpha) {
  RFVec sym_alpha = constant_vector(alpha, def.n());
  RFVec beta = hat_s_symbolic(sym.s_side, sym_alpha);
  return evaluate_vector(beta, g.coords);
}

QVec hat_t_at(const GroupoidDef& def, const GroupoidSym& sym, const PointP& g, const QVec& alpha) {
  RFVec sym_alpha = constant_vector(alpha, def.n());
  RFVec beta = hat_t_symbolic(sym.t_side, sym_alpha);
  return evaluate_vector(beta, g.coords);
}

ComposablePoint composable_point(const GroupoidDef& def, const PointP& c) {
  require_same_chart(c.chart, def.composable, "composable point");
  ComposablePoint cp;
  cp.c = c;
  cp.g = def.pr1.apply(c);
  cp.h = def.pr2.apply(c);
  cp.gh = def.mult.apply(c);
  return cp;
}

ComposablePoint sample_composable(const GroupoidDef& def, RationalSampler& s, int max_attempts) {
  for (int a = 0; a < max_attempts; ++a) {
    PointP c{def.composable, s.tuple(def.composable.dim())};
    try {
      return composable_point(def, c);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleAtPoint) throw;
    }
  }
  throw Error(ErrorKind::PoleAtPoint, "no pole-free composable sample found");
}

PointP sample_base_point(const GroupoidDef& def, RationalSampler& s, int max_attempts) {
  for (int a = 0; a < max_attempts; ++a) {
    PointP p{def.base, s.tuple(def.p())};
    try {
      def.unit.apply(p);
      return p;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleAtPoint) throw;
    }
  }
  throw Error(ErrorKind::PoleAtPoint, "no pole-free base sample found");
}

QVec tangent_mult_at(const GroupoidDef& def, const ComposablePoint& cp,
                     const QVec& v_g, const QVec& v_h) {
  QMatrix js = evaluate_matrix(jacobian(def.src), cp.g.coords);
  QMatrix jt = evaluate_matrix(jacobian(def.tgt), cp.h.coords);
  QVec lhs = js.apply(v_g, Rational(0));
  QVec rhs = jt.apply(v_h, Rational(0));
  for (size_t i = 0; i < lhs.size(); ++i)
    if (lhs[i] != rhs[i])
      throw Error(ErrorKind::NotComposableTangent, "Ts(v_g) != Tt(v_h)");
  MultCtx<Rational> ctx = mult_ctx_at(def, cp.c);
  return tangent_product(ctx, v_g, v_h, Rational(0), Rational(1));
}

QVec cotangent_mult_at(const GroupoidDef& def, const GroupoidSym& sym, const ComposablePoint& cp,
                       const QVec& a_g, const QVec& a_h) {
  QVec hs = hat_s_at(def, sym, cp.g, a_g);
  QVec ht = hat_t_at(def, sym, cp.h, a_h);
  for (size_t i = 0; i < hs.size(); ++i)
    if (hs[i] != ht[i])
      throw Error(ErrorKind::NotComposableCovector, "hat_s(a_g) != hat_t(a_h)");
  MultCtx<Rational> ctx = mult_ctx_at(def, cp.c);
  return cotangent_product(ctx, a_g, a_h, Rational(0), Rational(1));
}

// ---------------------------------------------------------------------------
// Multiplicativity checker

namespace {

struct FrameSym {
  // over the arrow chart: tangential blocks Js·X, Jt·X (p x n) and the
  // hat-value blocks (values of the frame covectors on the A-basis)
  RFMatrix s_tangential, t_tangential;
  RFMatrix s_hat_vals, t_hat_vals;  // (n-p) x n
};

FrameSym frame_sym(const GroupoidDef& def, const GroupoidSym& sym, const DiracFrame& frame) {
  int n = def.n(), p = def.p();
  RF zero = rf_zero(n), one = rf_one(n);
  FrameSym fs;
  RFMatrix x_block(n, n, zero), a_block(n, n, zero);
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < n; ++i) {
      x_block.at(i, s) = frame.sections[s].vector.components[i];
      a_block.at(i, s) = frame.sections[s].oneform.coeff(i);
    }
  fs.s_tangential = jacobian(def.src).multiply(x_block, zero);
  fs.t_tangential = jacobian(def.tgt).multiply(x_block, zero);
  fs.s_hat_vals = RFMatrix(n - p, n, zero);
  fs.t_hat_vals = RFMatrix(n - p, n, zero);
  for (int s = 0; s < n; ++s) {
    RFVec alpha = a_block.column(s);
    for (int j = 0; j < n - p; ++j) {
      RFVec tl = tangent_product(sym.s_side.ctx, RFVec(static_cast<size_t>(n), zero),
                                 sym.s_side.a_basis.column(j), zero, one);
      fs.s_hat_vals.at(j, s) = dot(alpha, tl, zero);
      RFVec tr = tangent_product(sym.t_side.ctx, sym.t_side.w_basis.column(j),
                                 RFVec(static_cast<size_t>(n), zero), zero, one);
      fs.t_hat_vals.at(j, s) = dot(alpha, tr, zero);
    }
  }
  return fs;
}

struct SampleOutcome {
  bool ok = true;
  std::string message;
};

SampleOutcome check_one_sample(const GroupoidDef& def, const GroupoidSym& sym,
                               const DiracFrame& frame, const FrameSym& fs,
                               const ComposablePoint& cp) {
  SampleOutcome out;
  int n = def.n(), p = def.p();
  try {
    QMatrix dg = frame.coefficient_matrix_at(cp.g.coords);
    QMatrix dh = frame.coefficient_matrix_at(cp.h.coords);
    if (rank_of(dg, Rational(0), Rational(1)) < n || rank_of(dh, Rational(0), Rational(1)) < n)
      throw Error(ErrorKind::PoleAtPoint, "frame rank drop at sample");
    // matching space: Ts(d_g) = Tt(d_h) on coefficients (c_g, c_h)
    QMatrix m(n, 2 * n, Rational(0));
    QMatrix s_tan = evaluate_matrix(fs.s_tangential, cp.g.coords);
    QMatrix t_tan = evaluate_matrix(fs.t_tangential, cp.h.coords);
    QMatrix s_hat = evaluate_matrix(fs.s_hat_vals, cp.g.coords);
    QMatrix t_hat = evaluate_matrix(fs.t_hat_vals, cp.h.coords);
    for (int i = 0; i < p; ++i)
      for (int s = 0; s < n; ++s) {
        m.at(i, s) = s_tan.at(i, s);
        m.at(i, n + s) = -t_tan.at(i, s);
      }
    for (int i = 0; i < n - p; ++i)
      for (int s = 0; s < n; ++s) {
        m.at(p + i, s) = s_hat.at(i, s);
        m.at(p + i, n + s) = -t_hat.at(i, s);
      }
    auto matched = null_space(m, Rational(0), Rational(1));
    if (matched.empty()) {
      out.ok = false;
      out.message = "empty matching space at " + point_str(cp.c);
      return out;
    }
    MultCtx<Rational> ctx = mult_ctx_at(def, cp.c);
    for (const auto& coeffs : matched) {
      QVec v_g(n, Rational(0)), a_g(n, Rational(0)), v_h(n, Rational(0)), a_h(n, Rational(0));
      for (int s = 0; s < n; ++s)
        for (int i = 0; i < n; ++i) {
          v_g[i] += dg.at(i, s) * coeffs[s];
          a_g[i] += dg.at(n + i, s) * coeffs[s];
          v_h[i] += dh.at(i, s) * coeffs[n + s];
          a_h[i] += dh.at(n + i, s) * coeffs[n + s];
        }
      QVec v_prod = tangent_product(ctx, v_g, v_h, Rational(0), Rational(1));
      QVec a_prod = cotangent_product(ctx, a_g, a_h, Rational(0), Rational(1));
      if (!membership_at(frame, cp.gh, v_prod, a_prod)) {
        out.ok = false;
        out.message = "product of matched frame elements leaves the structure at c=" +
                      point_str(cp.c);
        return out;
      }
    }
  } catch (const Error& e) {
    out.ok = false;
    out.message = std::string(e.what()) + " at c=" + point_str(cp.c);
  }
  return out;
}

Report check_dirac_multiplicative_impl(const GroupoidDef& def, const DiracFrame& frame,
                                       int samples, std::uint64_t seed, bool parallel) {
  Report rep;
  rep.command = "verify-multiplicative";
  rep.seed = seed;
  rep.samples = samples;
  require_same_chart(frame.chart, def.total, "multiplicativity frame");
  int n = def.n();

  Report lag = check_lagrangian(frame);
  rep.append(lag, "lagrangian");
  if (!lag.passed()) return rep;

  GroupoidSym sym = groupoid_sym(def);
  FrameSym fs = frame_sym(def, sym, frame);

  RationalSampler sampler(seed);
  std::vector<ComposablePoint> pts;
  {
    int guard = 0;
    while (static_cast<int>(pts.size()) < samples && guard < 100 * samples + 100) {
      ++guard;
      ComposablePoint cp = sample_composable(def, sampler);
      // discard samples where the symbolic machinery has a pole
      try {
        evaluate_matrix(fs.s_hat_vals, cp.g.coords);
        evaluate_matrix(fs.t_hat_vals, cp.h.coords);
        QMatrix dg = frame.coefficient_matrix_at(cp.g.coords);
        QMatrix dh = frame.coefficient_matrix_at(cp.h.coords);
        QMatrix dgh = frame.coefficient_matrix_at(cp.gh.coords);
        if (rank_of(dg, Rational(0), Rational(1)) < n ||
            rank_of(dh, Rational(0), Rational(1)) < n ||
            rank_of(dgh, Rational(0), Rational(1)) < n)
          continue;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::PoleAtPoint) continue;
        throw;
      }
      pts.push_back(cp);
    }
  }

  CheckEntry& prod = rep.add("sampled-products");
  if (static_cast<int>(pts.size()) < samples) {
    prod.status = CheckStatus::Fail;
    prod.detail = "could not gather enough pole-free composable samples";
    return rep;
  }
  std::vector<SampleOutcome> outcomes(pts.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long i = 0; i < static_cast<long>(pts.size()); ++i)
    outcomes[static_cast<size_t>(i)] = check_one_sample(def, sym, frame, fs, pts[i]);
  (void)parallel;
  prod.detail = "all matched products stay in the frame at " + std::to_string(pts.size()) +
                " composable samples";
  for (size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].ok) {
      prod.status = CheckStatus::Fail;
      prod.detail = "multiplicativity violation";
      prod.witnesses.push_back(outcomes[i].message);
      break;
    }
  }
  for (const auto& cp : pts) prod.witnesses.push_back(point_str(cp.c));

  // unit closure: Pontryagin source/target of the restricted frame stay in
  // the frame along sampled base points
  CheckEntry& unit_entry = rep.add("unit-closure");
  unit_entry.detail = "TTs and TTt of the frame restricted to units stay in the frame";
  {
    std::vector<AmbientPair> ts_list, tt_list;
    for (int s = 0; s < n; ++s) {
      RFVec v = restrict_components(frame.sections[s].vector.components, def.unit);
      RFVec a = restrict_components(frame.sections[s].oneform.coeffs(), def.unit);
      ts_list.push_back(pontryagin_source(sym.unit_side_s, v, a));
      tt_list.push_back(pontryagin_target(sym.unit_side_t, v, a));
    }
    RationalSampler bs(seed ^ 0x9e3779b97f4a7c15ull);
    int done = 0, guard = 0;
    std::vector<std::string> visited;
    while (done < samples && guard < 100 * samples + 100) {
      ++guard;
      PointP bp = sample_base_point(def, bs);
      try {
        PointP up = def.unit.apply(bp);
        visited.push_back(point_str(bp));
        for (int s = 0; s < n && unit_entry.status == CheckStatus::Pass; ++s) {
          QVec tsv = evaluate_vector(ts_list[s].vec, bp.coords);
          QVec tsc = evaluate_vector(ts_list[s].cov, bp.coords);
          QVec ttv = evaluate_vector(tt_list[s].vec, bp.coords);
          QVec ttc = evaluate_vector(tt_list[s].cov, bp.coords);
          if (!membership_at(frame, up, tsv, tsc) || !membership_at(frame, up, ttv, ttc)) {
            unit_entry.status = CheckStatus::Fail;
            unit_entry.detail = "unit of a frame element leaves the structure";
            unit_entry.witnesses.push_back("p=" + point_str(bp) + ", section " +
                                           std::to_string(s + 1));
          }
        }
        ++done;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleAtPoint &&
            e.kind() != ErrorKind::RankDeficientAtPoint) throw;
      }
      if (unit_entry.status == CheckStatus::Fail) break;
    }
    for (const auto& w : visited) unit_entry.witnesses.push_back(w);
  }

  // inversion closure
  CheckEntry& inv_entry = rep.add("inversion-closure");
  inv_entry.detail = "inverses of frame elements stay in the structure";
  {
    RFMatrix j_inv = jacobian(def.inv);
    RationalSampler is(seed ^ 0xc2b2ae3d27d4eb4full);
    int done = 0, guard = 0;
    std::vector<std::string> visited;
    while (done < samples && guard < 100 * samples + 100) {
      ++guard;
      ComposablePoint cp = sample_composable(def, is);
      const PointP& g = cp.g;
      try {
        PointP ginv = def.inv.apply(g);
        QMatrix dg = frame.coefficient_matrix_at(g.coords);
        if (rank_of(dg, Rational(0), Rational(1)) < n) continue;
        visited.push_back(point_str(g));
        QMatrix ji_g = evaluate_matrix(j_inv, g.coords);
        QMatrix ji_gi = evaluate_matrix(j_inv, ginv.coords);
        for (int s = 0; s < n && inv_entry.status == CheckStatus::Pass; ++s) {
          QVec v(n, Rational(0)), a(n, Rational(0));
          for (int i = 0; i < n; ++i) { v[i] = dg.at(i, s); a[i] = dg.at(n + i, s); }
          QVec vi = ji_g.apply(v, Rational(0));
          QVec ai = ji_gi.transposed().apply(a, Rational(0));
          for (auto& x : ai) x = -x;
          if (!membership_at(frame, ginv, vi, ai)) {
            inv_entry.status = CheckStatus::Fail;
            inv_entry.detail = "inverse of a frame element leaves the structure";
            inv_entry.witnesses.push_back("g=" + point_str(g) + ", section " +
                                          std::to_string(s + 1));
          }
        }
        ++done;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleAtPoint &&
            e.kind() != ErrorKind::RankDeficientAtPoint) throw;
      }
      if (inv_entry.status == CheckStatus::Fail) break;
    }
    for (const auto& w : visited) inv_entry.witnesses.push_back(w);
  }
  return rep;
}

}  // namespace

Report check_dirac_multiplicative(const GroupoidDef& def, const DiracFrame& frame,
                                  int samples, std::uint64_t seed) {
  return check_dirac_multiplicative_impl(def, frame, samples, seed, true);
}

Report check_dirac_multiplicative_serial(const GroupoidDef& def, const DiracFrame& frame,
                                         int samples, std::uint64_t seed) {
  return check_dirac_multiplicative_impl(def, frame, samples, seed, false);
}

// ---------------------------------------------------------------------------
// Pair groupoid and pair Dirac structures

GroupoidDef pair_groupoid(const Chart& m) {
  GroupoidDef def;
  def.name = "pair:" + m.name;
  def.base = m;
  def.total = Chart{"pair:" + m.name, {}};
  for (const auto& c : m.coords) def.total.coords.push_back(c + "1");
  for (const auto& c : m.coords) def.total.coords.push_back(c + "2");
  def.composable = Chart{"pair2:" + m.name, {}};
  for (int b = 1; b <= 3; ++b)
    for (const auto& c : m.coords) def.composable.coords.push_back(c + std::to_string(b) + "c");
  def.pair_chart = Chart{"pairs:" + def.total.name, {}};
  for (const auto& c : def.total.coords) def.pair_chart.coords.push_back(c + "_a");
  for (const auto& c : def.total.coords) def.pair_chart.coords.push_back(c + "_b");

  int d = m.dim();
  int n = 2 * d;
  auto var_g = [&](int i) { return RF::variable(n, i); };
  auto var_c = [&](int i) { return RF::variable(3 * d, i); };
  auto var_p = [&](int i) { return RF::variable(2 * n, i); };

  def.tgt = SmoothMap{def.total, def.base, {}};
  def.src = SmoothMap{def.total, def.base, {}};
  for (int i = 0; i < d; ++i) def.tgt.components.push_back(var_g(i));
  for (int i = 0; i < d; ++i) def.src.components.push_back(var_g(d + i));
  def.unit = SmoothMap{def.base, def.total, {}};
  for (int i = 0; i < d; ++i) def.unit.components.push_back(RF::variable(d, i));
  for (int i = 0; i < d; ++i) def.unit.components.push_back(RF::variable(d, i));
  def.inv = SmoothMap{def.total, def.total, {}};
  for (int i = 0; i < d; ++i) def.inv.components.push_back(var_g(d + i));
  for (int i = 0; i < d; ++i) def.inv.components.push_back(var_g(i));
  def.pr1 = SmoothMap{def.composable, def.total, {}};
  def.pr2 = SmoothMap{def.composable, def.total, {}};
  def.mult = SmoothMap{def.composable, def.total, {}};
  for (int i = 0; i < 2 * d; ++i) def.pr1.components.push_back(var_c(i));
  for (int i = 0; i < 2 * d; ++i) def.pr2.components.push_back(var_c(d + i));
  for (int i = 0; i < d; ++i) def.mult.components.push_back(var_c(i));
  for (int i = 0; i < d; ++i) def.mult.components.push_back(var_c(2 * d + i));
  def.lift = SmoothMap{def.pair_chart, def.composable, {}};
  for (int i = 0; i < 2 * d; ++i) def.lift.components.push_back(var_p(i));
  for (int i = 0; i < d; ++i) def.lift.components.push_back(var_p(n + d + i));
  return def;
}

PairDirac pair_dirac(const DiracFrame& d_m) {
  const Chart& m = d_m.chart;
  int d = m.dim();
  int n = 2 * d;
  PairDirac out{pair_groupoid(m), DiracFrame{}};
  const Chart& g = out.def.total;
  // components of the original sections rewritten in each block
  std::vector<RF> block1, block2;
  for (int i = 0; i < d; ++i) block1.push_back(RF::variable(n, i));
  for (int i = 0; i < d; ++i) block2.push_back(RF::variable(n, d + i));
  out.frame.chart = g;
  out.frame.label = d_m.label + " (-) " + d_m.label;
  out.frame.witness = PointP{g, {}};
  for (int b = 0; b < 2; ++b)
    for (const auto& x : d_m.witness.coords) out.frame.witness.coords.push_back(x);

  for (int fam = 0; fam < 2; ++fam) {
    for (int s = 0; s < d; ++s) {
      VectorField v = VectorField::zero(g);
      KForm a(g, 1);
      for (int i = 0; i < d; ++i) {
        RF xc = d_m.sections[s].vector.components[i];
        RF ac = d_m.sections[s].oneform.coeff(i);
        if (fam == 0) {
          v.components[i] = xc.substitute(block1, n);
          a.coeff(i) = ac.substitute(block1, n);
        } else {
          v.components[d + i] = -xc.substitute(block2, n);
          a.coeff(d + i) = ac.substitute(block2, n);
        }
      }
      out.frame.sections.push_back(PSection(g, v, a));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bisections

Report check_bisection(const GroupoidDef& def, const Bisection& k, const PointP& witness) {
  Report rep;
  rep.command = "check-bisection";
  check_identity(rep, "tgt(K) = id", compose(def.tgt, k.map), SmoothMap::identity(def.base),
                 def.base);
  SmoothMap sk = compose(def.src, k.map);
  CheckEntry& e = rep.add("src(K) invertible at witness");
  QMatrix j = evaluate_matrix(jacobian(sk), witness.coords);
  if (rank_of(j, Rational(0), Rational(1)) < def.p()) {
    e.status = CheckStatus::Fail;
    e.detail = "Jacobian of src∘K singular at " + point_str(witness);
  } else {
    e.detail = "Jacobian rank " + std::to_string(def.p());
  }
  if (k.sk_inverse) {
    check_identity(rep, "(src K)(inverse) = id", compose(sk, *k.sk_inverse),
                   SmoothMap::identity(def.base), def.base);
    check_identity(rep, "inverse(src K) = id", compose(*k.sk_inverse, sk),
                   SmoothMap::identity(def.base), def.base);
  }
  return rep;
}

SmoothMap right_translation_map(const GroupoidDef& def, const Bisection& k) {
  SmoothMap id_g = SmoothMap::identity(def.total);
  SmoothMap k_of_s = compose(k.map, def.src);
  return compose(def.mult, lift_apply(def, id_g, k_of_s));
}

Bisection unit_bisection(const GroupoidDef& def) {
  return Bisection{"unit", def.unit, SmoothMap::identity(def.base)};
}

Bisection inverse_bisection(const GroupoidDef& def, const Bisection& k) {
  if (!k.sk_inverse)
    throw Error(ErrorKind::NonInvertibleBisection,
                "bisection '" + k.name + "' carries no inverse of src∘K");
  SmoothMap sk = compose(def.src, k.map);
  Bisection out;
  out.name = k.name + "^-1";
  out.map = compose(def.inv, compose(k.map, *k.sk_inverse));
  out.sk_inverse = sk;
  return out;
}

Bisection bisection_product(const GroupoidDef& def, const Bisection& k, const Bisection& l) {
  SmoothMap sk = compose(def.src, k.map);
  Bisection out;
  out.name = k.name + "*" + l.name;
  out.map = compose(def.mult, lift_apply(def, k.map, compose(l.map, sk)));
  if (k.sk_inverse && l.sk_inverse)
    out.sk_inverse = compose(*k.sk_inverse, *l.sk_inverse);
  return out;
}

PSection pullback_psection(const SmoothMap& phi, const PSection& s) {
  require_same_chart(phi.target, s.chart, "pullback section");
  const Chart& c = phi.source;
  int n = c.dim();
  RFMatrix j = jacobian(phi);
  auto jinv = inverse_of(j, rf_zero(n), rf_one(n));
  if (!jinv)
    throw Error(ErrorKind::NonInvertibleBisection, "translation map not invertible");
  RFVec x_at = substitute_vector(s.vector.components, phi.components, n);
  RFVec a_at = substitute_vector(s.oneform.coeffs(), phi.components, n);
  VectorField v{c, jinv->apply(x_at, rf_zero(n))};
  KForm a = KForm::one_form(c, j.transposed().apply(a_at, rf_zero(n)));
  return PSection(c, v, a);
}

}  // namespace dgv
