#ifndef DGV_GROUPOID_HPP
#define DGV_GROUPOID_HPP

#include <cstdint>
#include <optional>

#include "dgv/dirac.hpp"
#include "dgv/sampling.hpp"

namespace dgv {

// Lie groupoid presented by rational structure maps on global charts.
// The composable set G x_P G is presented by its own chart C with
// projections pr1, pr2 and the multiplication, all rational.  `lift` is a
// rational section of the pair of projections: a map from two copies of
// the total chart into C with
//   pr1(lift(g,b)) = g                      identically,
//   t(pr2(lift(g,b))) = s(g)                identically,
//   pr2(lift(pr1(c),pr2(c))) = pr2(c)       identically on C,
// so lift(g,h) reproduces the composable pair (g,h) whenever s(g)=t(h),
// and lift(g,b) projects an arbitrary second argument onto the s(g)-fiber.
// This turns unit/inverse/associativity laws and all translation maps
// into rational-map identities.
struct GroupoidDef {
  std::string name;
  Chart total;       // G
  Chart base;        // P
  Chart composable;  // C
  Chart pair_chart;  // two copies of the total chart (lift's source)
  SmoothMap src, tgt, unit, inv;
  SmoothMap pr1, pr2, mult;
  SmoothMap lift;

  int n() const { return total.dim(); }
  int p() const { return base.dim(); }
};

// Composes lift with a pair of maps W -> G.
SmoothMap lift_apply(const GroupoidDef& def, const SmoothMap& f1, const SmoothMap& f2);

// All groupoid laws as rational-map identities (the lift contract makes
// associativity and the unit/inverse laws symbolic).  Submersivity of
// the source and target is undecidable symbolically and is reported as
// dense-open evidence from sampled arrows.
Report check_groupoid_axioms(const GroupoidDef& def, int samples = 10,
                             std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Pointwise and symbolic product machinery

template <class F>
struct MultCtx {
  Matrix<F> j_pr1, j_pr2, j_mult;  // evaluated at the composable locus
};

// v_g * v_h via a composable lift into TC; throws NotComposableTangent
// when no lift exists and SingularSystem when the product would depend
// on the lift.
template <class F>
Vec<F> tangent_product(const MultCtx<F>& ctx, const Vec<F>& v_g, const Vec<F>& v_h,
                       const F& zero, const F& one);

// a_g * a_h: the unique covector at the product arrow pairing correctly
// with all composable tangent lifts.
template <class F>
Vec<F> cotangent_product(const MultCtx<F>& ctx, const Vec<F>& a_g, const Vec<F>& a_h,
                         const F& zero, const F& one);

// Symbolic contexts over the arrow chart:
//   left:  products (g, eps(s(g)))  — left translations T L_g
//   right: products (eps(t(g)), g)  — right translations T R_g
// and over the base chart:
//   unit:  products (eps(p), eps(p))
MultCtx<RF> mult_ctx_along(const GroupoidDef& def, const SmoothMap& into_c);
MultCtx<Rational> mult_ctx_at(const GroupoidDef& def, const PointP& c_point);

// Cached symbolic data for the hat maps and the Pontryagin-groupoid
// source/target.  All entries are rational functions on `domain`
// (the total chart for the arrow-level machinery, the base chart for the
// unit-level machinery); results are valid on the dense open set where
// the recorded denominators do not vanish.
struct SideCtx {
  Chart domain;
  RFMatrix u_basis;   // columns spanning T eps(TP) at the locus
  RFMatrix a_basis;   // columns spanning ker Tt at the locus (A G)
  RFMatrix w_basis;   // columns spanning ker Ts at the locus
  RFMatrix basis_inv_t;  // inverse of [u_basis | a_basis]^T
  MultCtx<RF> ctx;    // translation context for this locus
  SmoothMap source_or_target;  // s (resp. t), for tangential parts
  RFMatrix j_proj;    // Jacobian of s (resp. t) on the domain
  RFMatrix j_eps_at;  // J(eps) composed onto the domain
};

struct GroupoidSym {
  // along units, field Q(P)
  RFMatrix j_eps, j_s_units, j_t_units;
  RFMatrix a_units;      // ker Tt along units
  RFMatrix w_units;      // ker Ts along units
  RFMatrix s_ann_units;  // covectors spanning (T^s G)° along units
  RFMatrix t_ann_units;  // covectors spanning (T^t G)° along units
  // arrow-level contexts
  SideCtx s_side;  // locus eps(s(g)), over Q(G)
  SideCtx t_side;  // locus eps(t(g)), over Q(G)
  SideCtx unit_side_s;  // locus eps(p) as the s-side, over Q(P)
  SideCtx unit_side_t;  // locus eps(p) as the t-side, over Q(P)
};

GroupoidSym groupoid_sym(const GroupoidDef& def);

// hat_s(alpha) as an ambient covector at eps(s(g)) (annihilating
// T eps(TP)); alpha given at the generic arrow of side.domain.
RFVec hat_s_symbolic(const SideCtx& side, const RFVec& alpha);
// hat_t(alpha) at eps(t(g)).
RFVec hat_t_symbolic(const SideCtx& side, const RFVec& alpha);

// Pontryagin source/target of a (vector, covector) pair over the side's
// domain; results ambient at the unit locus.
struct AmbientPair {
  RFVec vec, cov;
};
AmbientPair pontryagin_source(const SideCtx& s_side, const RFVec& v, const RFVec& a);
AmbientPair pontryagin_target(const SideCtx& t_side, const RFVec& v, const RFVec& a);

// Pointwise hat maps at an exact arrow.
QVec hat_s_at(const GroupoidDef& def, const GroupoidSym& sym, const PointP& g, const QVec& alpha);
QVec hat_t_at(const GroupoidDef& def, const GroupoidSym& sym, const PointP& g, const QVec& alpha);

// Exact composable point (a point of C).
struct ComposablePoint {
  PointP c, g, h, gh;
};
ComposablePoint composable_point(const GroupoidDef& def, const PointP& c);
ComposablePoint sample_composable(const GroupoidDef& def, RationalSampler& s, int max_attempts = 100);
PointP sample_base_point(const GroupoidDef& def, RationalSampler& s, int max_attempts = 100);

// Tangent product at an exact composable point; vectors must satisfy
// Ts(v_g) = Tt(v_h) exactly.
QVec tangent_mult_at(const GroupoidDef& def, const ComposablePoint& cp,
                     const QVec& v_g, const QVec& v_h);

// Cotangent product at an exact composable point; requires
// hat_s(a_g) = hat_t(a_h) exactly.
QVec cotangent_mult_at(const GroupoidDef& def, const GroupoidSym& sym, const ComposablePoint& cp,
                       const QVec& a_g, const QVec& a_h);

// Multiplicativity of a Dirac frame: exact pointwise verification at
// sampled composable points (products of all matched frame pairs stay in
// the frame), unit closure, and inversion closure.  The parallel variant
// distributes samples over OpenMP threads with deterministic merging;
// the serial variant is the reference kept for testing.
Report check_dirac_multiplicative(const GroupoidDef& def, const DiracFrame& frame,
                                  int samples, std::uint64_t seed);
Report check_dirac_multiplicative_serial(const GroupoidDef& def, const DiracFrame& frame,
                                         int samples, std::uint64_t seed);

// Pair groupoid of the frame's chart with the difference Dirac structure.
struct PairDirac {
  GroupoidDef def;
  DiracFrame frame;
};
PairDirac pair_dirac(const DiracFrame& d_m);
GroupoidDef pair_groupoid(const Chart& m);

// Bisection K: P -> G with t∘K = id_P; sk_inverse is the rational
// inverse of s∘K when available (required for inverse bisections).
struct Bisection {
  std::string name;
  SmoothMap map;
  std::optional<SmoothMap> sk_inverse;
};

// Checks t∘K = id symbolically and invertibility of s∘K at the witness.
Report check_bisection(const GroupoidDef& def, const Bisection& k, const PointP& witness);

SmoothMap right_translation_map(const GroupoidDef& def, const Bisection& k);
Bisection unit_bisection(const GroupoidDef& def);
Bisection inverse_bisection(const GroupoidDef& def, const Bisection& k);
// product with rho_{product(k,l)} = rho_l ∘ rho_k : p -> k(p) * l(s(k(p)))
Bisection bisection_product(const GroupoidDef& def, const Bisection& k, const Bisection& l);

// Pullback of a Pontryagin section under the right translation by K
// (a diffeomorphism): (R_K^* X, R_K^* alpha).
PSection pullback_psection(const SmoothMap& phi, const PSection& s);

}  // namespace dgv

#endif
