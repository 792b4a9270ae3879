#ifndef DGV_BCOURANT_HPP
#define DGV_BCOURANT_HPP

#include "dgv/infinitesimal.hpp"

namespace dgv {

// Presentation of the quotient bundle (units algebroid (+) ker TTt|_P)
// modulo the s-core, by explicit representatives.  Cosets are compared by
// pairing against the `perp` frame, which spans the orthogonal of the
// s-core.
struct BFrame {
  Chart base;
  std::vector<UnitSection> representatives;
  std::vector<PSection> rep_lifts;        // star + left-invariant lifts to G
  std::vector<UnitSection> modulus;       // the s-core frame
  std::vector<UnitSection> perp;          // frame of units (+) ker TTt|_P
  std::vector<UnitSection> ker_tt_frame;  // frame of ker TTt|_P
  RFMatrix pairing;                       // induced pairing on representatives
  std::string validity;

  int rank() const { return static_cast<int>(representatives.size()); }
};

BFrame build_b(const GroupoidDef& def, const Infinitesimal& inf, const DiracFrame& frame);

// Coset equality modulo the s-core (symbolic / at an exact base point).
bool coset_equal(const BFrame& bf, const UnitSection& a, const UnitSection& b);
bool coset_equal_at(const BFrame& bf, const PointP& p, const QVec& avec, const QVec& acov,
                    const QVec& bvec, const QVec& bcov);

// Lift of a class in units (+) ker TTt|_P to a section of P_G through a
// star section and a left-invariant extension.
PSection lift_to_g(const GroupoidDef& def, const Infinitesimal& inf, const DiracFrame& frame,
                   const UnitSection& e);

// Skew Courant bracket of lifts, restricted along the units.  When
// verify_welldefined is set the computation is repeated with perturbed
// star sections and compared modulo the s-core
// (WellDefinednessViolation signals a non-closed input frame).
UnitSection b_bracket(const GroupoidDef& def, const Infinitesimal& inf, const DiracFrame& frame,
                      const BFrame& bf, const UnitSection& e1, const UnitSection& e2,
                      bool verify_welldefined = false);

// Anchor b(e) = Ts of the tangent part, in base coordinates.
RFVec b_anchor(const Infinitesimal& inf, const UnitSection& e);

// D f = 1/2 (0, s^* d f) + I^s.
UnitSection d_operator(const GroupoidDef& def, const Infinitesimal& inf, const RF& f);

// All five Courant algebroid axioms on the representative basis with
// seeded random functions; gated on closedness of the input frame.
Report check_courant_axioms(const GroupoidDef& def, const Infinitesimal& inf,
                            const DiracFrame& frame, const BFrame& bf, std::uint64_t seed);

// --------------------------------------------------------------------------
// Canonical isomorphisms of the three example families

// Poisson family: Psi(X, xi) = (X + pi#(xi), xi) + I^s.
struct PoissonIso {
  RFMatrix pi_sharp_units;  // n x n ambient sharp matrix along the units
  RFMatrix ag_basis;        // columns: basis of AG along units
  RFMatrix astar_basis;     // columns: covector basis of (TP)° along units
};
PoissonIso make_poisson_iso(const GroupoidDef& def, const Infinitesimal& inf, const Bivector& pi);
UnitSection psi_apply(const GroupoidDef& def, const PoissonIso& iso, const RFVec& x,
                      const RFVec& xi);
// inverse: (v - pi#(alpha), hat_s(alpha))
std::pair<RFVec, RFVec> psi_invert(const GroupoidDef& def, const Infinitesimal& inf,
                                   const PoissonIso& iso, const UnitSection& e);
Report iso_poisson_check(const GroupoidDef& def, const Infinitesimal& inf,
                         const DiracFrame& frame, const BFrame& bf, const Bivector& pi);

// Presymplectic family: Lambda(coset(v, a)) = (Ts v, b), (Ts)^* b = a - omega_flat(v).
struct PresymplecticIso {
  RFMatrix omega_flat_units;  // n x n ambient flat matrix along the units
};
PresymplecticIso make_presymplectic_iso(const GroupoidDef& def, const KForm& omega_g);
PSection lambda_apply(const GroupoidDef& def, const Infinitesimal& inf,
                      const PresymplecticIso& iso, const UnitSection& e);
UnitSection lambda_invert(const GroupoidDef& def, const Infinitesimal& inf,
                          const PresymplecticIso& iso, const PSection& s);
Report iso_presymplectic_check(const GroupoidDef& def, const Infinitesimal& inf,
                               const DiracFrame& frame, const BFrame& bf, const KForm& omega_g);

// Pair family: Pi(coset(v,w,alpha,beta)) = (w, beta) on the base factor.
PSection pi_pair_apply(const Chart& m, const UnitSection& e);
UnitSection pi_pair_invert(const GroupoidDef& def, const PSection& s);
Report iso_pair_check(const DiracFrame& d_m, const PairDirac& pd, const Infinitesimal& inf,
                      const BFrame& bf);

// --------------------------------------------------------------------------
// Bisection action on the quotient bundle

struct BActionResult {
  PointP base_point;  // (s ∘ K)(p)
  QVec vec, cov;      // representative of the image coset at that point
};

// rho_K of the class of e evaluated at the exact base point p.
BActionResult bisection_action(const GroupoidDef& def, const Infinitesimal& inf,
                               const DiracFrame& frame, const BFrame& bf, const Bisection& k,
                               const UnitSection& e, const PointP& p);

}  // namespace dgv

#endif
