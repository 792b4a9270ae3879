#ifndef DGV_INFINITESIMAL_HPP
#define DGV_INFINITESIMAL_HPP

#include "dgv/groupoid.hpp"

namespace dgv {

// Section of the Pontryagin bundle of G along the unit embedding:
// ambient G-fiber-valued columns with entries in the base coordinates.
struct UnitSection {
  Chart base;
  RFVec vec, cov;  // each of length dim G

  UnitSection operator+(const UnitSection& o) const;
  UnitSection operator-(const UnitSection& o) const;
  UnitSection scaled(const RF& f) const;
  bool is_zero() const;
};

UnitSection unit_section(const Chart& base, RFVec vec, RFVec cov);
UnitSection zero_unit_section(const Chart& base, int fiber_dim);

// <(v,a),(w,b)> = a(w) + b(v), a rational function on the base.
RF pairing_units(const UnitSection& a, const UnitSection& b);

// Restriction of a Pontryagin section of G along the units.
UnitSection restrict_psection(const GroupoidDef& def, const PSection& s);
std::vector<UnitSection> restrict_frame(const GroupoidDef& def, const DiracFrame& frame);

// Pontryagin-groupoid source and target of a unit section, ambient.
UnitSection tts_units(const GroupoidSym& sym, const UnitSection& u);
UnitSection ttt_units(const GroupoidSym& sym, const UnitSection& u);

// Membership tests against ker TTs / ker TTt along the units.
bool in_ker_tts(const GroupoidSym& sym, const UnitSection& u);
bool in_ker_ttt(const GroupoidSym& sym, const UnitSection& u);
// Membership in TP (+) A*G: tangent part in the image of T eps and
// cotangent part annihilating it.
bool in_units_fiber(const GroupoidSym& sym, const UnitSection& u);

// Rank over the rational-function field of a family of unit sections.
int generic_rank(const std::vector<UnitSection>& fam);
// Equality of generic spans.
bool span_equal(const std::vector<UnitSection>& a, const std::vector<UnitSection>& b);
// Membership of u in the generic span of fam.
bool in_span(const std::vector<UnitSection>& fam, const UnitSection& u);

// The infinitesimal objects of a multiplicative Dirac frame.
struct Infinitesimal {
  GroupoidSym sym;
  std::vector<UnitSection> restricted;   // D_G restricted along the units
  std::vector<UnitSection> units_frame;  // frame of the units algebroid
  std::vector<UnitSection> is_frame;     // frame of the s-core
  std::vector<UnitSection> it_frame;     // frame of the t-core
  std::string validity;                  // dense-open caveat from generic solves
};

Infinitesimal compute_infinitesimal(const GroupoidDef& def, const DiracFrame& frame);

// Anchor of the units algebroid: base coordinates of the tangent part.
RFVec units_anchor(const GroupoidSym& sym, const UnitSection& u);

// Star section: a section of D_G restricting to the given unit section
// and Pontryagin-s-related to it at every arrow.
struct StarSection {
  PSection section;    // on G
  UnitSection shadow;  // on P
};

StarSection star_section(const GroupoidDef& def, const Infinitesimal& inf,
                         const DiracFrame& frame, const UnitSection& shadow);

enum class ExtensionSide { Left, Right };

// sigma^l(g) = 0_g * sigma(s(g)) for sigma in ker TTt|_P (left), and
// sigma^r(g) = sigma(t(g)) * 0_g for sigma in ker TTs|_P (right).
PSection invariant_extension(const GroupoidDef& def, const GroupoidSym& sym,
                             const UnitSection& sigma, ExtensionSide side);

// Induced bracket on the units algebroid: Dorfman bracket of star
// sections, restricted.  Verifies the restriction lands in TP (+) A*G and
// that the result is independent of the star-section choice.
UnitSection star_bracket(const GroupoidDef& def, const Infinitesimal& inf,
                         const DiracFrame& frame, const UnitSection& xi_bar,
                         const UnitSection& eta_bar);

// Core bracket via right-invariant extensions.
UnitSection core_bracket(const GroupoidDef& def, const Infinitesimal& inf,
                         const UnitSection& sigma, const UnitSection& tau);

// Lie derivative of a star section along a section of AG, split into a
// star part and a left-invariant remainder.
struct StarDerivative {
  PSection derivative;     // L_{Z^l} xi on G
  StarSection star_part;   // the star summand
  UnitSection remainder;   // sigma_{xi,Z} in ker TTt|_P
};
StarDerivative lie_derivative_star(const GroupoidDef& def, const Infinitesimal& inf,
                                   const DiracFrame& frame, const RFVec& z_column,
                                   const StarSection& xi);

// Induced Dirac structure on the base (when the rank hypotheses hold at
// the sampled points); returns the frame and a report, or NotApplicable.
struct BaseDirac {
  bool applicable = false;
  DiracFrame frame;
  Report report;
};
BaseDirac base_dirac(const GroupoidDef& def, const Infinitesimal& inf, const DiracFrame& frame,
                     int samples, std::uint64_t seed);

// Closedness criterion through the induced brackets, cross-validated
// against the Courant tensor.
Report integrability_criterion(const GroupoidDef& def, const Infinitesimal& inf,
                               const DiracFrame& frame);

}  // namespace dgv

#endif
