#ifndef DGV_HOMOGENEOUS_HPP
#define DGV_HOMOGENEOUS_HPP

#include "dgv/bcourant.hpp"

namespace dgv {

// A wide subgroupoid H presented infinitesimally by a frame of AH (ker Tt
// columns along the units) and finitely many generator bisections; the
// t-connectedness of H is an assumption recorded in reports, not checked.
struct SubgroupoidData {
  std::string name;
  std::vector<RFVec> ah_columns;
  std::vector<Bisection> generators;
};

// Lagrangian frame of n sections of P_G along the units (the candidate
// restriction of a homogeneous structure).
struct UnitDirac {
  std::string name;
  std::vector<UnitSection> sections;
  PointP witness;  // base point
};

Report check_unit_dirac(const GroupoidDef& def, const UnitDirac& ud);

// The sandwich I^s ⊆ D ⊆ units (+) ker TTt|_P together with AH x {0} ⊆ D.
Report check_sandwich(const GroupoidDef& def, const Infinitesimal& inf, const UnitDirac& ud,
                      const SubgroupoidData& h);

// D = D_G · D: spanned by lifted generators of the unit structure and the
// right-invariant extensions of the s-core.
DiracFrame build_homogeneous(const GroupoidDef& def, const Infinitesimal& inf,
                             const DiracFrame& frame, const UnitDirac& ud, std::uint64_t seed);

// D restricted to the units reproduces the unit structure.
Report check_restriction(const GroupoidDef& def, const Infinitesimal& inf, const DiracFrame& d,
                         const UnitDirac& ud);

// Invariance of D/I^s under the action of the generator bisections of H,
// verified at sampled exact base points.
Report check_bisection_invariance(const GroupoidDef& def, const Infinitesimal& inf,
                                  const DiracFrame& frame, const BFrame& bf, const UnitDirac& ud,
                                  const SubgroupoidData& h, int samples, std::uint64_t seed);

// For closed input frames: bracket-closure of D/I^s in the quotient
// Courant algebroid against direct closedness of the built structure.
Report check_closed_equivalence(const GroupoidDef& def, const Infinitesimal& inf,
                                const DiracFrame& frame, const BFrame& bf, const UnitDirac& ud,
                                std::uint64_t seed);

// Full classification pipeline; aggregates all sub-reports.
Report drinfeld_classify(const GroupoidDef& def, const Infinitesimal& inf,
                         const DiracFrame& frame, const BFrame& bf, const UnitDirac& ud,
                         const SubgroupoidData& h, int samples, std::uint64_t seed);

}  // namespace dgv

#endif
