#ifndef DGV_DIRAC_HPP
#define DGV_DIRAC_HPP

#include "dgv/geometry.hpp"
#include "dgv/report.hpp"

namespace dgv {

// Section of the Pontryagin bundle TM (+) T*M.
struct PSection {
  Chart chart;
  VectorField vector;
  KForm oneform;

  PSection(Chart c, VectorField v, KForm a);
  static PSection zero(const Chart& c);
  PSection operator+(const PSection& o) const;
  PSection operator-(const PSection& o) const;
  PSection scaled(const RF& f) const;
  bool is_zero() const { return oneform.is_zero() && vector_is_zero(); }
  bool vector_is_zero() const;
};

// <(X,a),(Y,b)> = a(Y) + b(X)
RF canonical_pairing(const PSection& a, const PSection& b);

// [(X,a),(Y,b)] = ([X,Y], L_X b - i_Y da)
PSection dorfman_bracket(const PSection& a, const PSection& b);

// [(X,a),(Y,b)] = ([X,Y], L_X b - L_Y a + 1/2 d(a(Y) - b(X)))
PSection courant_bracket_skew(const PSection& a, const PSection& b);

// D f = 1/2 (0, df): the Courant operator of the standard Pontryagin
// Courant algebroid.
PSection d_operator_standard(const Chart& c, const RF& f);

// Bivector pi = sum_{i<j} pi^{ij} d/di ^ d/dj.
struct Bivector {
  Chart chart;
  std::vector<RF> upper;  // entries on increasing pairs, lexicographic

  static Bivector zero(const Chart& c);
  RF entry(int i, int j) const;   // antisymmetric extension
  VectorField sharp(const KForm& alpha) const;  // pi(alpha, .)
  RF pair(const KForm& alpha, const KForm& beta) const;  // pi(alpha, beta)
};

// Generating family of n sections presenting an (almost) Dirac structure.
struct DiracFrame {
  Chart chart;
  std::vector<PSection> sections;
  std::string label;
  PointP witness;

  int n() const { return chart.dim(); }
  // 2n x n matrix of the frame's coefficients (vector block stacked on
  // one-form block), as rational functions.
  RFMatrix coefficient_matrix() const;
  QMatrix coefficient_matrix_at(const std::vector<Rational>& p) const;
};

DiracFrame from_bivector(const Bivector& pi, PointP witness, const std::string& label);
DiracFrame from_two_form(const KForm& omega, PointP witness, const std::string& label);

// Isotropy of all pairs (symbolically) plus full rank at the witness.
Report check_lagrangian(const DiracFrame& frame);

// True iff the candidate pairs to zero with every frame section at p.
bool membership_at(const DiracFrame& frame, const PointP& p,
                   const QVec& tangent, const QVec& cotangent);

struct CourantTensor {
  int n = 0;
  std::vector<RF> entries;  // T[i][j][k] flattened as (i*n + j)*n + k
  bool closed = true;
  const RF& at(int i, int j, int k) const { return entries[(static_cast<size_t>(i) * n + j) * n + k]; }
};

// T_{ijk} = <[e_i, e_j], e_k> with the Dorfman bracket; closed iff all
// entries vanish identically.  The parallel version distributes the
// (i,j,k) cells over OpenMP threads and assembles deterministically; the
// serial version is the reference kept for testing.
CourantTensor courant_tensor(const DiracFrame& frame);
CourantTensor courant_tensor_serial(const DiracFrame& frame);

// (rank G0, rank G1, rank P0, rank P1) at p.
struct CharacteristicRanks {
  int g0, g1, p0, p1;
};
CharacteristicRanks characteristic_ranks_at(const DiracFrame& frame, const PointP& p);

}  // namespace dgv

#endif
