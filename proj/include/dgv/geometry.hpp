#ifndef DGV_GEOMETRY_HPP
#define DGV_GEOMETRY_HPP

#include <string>
#include <vector>

#include "dgv/linalg.hpp"
#include "dgv/parser.hpp"

namespace dgv {

// A single global coordinate chart.  0-dimensional charts are legal
// (Lie groups seen as groupoids over a point).
struct Chart {
  std::string name;
  std::vector<std::string> coords;

  int dim() const { return static_cast<int>(coords.size()); }
  int index_of(const std::string& c) const;
  friend bool operator==(const Chart& a, const Chart& b) {
    return a.name == b.name && a.coords == b.coords;
  }
  friend bool operator!=(const Chart& a, const Chart& b) { return !(a == b); }
};

void require_same_chart(const Chart& a, const Chart& b, const char* what);

// Exact point of a chart.
struct PointP {
  Chart chart;
  std::vector<Rational> coords;
};

using RF = RationalFunction;
using RFMatrix = Matrix<RationalFunction>;
using RFVec = Vec<RationalFunction>;
using QMatrix = Matrix<Rational>;
using QVec = Vec<Rational>;

// Rational map between charts; one component per target coordinate,
// written in source coordinates.
struct SmoothMap {
  Chart source;
  Chart target;
  std::vector<RF> components;

  static SmoothMap identity(const Chart& c);
  static SmoothMap from_strings(const Chart& src, const Chart& tgt,
                                const std::vector<std::string>& comps);

  PointP apply(const PointP& p) const;
  // this;then  (other ∘ this), so source = this->source.
  SmoothMap then(const SmoothMap& other) const;
};

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);
bool maps_equal(const SmoothMap& a, const SmoothMap& b);

// (i,j) entry = d(component_i)/d(source_j).
RFMatrix jacobian(const SmoothMap& m);

QMatrix evaluate_matrix(const RFMatrix& m, const std::vector<Rational>& point);
QVec evaluate_vector(const RFVec& v, const std::vector<Rational>& point);
RFMatrix substitute_matrix(const RFMatrix& m, const std::vector<RF>& assignment, int out_nvars);
RFVec substitute_vector(const RFVec& v, const std::vector<RF>& assignment, int out_nvars);

// Exact pushforward of a tangent vector at p.
QVec pushforward_at(const SmoothMap& m, const PointP& p, const QVec& v);

struct VectorField {
  Chart chart;
  std::vector<RF> components;

  static VectorField zero(const Chart& c);
  static VectorField from_strings(const Chart& c, const std::vector<std::string>& comps);
  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField scaled(const RF& f) const;
};

// [X,Y] = (X·∂)Y − (Y·∂)X, exact.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

// Differential form of degree 0..3; coefficients stored on strictly
// increasing index tuples, enumerated lexicographically.
class KForm {
 public:
  KForm(Chart chart, int degree);

  static KForm zero(const Chart& c, int degree) { return KForm(c, degree); }
  static KForm function(const Chart& c, const RF& f);
  static KForm one_form(const Chart& c, const std::vector<RF>& comps);

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  int n_coeffs() const { return static_cast<int>(coeffs_.size()); }
  const RF& coeff(int flat_index) const { return coeffs_[flat_index]; }
  RF& coeff(int flat_index) { return coeffs_[flat_index]; }
  const std::vector<RF>& coeffs() const { return coeffs_; }

  // Coefficient on an increasing tuple.
  const RF& coeff_at(const std::vector<int>& idx) const;
  void set_coeff(const std::vector<int>& idx, const RF& v);
  bool is_zero() const;

  KForm operator+(const KForm& o) const;
  KForm operator-(const KForm& o) const;
  KForm scaled(const RF& f) const;

  friend bool operator==(const KForm& a, const KForm& b);

 private:
  Chart chart_;
  int degree_;
  std::vector<RF> coeffs_;
};

// Enumeration of strictly increasing k-tuples out of {0..n-1} in
// lexicographic order.
std::vector<std::vector<int>> increasing_tuples(int n, int k);

KForm exterior_derivative(const KForm& w);
KForm interior_product(const VectorField& x, const KForm& w);
KForm lie_derivative_one_form(const VectorField& x, const KForm& alpha);
KForm wedge(const KForm& a, const KForm& b);
KForm pullback_form(const SmoothMap& m, const KForm& w);

// Evaluation of a 1-form on a vector field.
RF pair_form_vector(const KForm& alpha, const VectorField& x);

// Substitution of a G-object's components along a map into G: produces
// fiber-valued columns over the map's source.  Used for sections along
// the unit embedding.
std::vector<RF> restrict_components(const std::vector<RF>& comps, const SmoothMap& eps);

}  // namespace dgv

#endif
