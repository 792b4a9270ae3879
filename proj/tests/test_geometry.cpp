#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dgv/geometry.hpp>
#include <dgv/sampling.hpp>

using namespace dgv;

namespace {

const Chart R2{"R2", {"x", "y"}};
const Chart R3{"R3", {"x", "y", "z"}};

RF rf2(const std::string& s) { return parse_expression(s, R2.coords); }

VectorField vf(const Chart& c, const std::vector<std::string>& comps) {
  return VectorField::from_strings(c, comps);
}

KForm one(const Chart& c, const std::vector<std::string>& comps) {
  std::vector<RF> v;
  for (const auto& s : comps) v.push_back(parse_expression(s, c.coords));
  return KForm::one_form(c, v);
}

VectorField random_vf(RationalSampler& s, const Chart& c) {
  VectorField x = VectorField::zero(c);
  for (int i = 0; i < c.dim(); ++i) {
    Polynomial p(c.dim());
    for (int t = 0; t < 3; ++t) {
      Monomial m(c.dim(), 0);
      m[static_cast<size_t>(s.next().numerator().get_ui()) % c.dim()] =
          static_cast<unsigned>(s.next().numerator().get_ui()) % 3;
      p.add_term(m, s.next());
    }
    x.components[i] = RF::from_polynomial(p);
  }
  return x;
}

RF random_fn(RationalSampler& s, const Chart& c) {
  Polynomial p(c.dim());
  for (int t = 0; t < 4; ++t) {
    Monomial m(c.dim(), 0);
    for (int i = 0; i < c.dim(); ++i)
      m[i] = static_cast<unsigned>(s.next().numerator().get_ui()) % 2;
    p.add_term(m, s.next());
  }
  return RF::from_polynomial(p);
}

KForm random_one_form(RationalSampler& s, const Chart& c) {
  std::vector<RF> comps;
  for (int i = 0; i < c.dim(); ++i) comps.push_back(random_fn(s, c));
  return KForm::one_form(c, comps);
}

}  // namespace

TEST_CASE("jacobian") {
  SmoothMap id = SmoothMap::identity(R2);
  RFMatrix j = jacobian(id);
  CHECK(j.at(0, 0) == rf_one(2));
  CHECK(j.at(0, 1).is_zero());
  CHECK(j.at(1, 1) == rf_one(2));

  // pair-groupoid multiplication on the composable chart (x,y,z) -> (x,z)
  Chart C{"C", {"x", "y", "z"}};
  SmoothMap mult = SmoothMap::from_strings(C, R2, {"x", "z"});
  RFMatrix jm = jacobian(mult);
  CHECK(jm.at(0, 0) == rf_one(3));
  CHECK(jm.at(0, 1).is_zero());
  CHECK(jm.at(0, 2).is_zero());
  CHECK(jm.at(1, 0).is_zero());
  CHECK(jm.at(1, 1).is_zero());
  CHECK(jm.at(1, 2) == rf_one(3));

  Chart R1{"R", {"x"}};
  SmoothMap sq = SmoothMap::from_strings(R1, R1, {"x^2"});
  CHECK(jacobian(sq).at(0, 0) == parse_expression("2*x", {"x"}));
}

TEST_CASE("pushforward_at") {
  Chart C{"C", {"x", "y", "z"}};
  SmoothMap mult = SmoothMap::from_strings(C, R2, {"x", "z"});
  // pair mult at ((2,3),(3,5)) with composable vector ((1,4),(4,7)) -> (1,7)
  PointP p{C, {Rational(2), Rational(3), Rational(5)}};
  QVec v = {Rational(1), Rational(4), Rational(7)};
  QVec out = pushforward_at(mult, p, v);
  CHECK(out[0] == Rational(1));
  CHECK(out[1] == Rational(7));

  SmoothMap cst = SmoothMap::from_strings(R2, R2, {"1", "2"});
  QVec z = pushforward_at(cst, PointP{R2, {Rational(0), Rational(0)}}, {Rational(3), Rational(4)});
  CHECK(z[0].is_zero());
  CHECK(z[1].is_zero());
}

TEST_CASE("lie_bracket") {
  CHECK(lie_bracket(vf(R2, {"1", "0"}), vf(R2, {"0", "1"})).components[0].is_zero());
  // [x d/dy, d/dx] = -d/dy
  VectorField b = lie_bracket(vf(R2, {"0", "x"}), vf(R2, {"1", "0"}));
  CHECK(b.components[0].is_zero());
  CHECK(b.components[1] == rf2("-1"));
  RationalSampler s(3);
  for (int i = 0; i < 10; ++i) {
    VectorField x = random_vf(s, R2);
    VectorField z = lie_bracket(x, x);
    CHECK(z.components[0].is_zero());
    CHECK(z.components[1].is_zero());
  }
}

TEST_CASE("exterior_derivative") {
  // d(x dy) = dx ^ dy
  KForm a = one(R2, {"0", "x"});
  KForm da = exterior_derivative(a);
  CHECK(da.coeff_at({0, 1}) == rf_one(2));

  RationalSampler s(17);
  for (int i = 0; i < 10; ++i) {
    RF f = random_fn(s, R3);
    KForm df = exterior_derivative(KForm::function(R3, f));
    CHECK(exterior_derivative(df).is_zero());
    KForm w = random_one_form(s, R3);
    CHECK(exterior_derivative(exterior_derivative(w)).is_zero());
  }

  // d(x dy^dz) = dx^dy^dz
  KForm w(R3, 2);
  w.set_coeff({1, 2}, RF::variable(3, 0));
  KForm dw = exterior_derivative(w);
  CHECK(dw.coeff_at({0, 1, 2}) == rf_one(3));
  CHECK_THROWS_AS(exterior_derivative(dw), Error);
}

TEST_CASE("interior_product") {
  KForm dxdy(R2, 2);
  dxdy.set_coeff({0, 1}, rf_one(2));
  KForm r = interior_product(vf(R2, {"1", "0"}), dxdy);
  CHECK(r.coeff(0).is_zero());
  CHECK(r.coeff(1) == rf_one(2));  // dy

  // i_{x d/dy} (dx^dy) = -x dx
  KForm r2 = interior_product(vf(R2, {"0", "x"}), dxdy);
  CHECK(r2.coeff(0) == rf2("-x"));
  CHECK(r2.coeff(1).is_zero());

  RationalSampler s(29);
  for (int i = 0; i < 10; ++i) {
    VectorField x = random_vf(s, R3);
    KForm w(R3, 2);
    w.set_coeff({0, 1}, random_fn(s, R3));
    w.set_coeff({0, 2}, random_fn(s, R3));
    w.set_coeff({1, 2}, random_fn(s, R3));
    CHECK(interior_product(x, interior_product(x, w)).is_zero());
  }
}

TEST_CASE("lie_derivative_one_form") {
  // L_{d/dx}(x dy) = dy
  KForm r = lie_derivative_one_form(vf(R2, {"1", "0"}), one(R2, {"0", "x"}));
  CHECK(r.coeff(0).is_zero());
  CHECK(r.coeff(1) == rf_one(2));
  // L_X(0) = 0
  CHECK(lie_derivative_one_form(vf(R2, {"x", "y"}), KForm(R2, 1)).is_zero());
  // L_{x d/dy}(dy) = dx
  KForm r2 = lie_derivative_one_form(vf(R2, {"0", "x"}), one(R2, {"0", "1"}));
  CHECK(r2.coeff(0) == rf_one(2));
  CHECK(r2.coeff(1).is_zero());
}

TEST_CASE("Cartan formula cross-check against algebraic expansion") {
  // L_X alpha = (X·d)alpha + alpha·(dX) componentwise
  RationalSampler s(31);
  for (int it = 0; it < 10; ++it) {
    VectorField x = random_vf(s, R2);
    KForm a = random_one_form(s, R2);
    KForm lhs = lie_derivative_one_form(x, a);
    for (int i = 0; i < 2; ++i) {
      RF rhs(2);
      for (int j = 0; j < 2; ++j) {
        rhs += x.components[j] * a.coeff(i).derivative(j);
        rhs += a.coeff(j) * x.components[j].derivative(i);
      }
      CHECK(lhs.coeff(i) == rhs);
    }
  }
}

TEST_CASE("pullback_form") {
  Chart R1{"R", {"x"}};
  SmoothMap sq = SmoothMap::from_strings(R1, R1, {"x^2"});
  KForm dx = one(R1, {"1"});
  KForm pb = pullback_form(sq, dx);
  CHECK(pb.coeff(0) == parse_expression("2*x", {"x"}));

  RationalSampler s(41);
  SmoothMap id = SmoothMap::identity(R2);
  for (int i = 0; i < 5; ++i) {
    KForm w = random_one_form(s, R2);
    CHECK(pullback_form(id, w) == w);
  }

  // multiplicativity of omega_G = pr1*w - pr2*w on the pair groupoid of R^2:
  // m*omega_G = pr1*omega_G + pr2*omega_G on the composable chart
  Chart G{"G", {"x1", "y1", "x2", "y2"}};
  Chart C{"C", {"a1", "b1", "a2", "b2", "a3", "b3"}};
  SmoothMap pr1 = SmoothMap::from_strings(C, G, {"a1", "b1", "a2", "b2"});
  SmoothMap pr2 = SmoothMap::from_strings(C, G, {"a2", "b2", "a3", "b3"});
  SmoothMap mult = SmoothMap::from_strings(C, G, {"a1", "b1", "a3", "b3"});
  KForm w(R2, 2);
  w.set_coeff({0, 1}, rf_one(2));  // dx^dy on R^2
  SmoothMap g_pr1 = SmoothMap::from_strings(G, R2, {"x1", "y1"});
  SmoothMap g_pr2 = SmoothMap::from_strings(G, R2, {"x2", "y2"});
  KForm omega_g = pullback_form(g_pr1, w) - pullback_form(g_pr2, w);
  KForm lhs = pullback_form(mult, omega_g);
  KForm rhs = pullback_form(pr1, omega_g) + pullback_form(pr2, omega_g);
  CHECK(lhs == rhs);
}

TEST_CASE("chain rule for jacobians of compositions") {
  RationalSampler s(57);
  for (int it = 0; it < 5; ++it) {
    // random polynomial maps R2 -> R2
    auto random_map = [&]() {
      SmoothMap m{R2, R2, {}};
      for (int i = 0; i < 2; ++i) m.components.push_back(random_fn(s, R2));
      return m;
    };
    SmoothMap mo = random_map(), mi = random_map();
    SmoothMap c = compose(mo, mi);
    RFMatrix lhs = jacobian(c);
    RFMatrix jo = substitute_matrix(jacobian(mo), mi.components, 2);
    RFMatrix rhs = jo.multiply(jacobian(mi), rf_zero(2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(lhs.at(i, j) == rhs.at(i, j));
  }
}

TEST_CASE("pullback commutes with exterior derivative") {
  RationalSampler s(71);
  for (int it = 0; it < 5; ++it) {
    SmoothMap m{R2, R2, {}};
    for (int i = 0; i < 2; ++i) m.components.push_back(random_fn(s, R2));
    KForm w = random_one_form(s, R2);
    CHECK(exterior_derivative(pullback_form(m, w)) == pullback_form(m, exterior_derivative(w)));
  }
}

TEST_CASE("restrict_along the diagonal") {
  Chart M{"M", {"m"}};
  Chart MM{"MM", {"x", "y"}};
  SmoothMap diag = SmoothMap::from_strings(M, MM, {"m", "m"});
  // restrict x d/dx + y d/dy along diag -> components (m, m)
  std::vector<RF> comps = {RF::variable(2, 0), RF::variable(2, 1)};
  auto r = restrict_components(comps, diag);
  CHECK(r[0] == RF::variable(1, 0));
  CHECK(r[1] == RF::variable(1, 0));
  // eps^*(dx - dy) = 0
  KForm a = one(MM, {"1", "-1"});
  CHECK(pullback_form(diag, a).is_zero());
  // restriction along the identity is the identity
  SmoothMap id = SmoothMap::identity(MM);
  auto r2 = restrict_components(comps, id);
  CHECK(r2[0] == comps[0]);
  CHECK(r2[1] == comps[1]);
}

TEST_CASE("0-dimensional charts") {
  Chart pt{"pt", {}};
  SmoothMap to_pt{R2, pt, {}};
  CHECK(jacobian(to_pt).rows() == 0);
  CHECK(jacobian(to_pt).cols() == 2);
  SmoothMap unit = SmoothMap::from_strings(pt, R2, {"0", "0"});
  PointP e = unit.apply(PointP{pt, {}});
  CHECK(e.coords[0].is_zero());
  SmoothMap round = compose(to_pt, unit);
  CHECK(round.components.empty());
}
