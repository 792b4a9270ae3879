#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dgv/homogeneous.hpp>

using namespace dgv;

namespace {

const Chart M2{"M", {"x", "y"}};

GroupoidDef abelian_r2() {
  GroupoidDef def;
  def.name = "r2-plus";
  def.base = Chart{"pt", {}};
  def.total = Chart{"R2", {"x", "y"}};
  def.composable = Chart{"C", {"a1", "b1", "a2", "b2"}};
  def.pair_chart = Chart{"P2", {"x_a", "y_a", "x_b", "y_b"}};
  def.src = SmoothMap::from_strings(def.total, def.base, {});
  def.tgt = SmoothMap::from_strings(def.total, def.base, {});
  def.unit = SmoothMap::from_strings(def.base, def.total, {"0", "0"});
  def.inv = SmoothMap::from_strings(def.total, def.total, {"-x", "-y"});
  def.pr1 = SmoothMap::from_strings(def.composable, def.total, {"a1", "b1"});
  def.pr2 = SmoothMap::from_strings(def.composable, def.total, {"a2", "b2"});
  def.mult = SmoothMap::from_strings(def.composable, def.total, {"a1+a2", "b1+b2"});
  def.lift = SmoothMap::from_strings(def.pair_chart, def.composable,
                                     {"x_a", "y_a", "x_b", "y_b"});
  return def;
}

DiracFrame graph_pi(const Chart& c, const std::string& coeff) {
  Bivector b = Bivector::zero(c);
  b.upper[0] = parse_expression(coeff, c.coords);
  PointP w{c, std::vector<Rational>(c.dim(), Rational(0))};
  w.coords[0] = Rational(1);
  return from_bivector(b, w, "graph(pi)");
}

UnitSection us(const Chart& base, std::vector<std::string> vec, std::vector<std::string> cov) {
  RFVec v, a;
  for (auto& s : vec) v.push_back(parse_expression(s, base.coords));
  for (auto& s : cov) a.push_back(parse_expression(s, base.coords));
  return unit_section(base, v, a);
}

RF pf(const Chart& c, const std::string& s) { return parse_expression(s, c.coords); }

// mutual span equality of two Lagrangian frames via cross pairings
bool frames_span_equal(const DiracFrame& a, const DiracFrame& b) {
  for (const auto& s1 : a.sections)
    for (const auto& s2 : b.sections)
      if (!canonical_pairing(s1, s2).is_zero()) return false;
  return true;
}

struct PairSetup {
  PairDirac pd;
  Infinitesimal inf;
  BFrame bf;
};

PairSetup make_pair_setup() {
  PairDirac pd = pair_dirac(graph_pi(M2, "x"));
  Infinitesimal inf = compute_infinitesimal(pd.def, pd.frame);
  BFrame bf = build_b(pd.def, inf, pd.frame);
  return PairSetup{std::move(pd), std::move(inf), std::move(bf)};
}

}  // namespace

TEST_CASE("the trivial class I^s (+) units reproduces the ambient structure") {
  PairSetup st = make_pair_setup();
  UnitDirac ud;
  ud.name = "trivial";
  ud.sections = st.inf.is_frame;
  ud.sections.insert(ud.sections.end(), st.inf.units_frame.begin(), st.inf.units_frame.end());
  ud.witness = PointP{st.pd.def.base, {Rational(1), Rational(0)}};
  SubgroupoidData h{"trivial-H", {}, {unit_bisection(st.pd.def)}};

  Report sw = check_sandwich(st.pd.def, st.inf, ud, h);
  INFO(sw.text());
  CHECK(sw.passed());

  DiracFrame d = build_homogeneous(st.pd.def, st.inf, st.pd.frame, ud, 7);
  CHECK(check_lagrangian(d).passed());
  CHECK(frames_span_equal(d, st.pd.frame));

  Report restr = check_restriction(st.pd.def, st.inf, d, ud);
  INFO(restr.text());
  CHECK(restr.passed());

  Report cls = drinfeld_classify(st.pd.def, st.inf, st.pd.frame, st.bf, ud, h, 5, 7);
  INFO(cls.text());
  CHECK(cls.passed());
}

TEST_CASE("translation-invariant classes on the pair groupoid") {
  PairSetup st = make_pair_setup();
  const Chart& base = st.pd.def.base;
  // H = the graph of the x-translation action, AH = {0} (+) span(d/dx)
  SubgroupoidData h;
  h.name = "x-translations";
  h.ah_columns = {{pf(base, "0"), pf(base, "0"), pf(base, "1"), pf(base, "0")}};
  h.generators = {
      Bisection{"shift1",
                SmoothMap::from_strings(base, st.pd.def.total, {"x", "y", "x+1", "y"}),
                SmoothMap::from_strings(base, base, {"x-1", "y"})}};

  // invariant class: D_M (+) (span(d/dx) ⊕ span(dy)) on the second slots
  UnitDirac ud;
  ud.name = "invariant";
  ud.sections = {us(base, {"0", "x", "0", "0"}, {"1", "0", "0", "0"}),
                 us(base, {"-x", "0", "0", "0"}, {"0", "1", "0", "0"}),
                 us(base, {"0", "0", "1", "0"}, {"0", "0", "0", "0"}),
                 us(base, {"0", "0", "0", "0"}, {"0", "0", "0", "1"})};
  ud.witness = PointP{base, {Rational(1), Rational(0)}};

  Report cls = drinfeld_classify(st.pd.def, st.inf, st.pd.frame, st.bf, ud, h, 5, 11);
  INFO(cls.text());
  CHECK(cls.passed());

  // the built structure contains the right-invariant core and the
  // left-invariant image of AH
  DiracFrame d = build_homogeneous(st.pd.def, st.inf, st.pd.frame, ud, 11);
  for (const auto& sigma : st.inf.is_frame) {
    PSection sr = invariant_extension(st.pd.def, st.inf.sym, sigma, ExtensionSide::Right);
    for (const auto& s : d.sections) CHECK(canonical_pairing(sr, s).is_zero());
  }
  UnitSection ah = zero_unit_section(base, 4);
  ah.vec = h.ah_columns[0];
  PSection ah_l = invariant_extension(st.pd.def, st.inf.sym, ah, ExtensionSide::Left);
  for (const auto& s : d.sections) CHECK(canonical_pairing(ah_l, s).is_zero());

  // reduction condition: R_K^* of the built frame stays in the structure
  // at sampled arrows
  SmoothMap rk = right_translation_map(st.pd.def, h.generators[0]);
  RationalSampler smp(13);
  for (int it = 0; it < 3; ++it) {
    ComposablePoint cp = sample_composable(st.pd.def, smp);
    QMatrix dm = d.coefficient_matrix_at(cp.g.coords);
    if (rank_of(dm, Rational(0), Rational(1)) < 4) continue;
    for (const auto& s : d.sections) {
      PSection pulled = pullback_psection(rk, s);
      QVec tv = evaluate_vector(pulled.vector.components, cp.g.coords);
      QVec cv = evaluate_vector(pulled.oneform.coeffs(), cp.g.coords);
      CHECK(membership_at(d, cp.g, tv, cv));
    }
  }

  // uniqueness: rebuilding from the restriction reproduces the span
  std::vector<UnitSection> restricted = restrict_frame(st.pd.def, d);
  UnitDirac ud2{"rebuilt", restricted, ud.witness};
  // reduce to four generically independent sections
  while (ud2.sections.size() > 4) ud2.sections.pop_back();
  if (generic_rank(ud2.sections) == 4) {
    DiracFrame d2 = build_homogeneous(st.pd.def, st.inf, st.pd.frame, ud2, 17);
    CHECK(frames_span_equal(d, d2));
  }
}

TEST_CASE("an x-dependent perturbation fails invariance with a witness") {
  PairSetup st = make_pair_setup();
  const Chart& base = st.pd.def.base;
  SubgroupoidData h;
  h.name = "x-translations";
  h.ah_columns = {{pf(base, "0"), pf(base, "0"), pf(base, "1"), pf(base, "0")}};
  h.generators = {
      Bisection{"shift1",
                SmoothMap::from_strings(base, st.pd.def.total, {"x", "y", "x+1", "y"}),
                SmoothMap::from_strings(base, base, {"x-1", "y"})}};
  // perturbed class from the graph of the x-dependent form x dx^dy on the
  // quotient slot
  UnitDirac ud;
  ud.name = "perturbed";
  ud.sections = {us(base, {"0", "x", "0", "0"}, {"1", "0", "0", "0"}),
                 us(base, {"-x", "0", "0", "0"}, {"0", "1", "0", "0"}),
                 us(base, {"0", "0", "1", "0"}, {"0", "0", "0", "x"}),
                 us(base, {"0", "0", "0", "1"}, {"0", "0", "-x", "0"})};
  ud.witness = PointP{base, {Rational(1), Rational(1)}};

  CHECK(check_unit_dirac(st.pd.def, ud).passed());
  // the sandwich inclusions hold, but AH x {0} leaves the class...
  Report sw = check_sandwich(st.pd.def, st.inf, ud, h);
  CHECK_FALSE(sw.passed());
  // ...and the action of the translation bisection moves the class
  Report invar = check_bisection_invariance(st.pd.def, st.inf, st.pd.frame, st.bf, ud, h, 5, 3);
  INFO(invar.text());
  CHECK_FALSE(invar.passed());
  bool witnessed = false;
  for (const auto& e : invar.entries)
    if (e.status == CheckStatus::Fail && !e.witnesses.empty()) witnessed = true;
  CHECK(witnessed);
}

TEST_CASE("Poisson groupoid over a point: AH (+) AH° descends") {
  GroupoidDef def = abelian_r2();
  DiracFrame f = graph_pi(def.total, "x");
  Infinitesimal inf = compute_infinitesimal(def, f);
  BFrame bf = build_b(def, inf, f);
  // H = the x-axis subgroup; AH = span(e_x), AH° = span(dy)
  SubgroupoidData h;
  h.name = "x-axis";
  h.ah_columns = {{RF::constant(0, Rational(1)), RF::constant(0, Rational(0))}};
  h.generators = {Bisection{"c1", SmoothMap::from_strings(def.base, def.total, {"1", "0"}),
                            SmoothMap::from_strings(def.base, def.base, {})}};
  UnitDirac ud;
  ud.name = "AH+AH0";
  ud.sections = {us(def.base, {"1", "0"}, {"0", "0"}), us(def.base, {"0", "0"}, {"0", "1"})};
  ud.witness = PointP{def.base, {}};

  Report cls = drinfeld_classify(def, inf, f, bf, ud, h, 5, 19);
  INFO(cls.text());
  CHECK(cls.passed());

  // the built structure is spanned by {(d/dx, 0), (0, dy)} up to functions
  DiracFrame d = build_homogeneous(def, inf, f, ud, 19);
  DiracFrame expected{def.total,
                      {PSection(def.total, VectorField::from_strings(def.total, {"1", "0"}),
                                KForm(def.total, 1)),
                       PSection(def.total, VectorField::from_strings(def.total, {"-x", "0"}),
                                KForm::one_form(def.total, {pf(def.total, "0"),
                                                            pf(def.total, "1")}))},
                      "expected",
                      PointP{def.total, {Rational(1), Rational(0)}}};
  CHECK(frames_span_equal(d, expected));
}

TEST_CASE("Poisson groupoid over a point: 0 (+) A*G gives back the structure itself") {
  GroupoidDef def = abelian_r2();
  DiracFrame f = graph_pi(def.total, "x");
  Infinitesimal inf = compute_infinitesimal(def, f);
  BFrame bf = build_b(def, inf, f);
  SubgroupoidData h{"unit-H", {}, {unit_bisection(def)}};
  UnitDirac ud;
  ud.name = "0+A*";
  ud.sections = {us(def.base, {"0", "0"}, {"1", "0"}), us(def.base, {"0", "0"}, {"0", "1"})};
  ud.witness = PointP{def.base, {}};
  Report cls = drinfeld_classify(def, inf, f, bf, ud, h, 5, 23);
  INFO(cls.text());
  CHECK(cls.passed());
  DiracFrame d = build_homogeneous(def, inf, f, ud, 23);
  CHECK(frames_span_equal(d, f));
}

TEST_CASE("a class with a generator outside units (+) ker TTt fails the sandwich") {
  PairSetup st = make_pair_setup();
  const Chart& base = st.pd.def.base;
  SubgroupoidData h{"trivial-H", {}, {}};
  UnitDirac ud;
  ud.name = "bad";
  // the third generator has a first-leg tangent component, so it pairs
  // nontrivially with the s-core and leaves units (+) ker TTt|_P
  ud.sections = {us(base, {"0", "x", "0", "0"}, {"1", "0", "0", "0"}),
                 us(base, {"-x", "0", "0", "0"}, {"0", "1", "0", "0"}),
                 us(base, {"1", "0", "0", "0"}, {"0", "0", "0", "0"}),
                 us(base, {"0", "0", "x", "0"}, {"0", "0", "0", "1"})};
  ud.witness = PointP{base, {Rational(1), Rational(0)}};
  Report sw = check_sandwich(st.pd.def, st.inf, ud, h);
  CHECK_FALSE(sw.passed());
  bool upper_failed = false;
  for (const auto& e : sw.entries)
    if (e.name == "structure contained in units (+) ker TTt|_P" &&
        e.status == CheckStatus::Fail && !e.witnesses.empty())
      upper_failed = true;
  CHECK(upper_failed);
}
