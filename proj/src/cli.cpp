#include "dgv/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace dgv {

namespace {

std::string unit_section_str(const UnitSection& u) {
  std::ostringstream os;
  os << "vec(";
  for (size_t i = 0; i < u.vec.size(); ++i)
    os << (i ? ", " : "") << u.vec[i].str(u.base.coords);
  os << ") cov(";
  for (size_t i = 0; i < u.cov.size(); ++i)
    os << (i ? ", " : "") << u.cov[i].str(u.base.coords);
  os << ")";
  return os.str();
}

struct GroupoidScope {
  const GroupoidEntry* entry;
  const DiracFrame* frame;
};

GroupoidScope resolve_groupoid(const Document& doc, const CliOptions& opts) {
  std::string gname = doc.only_groupoid(opts.groupoid);
  const GroupoidEntry& g = doc.groupoid(gname);
  std::string fname = !opts.frame_sel.empty() ? opts.frame_sel : g.frame_name;
  if (fname.empty())
    throw Error(ErrorKind::Schema, "groupoid '" + gname + "' carries no frame; pass --frame");
  return GroupoidScope{&g, &doc.frame(fname)};
}

Report cmd_verify_dirac(const Document& doc, const CliOptions& opts) {
  const DiracFrame& f = doc.frame(doc.only_frame(opts.frame_sel));
  Report rep = check_lagrangian(f);
  rep.command = "verify-dirac";
  CheckEntry& closed = rep.add("closedness (informational)");
  closed.detail = courant_tensor(f).closed ? "the structure is closed"
                                           : "the structure is almost Dirac (not closed)";
  return rep;
}

Report cmd_verify_multiplicative(const Document& doc, const CliOptions& opts, int samples,
                                 std::uint64_t seed) {
  GroupoidScope sc = resolve_groupoid(doc, opts);
  Report axioms = check_groupoid_axioms(sc.entry->def);
  Report rep = check_dirac_multiplicative(sc.entry->def, *sc.frame, samples, seed);
  Report out;
  out.command = "verify-multiplicative";
  out.seed = seed;
  out.samples = samples;
  out.append(axioms, "groupoid");
  out.append(rep, "dirac");
  return out;
}

Report cmd_units_algebroid(const Document& doc, const CliOptions& opts) {
  GroupoidScope sc = resolve_groupoid(doc, opts);
  Infinitesimal inf = compute_infinitesimal(sc.entry->def, *sc.frame);
  Report rep;
  rep.command = "units-algebroid";
  CheckEntry& e = rep.add("units algebroid");
  e.detail = "rank " + std::to_string(inf.units_frame.size());
  for (const auto& u : inf.units_frame) e.witnesses.push_back(unit_section_str(u));
  e.validity_denominator = inf.validity;
  CheckEntry& inv = rep.add("unit-fiber invariants");
  inv.detail = "tangent parts in TP, cotangent parts annihilate TP";
  for (const auto& u : inf.units_frame)
    if (!in_units_fiber(inf.sym, u)) inv.status = CheckStatus::Fail;
  CheckEntry& anchor = rep.add("anchor");
  anchor.detail = "base components of the tangent parts";
  for (const auto& u : inf.units_frame) {
    RFVec a = units_anchor(inf.sym, u);
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i)
      s += (i ? ", " : "") + a[i].str(sc.entry->def.base.coords);
    anchor.witnesses.push_back(s + ")");
  }
  return rep;
}

Report cmd_cores(const Document& doc, const CliOptions& opts) {
  GroupoidScope sc = resolve_groupoid(doc, opts);
  const GroupoidDef& def = sc.entry->def;
  Infinitesimal inf = compute_infinitesimal(def, *sc.frame);
  Report rep;
  rep.command = "cores";
  CheckEntry& es = rep.add("s-core");
  es.detail = "rank " + std::to_string(inf.is_frame.size());
  for (const auto& u : inf.is_frame) es.witnesses.push_back(unit_section_str(u));
  CheckEntry& et = rep.add("t-core");
  et.detail = "rank " + std::to_string(inf.it_frame.size());
  for (const auto& u : inf.it_frame) et.witnesses.push_back(unit_section_str(u));
  CheckEntry& split = rep.add("splitting at witness");
  {
    int n = def.n();
    std::vector<UnitSection> both = inf.units_frame;
    both.insert(both.end(), inf.it_frame.begin(), inf.it_frame.end());
    std::vector<UnitSection> both2 = inf.units_frame;
    both2.insert(both2.end(), inf.is_frame.begin(), inf.is_frame.end());
    if (generic_rank(both) == n && generic_rank(both2) == n) {
      split.detail = "units (+) t-core and units (+) s-core both have full rank " +
                     std::to_string(n);
    } else {
      split.status = CheckStatus::Fail;
      split.detail = "splitting rank defect";
    }
  }
  CheckEntry& mem = rep.add("membership in the restricted structure");
  mem.detail = "all core generators pair to zero with the restricted frame";
  for (const auto& fam : {inf.is_frame, inf.it_frame})
    for (const auto& u : fam)
      for (const auto& d : inf.restricted)
        if (!pairing_units(u, d).is_zero()) mem.status = CheckStatus::Fail;
  return rep;
}

Report cmd_base_dirac(const Document& doc, const CliOptions& opts, int samples,
                      std::uint64_t seed) {
  GroupoidScope sc = resolve_groupoid(doc, opts);
  Infinitesimal inf = compute_infinitesimal(sc.entry->def, *sc.frame);
  BaseDirac bd = base_dirac(sc.entry->def, inf, *sc.frame, samples, seed);
  Report rep = bd.report;
  rep.command = "base-dirac";
  rep.seed = seed;
  rep.samples = samples;
  if (bd.applicable) {
    CheckEntry& e = rep.add("base frame sections");
    for (const auto& s : bd.frame.sections) {
      std::string line = "vec(";
      for (size_t i = 0; i < s.vector.components.size(); ++i)
        line += (i ? ", " : "") + s.vector.components[i].str(bd.frame.chart.coords);
      line += ") cov(";
      for (int i = 0; i < bd.frame.chart.dim(); ++i)
        line += (i ? ", " : "") + s.oneform.coeff(i).str(bd.frame.chart.coords);
      e.witnesses.push_back(line + ")");
    }
    e.detail = "rank " + std::to_string(bd.frame.sections.size());
  }
  return rep;
}

Report cmd_integrability(const Document& doc, const CliOptions& opts) {
  GroupoidScope sc = resolve_groupoid(doc, opts);
  Infinitesimal inf = compute_infinitesimal(sc.entry->def, *sc.frame);
  return integrability_criterion(sc.entry->def, inf, *sc.frame);
}

Report cmd_build_b(const Document& doc, const CliOptions& opts) {
  GroupoidScope sc = resolve_groupoid(doc, opts);
  const GroupoidDef& def = sc.entry->def;
  Infinitesimal inf = compute_infinitesimal(def, *sc.frame);
  BFrame bf = build_b(def, inf, *sc.frame);
  Report rep;
  rep.command = "build-b";
  CheckEntry& e = rep.add("quotient bundle");
  e.detail = "rank " + std::to_string(bf.rank()) + " = 2 dim G - 2 rank(s-core)";
  for (const auto& u : bf.representatives) e.witnesses.push_back(unit_section_str(u));
  e.validity_denominator = bf.validity;
  CheckEntry& nd = rep.add("induced pairing nondegenerate at witness");
  PointP base_witness = def.src.apply(sc.frame->witness);
  QMatrix pw = evaluate_matrix(bf.pairing, base_witness.coords);
  if (rank_of(pw, Rational(0), Rational(1)) < bf.rank()) {
    nd.status = CheckStatus::Fail;
    nd.detail = "pairing matrix is singular at the witness";
  } else {
    nd.detail = "rank " + std::to_string(bf.rank()) + " at the witness";
  }
  return rep;
}

Report cmd_courant_axioms(const Document& doc, const CliOptions& opts, std::uint64_t seed) {
  GroupoidScope sc = resolve_groupoid(doc, opts);
  Infinitesimal inf = compute_infinitesimal(sc.entry->def, *sc.frame);
  BFrame bf = build_b(sc.entry->def, inf, *sc.frame);
  return check_courant_axioms(sc.entry->def, inf, *sc.frame, bf, seed);
}

Report cmd_iso_check(const Document& doc, const CliOptions& opts) {
  GroupoidScope sc = resolve_groupoid(doc, opts);
  const GroupoidDef& def = sc.entry->def;
  Infinitesimal inf = compute_infinitesimal(def, *sc.frame);
  BFrame bf = build_b(def, inf, *sc.frame);
  if (opts.family == "pair") {
    if (!sc.entry->is_pair)
      throw Error(ErrorKind::FamilyMismatch, "groupoid is not a pair Dirac groupoid");
    PairDirac pd{def, *sc.frame};
    return iso_pair_check(doc.frame(sc.entry->pair_base_frame), pd, inf, bf);
  }
  if (opts.family == "poisson") {
    if (opts.bivector.empty())
      throw Error(ErrorKind::Schema, "iso-check poisson needs --bivector");
    auto it = doc.bivectors.find(opts.bivector);
    if (it == doc.bivectors.end())
      throw Error(ErrorKind::Schema, "unknown bivector '" + opts.bivector + "'");
    Bivector pi = it->second;
    if (pi.chart != def.total) {
      if (sc.entry->is_pair && pi.chart == def.base)
        pi = pair_bivector(pi, def.total);
      else
        throw Error(ErrorKind::FamilyMismatch, "bivector does not live on the arrow chart");
    }
    return iso_poisson_check(def, inf, *sc.frame, bf, pi);
  }
  if (opts.family == "presymplectic") {
    if (opts.two_form.empty())
      throw Error(ErrorKind::Schema, "iso-check presymplectic needs --two-form");
    auto it = doc.two_forms.find(opts.two_form);
    if (it == doc.two_forms.end())
      throw Error(ErrorKind::Schema, "unknown two-form '" + opts.two_form + "'");
    KForm w = it->second;
    if (w.chart() != def.total) {
      if (sc.entry->is_pair && w.chart() == def.base)
        w = pair_two_form(w, def.total);
      else
        throw Error(ErrorKind::FamilyMismatch, "two-form does not live on the arrow chart");
    }
    return iso_presymplectic_check(def, inf, *sc.frame, bf, w);
  }
  throw Error(ErrorKind::UnknownCommand,
              "iso-check family must be poisson, presymplectic or pair");
}

Report cmd_bisection_action(const Document& doc, const CliOptions& opts, int samples,
                            std::uint64_t seed) {
  GroupoidScope sc = resolve_groupoid(doc, opts);
  const GroupoidDef& def = sc.entry->def;
  Infinitesimal inf = compute_infinitesimal(def, *sc.frame);
  BFrame bf = build_b(def, inf, *sc.frame);
  Report rep;
  rep.command = "bisection-action";
  rep.seed = seed;
  rep.samples = samples;

  std::vector<Bisection> ks;
  for (const auto& [name, e] : doc.bisections)
    if (e.groupoid == def.name) ks.push_back(e.bisection);
  for (const auto& k : ks) {
    PointP w{def.base, std::vector<Rational>(def.p(), Rational(1))};
    Report br = check_bisection(def, k, w);
    if (!br.passed()) {
      rep.append(br, "bisection " + k.name);
      return rep;
    }
  }
  if (ks.empty()) {
    CheckEntry& e = rep.add("bisections");
    e.status = CheckStatus::NotApplicable;
    e.detail = "document provides no bisections for this groupoid";
    return rep;
  }

  Bisection eps = unit_bisection(def);
  for (const auto& k : ks) {
    CheckEntry& e = rep.add("action of " + k.name);
    e.detail = "identity under the unit bisection, composition law, pairing preserved";
    RationalSampler s(seed);
    int done = 0, guard = 0;
    Bisection kk = bisection_product(def, k, k);
    while (done < samples && guard < 100 * samples + 100 && e.status == CheckStatus::Pass) {
      ++guard;
      PointP p = sample_base_point(def, s);
      try {
        for (size_t i = 0; i < bf.representatives.size(); ++i) {
          const UnitSection& rep_i = bf.representatives[i];
          // rho_eps = id
          BActionResult idr = bisection_action(def, inf, *sc.frame, bf, eps, rep_i, p);
          QVec ev = evaluate_vector(rep_i.vec, p.coords);
          QVec ec = evaluate_vector(rep_i.cov, p.coords);
          if (!coset_equal_at(bf, p, idr.vec, idr.cov, ev, ec)) {
            e.status = CheckStatus::Fail;
            e.detail = "unit bisection does not act as the identity";
            e.witnesses.push_back("rep " + std::to_string(i + 1));
            break;
          }
          // rho_{K*K} = rho_K ∘ rho_K
          BActionResult once = bisection_action(def, inf, *sc.frame, bf, k, rep_i, p);
          RFVec cv, cc;
          for (const auto& x : once.vec) cv.push_back(RF::constant(def.p(), x));
          for (const auto& x : once.cov) cc.push_back(RF::constant(def.p(), x));
          UnitSection mid = unit_section(def.base, cv, cc);
          BActionResult twice = bisection_action(def, inf, *sc.frame, bf, k, mid, once.base_point);
          BActionResult direct = bisection_action(def, inf, *sc.frame, bf, kk, rep_i, p);
          bool same_point = true;
          for (size_t c = 0; c < twice.base_point.coords.size(); ++c)
            if (twice.base_point.coords[c] != direct.base_point.coords[c]) same_point = false;
          if (!same_point ||
              !coset_equal_at(bf, direct.base_point, direct.vec, direct.cov, twice.vec,
                              twice.cov)) {
            e.status = CheckStatus::Fail;
            e.detail = "composition law fails";
            e.witnesses.push_back("rep " + std::to_string(i + 1));
            break;
          }
        }
        // pairing preservation on the first two representatives
        if (e.status == CheckStatus::Pass && bf.rank() >= 2) {
          BActionResult a = bisection_action(def, inf, *sc.frame, bf, k, bf.representatives[0], p);
          BActionResult b = bisection_action(def, inf, *sc.frame, bf, k, bf.representatives[1], p);
          Rational lhs(0);
          for (size_t i = 0; i < a.vec.size(); ++i)
            lhs += a.cov[i] * b.vec[i] + b.cov[i] * a.vec[i];
          Rational rhs = pairing_units(bf.representatives[0], bf.representatives[1])
                             .evaluate(p.coords);
          if (lhs != rhs) {
            e.status = CheckStatus::Fail;
            e.detail = "pairing not preserved";
          }
        }
        ++done;
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::PoleAtPoint ||
            err.kind() == ErrorKind::RankDeficientAtPoint)
          continue;
        throw;
      }
    }
    if (e.status == CheckStatus::Pass)
      e.detail += " at " + std::to_string(done) + " samples";
  }
  return rep;
}

Report cmd_classify(const Document& doc, const CliOptions& opts, int samples,
                    std::uint64_t seed) {
  GroupoidScope sc = resolve_groupoid(doc, opts);
  const GroupoidDef& def = sc.entry->def;
  std::string ud_name = opts.unit_dirac;
  if (ud_name.empty()) {
    if (doc.unit_diracs.size() != 1)
      throw Error(ErrorKind::Schema, "select a class with --class");
    ud_name = doc.unit_diracs.begin()->first;
  }
  auto uit = doc.unit_diracs.find(ud_name);
  if (uit == doc.unit_diracs.end())
    throw Error(ErrorKind::Schema, "unknown unit Dirac class '" + ud_name + "'");
  std::string h_name = opts.subgroupoid;
  if (h_name.empty()) {
    if (doc.subgroupoids.size() != 1)
      throw Error(ErrorKind::Schema, "select a subgroupoid with --subgroupoid");
    h_name = doc.subgroupoids.begin()->first;
  }
  auto hit = doc.subgroupoids.find(h_name);
  if (hit == doc.subgroupoids.end())
    throw Error(ErrorKind::Schema, "unknown subgroupoid '" + h_name + "'");
  for (const auto& k : hit->second.data.generators) {
    PointP w{def.base, std::vector<Rational>(def.p(), Rational(1))};
    Report br = check_bisection(def, k, w);
    if (!br.passed()) {
      Report rep;
      rep.command = "classify";
      rep.append(br, "bisection " + k.name);
      return rep;
    }
  }
  Infinitesimal inf = compute_infinitesimal(def, *sc.frame);
  BFrame bf = build_b(def, inf, *sc.frame);
  return drinfeld_classify(def, inf, *sc.frame, bf, uit->second.ud, hit->second.data, samples,
                           seed);
}

}  // namespace

int run_command(const CliOptions& opts, std::ostream& out) {
  try {
    Document doc = load_document(opts.input);
    std::uint64_t seed = opts.seed.value_or(doc.seed);
    int samples = opts.samples.value_or(doc.samples);

    Report rep;
    if (opts.command == "verify-dirac") rep = cmd_verify_dirac(doc, opts);
    else if (opts.command == "verify-multiplicative")
      rep = cmd_verify_multiplicative(doc, opts, samples, seed);
    else if (opts.command == "units-algebroid") rep = cmd_units_algebroid(doc, opts);
    else if (opts.command == "cores") rep = cmd_cores(doc, opts);
    else if (opts.command == "base-dirac") rep = cmd_base_dirac(doc, opts, samples, seed);
    else if (opts.command == "integrability") rep = cmd_integrability(doc, opts);
    else if (opts.command == "build-b") rep = cmd_build_b(doc, opts);
    else if (opts.command == "courant-axioms") rep = cmd_courant_axioms(doc, opts, seed);
    else if (opts.command == "iso-check") rep = cmd_iso_check(doc, opts);
    else if (opts.command == "bisection-action")
      rep = cmd_bisection_action(doc, opts, samples, seed);
    else if (opts.command == "classify") rep = cmd_classify(doc, opts, samples, seed);
    else
      throw Error(ErrorKind::UnknownCommand, "'" + opts.command + "'");

    rep.command = opts.command;
    if (rep.seed == 0) rep.seed = seed;
    if (rep.samples == 0) rep.samples = samples;
    out << rep.text();
    if (!opts.json_out.empty()) {
      std::ofstream jf(opts.json_out);
      jf << rep.json() << "\n";
    }
    return rep.passed() ? 0 : 1;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Schema:
      case ErrorKind::UnknownCommand:
      case ErrorKind::Syntax:
      case ErrorKind::UnknownVariable:
      case ErrorKind::DivisionByZeroPolynomial:
        return 2;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace dgv
