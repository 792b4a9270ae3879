#include "dgv/homogeneous.hpp"

namespace dgv {

namespace {

std::string point_str(const PointP& p) {
  std::string out = "(";
  for (size_t i = 0; i < p.coords.size(); ++i)
    out += (i ? "," : "") + p.coords[i].str();
  return out + ")";
}

QMatrix unit_sections_at(const std::vector<UnitSection>& fam, const PointP& p, int n) {
  QMatrix m(2 * n, static_cast<int>(fam.size()), Rational(0));
  for (size_t s = 0; s < fam.size(); ++s) {
    QVec v = evaluate_vector(fam[s].vec, p.coords);
    QVec a = evaluate_vector(fam[s].cov, p.coords);
    for (int i = 0; i < n; ++i) {
      m.at(i, static_cast<int>(s)) = v[i];
      m.at(n + i, static_cast<int>(s)) = a[i];
    }
  }
  return m;
}

}  // namespace

Report check_unit_dirac(const GroupoidDef& def, const UnitDirac& ud) {
  Report rep;
  rep.command = "check-unit-dirac";
  int n = def.n();
  CheckEntry& iso = rep.add("isotropy");
  iso.detail = "pairwise pairings vanish identically";
  for (size_t i = 0; i < ud.sections.size() && iso.status == CheckStatus::Pass; ++i)
    for (size_t j = i; j < ud.sections.size(); ++j) {
      RF p = pairing_units(ud.sections[i], ud.sections[j]);
      if (!p.is_zero()) {
        iso.status = CheckStatus::Fail;
        iso.detail = "generators " + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                     " pair to " + p.str(def.base.coords);
        break;
      }
    }
  CheckEntry& rk = rep.add("rank at witness");
  if (static_cast<int>(ud.sections.size()) != n) {
    rk.status = CheckStatus::Fail;
    rk.detail = "unit structure needs exactly dim G generators";
    return rep;
  }
  QMatrix m = unit_sections_at(ud.sections, ud.witness, n);
  int r = rank_of(m, Rational(0), Rational(1));
  if (r < n) {
    rk.status = CheckStatus::Fail;
    rk.detail = "rank " + std::to_string(r) + " < " + std::to_string(n) + " at witness " +
                point_str(ud.witness);
  } else {
    rk.detail = "rank " + std::to_string(n) + " at witness";
  }
  return rep;
}

Report check_sandwich(const GroupoidDef& def, const Infinitesimal& inf, const UnitDirac& ud,
                      const SubgroupoidData& h) {
  Report rep;
  rep.command = "check-sandwich";
  rep.append(check_unit_dirac(def, ud), "lagrangian");

  CheckEntry& ah_ker = rep.add("AH lies in ker Tt along the units");
  for (size_t j = 0; j < h.ah_columns.size(); ++j) {
    RFVec img = inf.sym.j_t_units.apply(h.ah_columns[j], rf_zero(def.p()));
    for (const auto& x : img)
      if (!x.is_zero()) {
        ah_ker.status = CheckStatus::Fail;
        ah_ker.detail = "AH generator " + std::to_string(j + 1) + " leaves ker Tt";
      }
  }
  if (ah_ker.status == CheckStatus::Pass)
    ah_ker.detail = std::to_string(h.ah_columns.size()) + " generator(s) verified";

  CheckEntry& lower = rep.add("s-core contained in the unit structure");
  for (size_t i = 0; i < inf.is_frame.size() && lower.status == CheckStatus::Pass; ++i)
    for (size_t j = 0; j < ud.sections.size(); ++j) {
      RF p = pairing_units(inf.is_frame[i], ud.sections[j]);
      if (!p.is_zero()) {
        lower.status = CheckStatus::Fail;
        lower.detail = "core generator " + std::to_string(i + 1) + " not orthogonal to the structure";
        lower.witnesses.push_back("<core_" + std::to_string(i + 1) + ", gen_" +
                                  std::to_string(j + 1) + "> = " + p.str(def.base.coords));
        break;
      }
    }
  if (lower.status == CheckStatus::Pass)
    lower.detail = "I^s pairs to zero with the Lagrangian structure";

  CheckEntry& upper = rep.add("structure contained in units (+) ker TTt|_P");
  for (size_t i = 0; i < ud.sections.size() && upper.status == CheckStatus::Pass; ++i)
    for (size_t j = 0; j < inf.is_frame.size(); ++j) {
      RF p = pairing_units(ud.sections[i], inf.is_frame[j]);
      if (!p.is_zero()) {
        upper.status = CheckStatus::Fail;
        upper.detail = "generator " + std::to_string(i + 1) + " not orthogonal to the s-core";
        upper.witnesses.push_back("<gen_" + std::to_string(i + 1) + ", core_" +
                                  std::to_string(j + 1) + "> = " + p.str(def.base.coords));
        break;
      }
    }
  if (upper.status == CheckStatus::Pass)
    upper.detail = "structure pairs to zero with the s-core";

  CheckEntry& ah_in = rep.add("AH x {0} contained in the structure");
  for (size_t j = 0; j < h.ah_columns.size() && ah_in.status == CheckStatus::Pass; ++j) {
    UnitSection ah = zero_unit_section(def.base, def.n());
    ah.vec = h.ah_columns[j];
    for (size_t i = 0; i < ud.sections.size(); ++i) {
      RF p = pairing_units(ah, ud.sections[i]);
      if (!p.is_zero()) {
        ah_in.status = CheckStatus::Fail;
        ah_in.detail = "AH generator " + std::to_string(j + 1) + " leaves the structure";
        ah_in.witnesses.push_back("<AH_" + std::to_string(j + 1) + ", gen_" +
                                  std::to_string(i + 1) + "> = " + p.str(def.base.coords));
        break;
      }
    }
  }
  if (ah_in.status == CheckStatus::Pass)
    ah_in.detail = "AH x {0} pairs to zero with the structure";
  return rep;
}

DiracFrame build_homogeneous(const GroupoidDef& def, const Infinitesimal& inf,
                             const DiracFrame& frame, const UnitDirac& ud, std::uint64_t seed) {
  int n = def.n();
  RF zero = rf_zero(n), one = rf_one(n);
  std::vector<PSection> spanning;
  for (const auto& e : ud.sections)
    spanning.push_back(lift_to_g(def, inf, frame, e));
  for (const auto& sigma : inf.is_frame)
    spanning.push_back(invariant_extension(def, inf.sym, sigma, ExtensionSide::Right));

  // reduce the spanning family to n generically independent sections
  RFMatrix m(2 * n, static_cast<int>(spanning.size()), zero);
  for (size_t s = 0; s < spanning.size(); ++s)
    for (int i = 0; i < n; ++i) {
      m.at(i, static_cast<int>(s)) = spanning[s].vector.components[i];
      m.at(n + i, static_cast<int>(s)) = spanning[s].oneform.coeff(i);
    }
  Echelon<RF> ech = echelon(m, zero, one);
  if (ech.rank() != n)
    throw Error(ErrorKind::GenericSolveFailed,
                "homogeneous structure has generic rank " + std::to_string(ech.rank()) +
                    ", expected " + std::to_string(n));
  DiracFrame d;
  d.chart = def.total;
  d.label = ud.name + " through " + frame.label;
  for (int c : ech.pivot_cols) d.sections.push_back(spanning[c]);

  // witness arrow: a sampled point where the new frame has full rank
  RationalSampler s(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    ComposablePoint cp = sample_composable(def, s);
    try {
      QMatrix dm = d.coefficient_matrix_at(cp.g.coords);
      if (rank_of(dm, Rational(0), Rational(1)) == n) {
        d.witness = cp.g;
        return d;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleAtPoint) throw;
    }
  }
  throw Error(ErrorKind::GenericSolveFailed, "no full-rank witness for the built structure");
}

Report check_restriction(const GroupoidDef& def, const Infinitesimal& inf, const DiracFrame& d,
                         const UnitDirac& ud) {
  Report rep;
  rep.command = "check-restriction";
  std::vector<UnitSection> restricted = restrict_frame(def, d);

  CheckEntry& incl = rep.add("unit structure contained in D restricted to units");
  for (size_t i = 0; i < ud.sections.size() && incl.status == CheckStatus::Pass; ++i)
    for (size_t j = 0; j < restricted.size(); ++j) {
      RF p = pairing_units(ud.sections[i], restricted[j]);
      if (!p.is_zero()) {
        incl.status = CheckStatus::Fail;
        incl.detail = "generator " + std::to_string(i + 1) + " leaves the restriction";
        incl.witnesses.push_back("pairs with restricted section " + std::to_string(j + 1) +
                                 " to " + p.str(def.base.coords));
        break;
      }
    }
  if (incl.status == CheckStatus::Pass)
    incl.detail = "structure pairs to zero with the restricted frame";

  CheckEntry& rk = rep.add("rank equality at witness");
  int n = def.n();
  QMatrix a = unit_sections_at(ud.sections, ud.witness, n);
  QMatrix b = unit_sections_at(restricted, ud.witness, n);
  int ra = rank_of(a, Rational(0), Rational(1));
  int rb = rank_of(b, Rational(0), Rational(1));
  if (ra == rb && ra == n) {
    rk.detail = "both bundles have rank " + std::to_string(n) + " at the witness";
  } else {
    rk.status = CheckStatus::Fail;
    rk.detail = "rank mismatch: structure " + std::to_string(ra) + ", restriction " +
                std::to_string(rb);
  }
  (void)inf;
  return rep;
}

Report check_bisection_invariance(const GroupoidDef& def, const Infinitesimal& inf,
                                  const DiracFrame& frame, const BFrame& bf, const UnitDirac& ud,
                                  const SubgroupoidData& h, int samples, std::uint64_t seed) {
  Report rep;
  rep.command = "check-bisection-invariance";
  rep.seed = seed;
  rep.samples = samples;
  int n = def.n();
  if (h.generators.empty()) {
    CheckEntry& e = rep.add("generators");
    e.status = CheckStatus::NotApplicable;
    e.detail = "no generator bisections supplied";
    return rep;
  }
  for (const auto& k : h.generators) {
    CheckEntry& e = rep.add("invariance under " + k.name);
    RationalSampler s(seed);
    int done = 0, guard = 0;
    std::vector<std::string> visited;
    while (done < samples && guard < 100 * samples + 100 && e.status == CheckStatus::Pass) {
      ++guard;
      PointP p = sample_base_point(def, s);
      try {
        visited.push_back(point_str(p));
        for (size_t gi = 0; gi < ud.sections.size(); ++gi) {
          BActionResult res =
              bisection_action(def, inf, frame, bf, k, ud.sections[gi], p);
          // membership modulo the s-core: pair against the structure at
          // the image point (the structure is Lagrangian and contains I^s)
          QMatrix dm = unit_sections_at(ud.sections, res.base_point, n);
          bool ok = true;
          for (int c = 0; c < dm.cols() && ok; ++c) {
            Rational acc(0);
            for (int i = 0; i < n; ++i) {
              acc += res.cov[i] * dm.at(i, c);
              acc += dm.at(n + i, c) * res.vec[i];
            }
            if (!acc.is_zero()) ok = false;
          }
          if (!ok) {
            e.status = CheckStatus::Fail;
            e.detail = "transported class leaves the structure";
            e.witnesses.push_back("p=" + point_str(p) + ", generator " +
                                  std::to_string(gi + 1));
            break;
          }
        }
        ++done;
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::PoleAtPoint ||
            err.kind() == ErrorKind::RankDeficientAtPoint)
          continue;
        e.status = CheckStatus::Fail;
        e.detail = err.what();
        e.witnesses.push_back("p=" + point_str(p));
        break;
      }
    }
    if (e.status == CheckStatus::Pass)
      e.detail = "classes stay in the structure at " + std::to_string(done) + " samples";
    for (const auto& w : visited) e.witnesses.push_back(w);
  }
  return rep;
}

Report check_closed_equivalence(const GroupoidDef& def, const Infinitesimal& inf,
                                const DiracFrame& frame, const BFrame& bf, const UnitDirac& ud,
                                std::uint64_t seed) {
  Report rep;
  rep.command = "check-closed-equivalence";
  rep.seed = seed;

  if (!courant_tensor(frame).closed) {
    CheckEntry& e = rep.add("ambient structure closed");
    e.status = CheckStatus::NotApplicable;
    e.detail = "the ambient frame is not closed; the quotient carries no bracket";
    return rep;
  }

  bool direct_closed = false;
  {
    DiracFrame d = build_homogeneous(def, inf, frame, ud, seed);
    direct_closed = courant_tensor(d).closed;
    CheckEntry& e = rep.add("Courant tensor of the built structure");
    e.detail = direct_closed ? "vanishes identically" : "does not vanish";
  }

  bool bracket_closed = true;
  {
    CheckEntry& e = rep.add("bracket closure of the class in the quotient");
    std::string witness;
    for (size_t i = 0; i < ud.sections.size() && bracket_closed; ++i)
      for (size_t j = 0; j < ud.sections.size(); ++j) {
        UnitSection br = b_bracket(def, inf, frame, bf, ud.sections[i], ud.sections[j]);
        // membership modulo I^s: pair against the structure
        for (const auto& gen : ud.sections)
          if (!pairing_units(br, gen).is_zero()) {
            bracket_closed = false;
            witness = "generators " + std::to_string(i + 1) + "," + std::to_string(j + 1);
            break;
          }
        if (!bracket_closed) break;
      }
    e.detail = bracket_closed ? "all generator brackets stay in the class"
                              : "a bracket leaves the class";
    if (!witness.empty()) e.witnesses.push_back(witness);
  }

  CheckEntry& agree = rep.add("verdicts agree");
  if (direct_closed == bracket_closed) {
    agree.detail = direct_closed ? "both closed" : "both non-closed";
  } else {
    agree.status = CheckStatus::Fail;
    agree.detail = "direct tensor and quotient bracket closure disagree";
  }
  return rep;
}

Report drinfeld_classify(const GroupoidDef& def, const Infinitesimal& inf,
                         const DiracFrame& frame, const BFrame& bf, const UnitDirac& ud,
                         const SubgroupoidData& h, int samples, std::uint64_t seed) {
  Report rep;
  rep.command = "classify";
  rep.seed = seed;
  rep.samples = samples;

  Report sandwich = check_sandwich(def, inf, ud, h);
  rep.append(sandwich, "sandwich");
  if (!sandwich.passed()) {
    CheckEntry& e = rep.add("verdict");
    e.status = CheckStatus::Fail;
    e.detail = "the class is not admissible for H";
    return rep;
  }

  DiracFrame d = build_homogeneous(def, inf, frame, ud, seed);
  CheckEntry& built = rep.add("built homogeneous structure");
  Report lag = check_lagrangian(d);
  built.status = lag.passed() ? CheckStatus::Pass : CheckStatus::Fail;
  built.detail = "frame of rank " + std::to_string(def.n()) + " on the arrow chart";

  rep.append(check_restriction(def, inf, d, ud), "restriction");
  rep.append(check_bisection_invariance(def, inf, frame, bf, ud, h, samples, seed),
             "invariance");

  if (courant_tensor(frame).closed) {
    rep.append(check_closed_equivalence(def, inf, frame, bf, ud, seed), "closedness");
  } else {
    CheckEntry& e = rep.add("closedness");
    e.status = CheckStatus::NotApplicable;
    e.detail = "ambient structure not closed; bracket closure not defined";
  }

  CheckEntry& verdict = rep.add("verdict");
  verdict.status = rep.passed() ? CheckStatus::Pass : CheckStatus::Fail;
  verdict.detail = rep.passed()
                       ? "the class presents a homogeneous structure for H (t-connectedness assumed)"
                       : "the class fails the correspondence conditions";
  return rep;
}

}  // namespace dgv
