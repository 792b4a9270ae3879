#include "dgv/document.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace dgv {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& msg) {
  throw Error(ErrorKind::Schema, msg);
}

std::vector<std::string> string_list(const json& j, const std::string& what) {
  if (!j.is_array()) schema_error(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) schema_error(what + " must contain strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

SmoothMap map_from(const json& j, const Chart& src, const Chart& tgt, const std::string& what) {
  if (!j.contains("components")) schema_error(what + " needs 'components'");
  return SmoothMap::from_strings(src, tgt, string_list(j["components"], what + ".components"));
}

PointP point_from(const json& j, const Chart& c, const std::string& what) {
  auto vals = string_list(j, what);
  if (static_cast<int>(vals.size()) != c.dim())
    schema_error(what + " has " + std::to_string(vals.size()) + " coordinates, chart " +
                 c.name + " needs " + std::to_string(c.dim()));
  PointP p{c, {}};
  for (const auto& v : vals) p.coords.push_back(Rational::from_string(v));
  return p;
}

}  // namespace

const GroupoidEntry& Document::groupoid(const std::string& name) const {
  auto it = groupoids.find(name);
  if (it == groupoids.end()) schema_error("unknown groupoid '" + name + "'");
  return it->second;
}

const DiracFrame& Document::frame(const std::string& name) const {
  auto it = frames.find(name);
  if (it == frames.end()) schema_error("unknown frame '" + name + "'");
  return it->second;
}

std::string Document::only_groupoid(const std::string& requested) const {
  if (!requested.empty()) {
    groupoid(requested);
    return requested;
  }
  if (groupoids.size() != 1)
    schema_error("document has " + std::to_string(groupoids.size()) +
                 " groupoids; select one with --groupoid");
  return groupoids.begin()->first;
}

std::string Document::only_frame(const std::string& requested) const {
  if (!requested.empty()) {
    frame(requested);
    return requested;
  }
  if (frames.size() != 1)
    schema_error("document has " + std::to_string(frames.size()) +
                 " frames; select one with --frame");
  return frames.begin()->first;
}

Bivector pair_bivector(const Bivector& pi, const Chart& total) {
  int d = pi.chart.dim();
  Bivector out = Bivector::zero(total);
  std::vector<RF> block1, block2;
  for (int i = 0; i < d; ++i) block1.push_back(RF::variable(2 * d, i));
  for (int i = 0; i < d; ++i) block2.push_back(RF::variable(2 * d, d + i));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      RF v = pi.entry(i, j);
      int r1 = i * (2 * d) - i * (i + 1) / 2 + (j - i - 1);
      out.upper[r1] = v.substitute(block1, 2 * d);
      int i2 = d + i, j2 = d + j;
      int r2 = i2 * (2 * d) - i2 * (i2 + 1) / 2 + (j2 - i2 - 1);
      out.upper[r2] = -v.substitute(block2, 2 * d);
    }
  return out;
}

KForm pair_two_form(const KForm& omega, const Chart& total) {
  int d = omega.chart().dim();
  SmoothMap pr1{total, omega.chart(), {}};
  SmoothMap pr2{total, omega.chart(), {}};
  for (int i = 0; i < d; ++i) pr1.components.push_back(RF::variable(2 * d, i));
  for (int i = 0; i < d; ++i) pr2.components.push_back(RF::variable(2 * d, d + i));
  return pullback_form(pr1, omega) - pullback_form(pr2, omega);
}

Document parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
  Document doc;
  if (!j.contains("version") || j["version"] != "1")
    schema_error("document version must be \"1\"");

  if (j.contains("sampling")) {
    const auto& s = j["sampling"];
    if (s.contains("seed")) doc.seed = s["seed"].get<std::uint64_t>();
    if (s.contains("samples")) doc.samples = s["samples"].get<int>();
  }

  for (const auto& jc : j.value("charts", json::array())) {
    Chart c{jc.at("name").get<std::string>(), string_list(jc.at("coords"), "chart coords")};
    for (size_t a = 0; a < c.coords.size(); ++a)
      for (size_t b = a + 1; b < c.coords.size(); ++b)
        if (c.coords[a] == c.coords[b])
          schema_error("chart " + c.name + " repeats coordinate '" + c.coords[a] + "'");
    doc.charts[c.name] = c;
  }
  auto chart_of = [&](const std::string& name) -> const Chart& {
    auto it = doc.charts.find(name);
    if (it == doc.charts.end()) schema_error("unknown chart '" + name + "'");
    return it->second;
  };

  for (const auto& jm : j.value("maps", json::array())) {
    std::string name = jm.at("name").get<std::string>();
    doc.maps.emplace(name, map_from(jm, chart_of(jm.at("source").get<std::string>()),
                                    chart_of(jm.at("target").get<std::string>()), name));
  }

  for (const auto& jb : j.value("bivectors", json::array())) {
    std::string name = jb.at("name").get<std::string>();
    const Chart& c = chart_of(jb.at("chart").get<std::string>());
    Bivector b = Bivector::zero(c);
    for (const auto& [key, val] : jb.at("entries").items()) {
      auto comma = key.find(',');
      if (comma == std::string::npos) schema_error("bivector entry key must be 'ci,cj'");
      int i = c.index_of(key.substr(0, comma));
      int k = c.index_of(key.substr(comma + 1));
      if (i >= k) schema_error("bivector entries use strictly increasing coordinate pairs");
      int rank = i * c.dim() - i * (i + 1) / 2 + (k - i - 1);
      b.upper[rank] = parse_expression(val.get<std::string>(), c.coords);
    }
    doc.bivectors.emplace(name, std::move(b));
  }

  for (const auto& jw : j.value("two_forms", json::array())) {
    std::string name = jw.at("name").get<std::string>();
    const Chart& c = chart_of(jw.at("chart").get<std::string>());
    KForm w(c, 2);
    for (const auto& [key, val] : jw.at("entries").items()) {
      auto comma = key.find(',');
      if (comma == std::string::npos) schema_error("two-form entry key must be 'ci,cj'");
      int i = c.index_of(key.substr(0, comma));
      int k = c.index_of(key.substr(comma + 1));
      if (i >= k) schema_error("two-form entries use strictly increasing coordinate pairs");
      w.set_coeff({i, k}, parse_expression(val.get<std::string>(), c.coords));
    }
    doc.two_forms.emplace(name, std::move(w));
  }

  for (const auto& jf : j.value("frames", json::array())) {
    std::string name = jf.at("name").get<std::string>();
    const Chart& c = chart_of(jf.at("chart").get<std::string>());
    PointP witness = jf.contains("witness")
                         ? point_from(jf["witness"], c, name + ".witness")
                         : PointP{c, std::vector<Rational>(c.dim(), Rational(1))};
    if (jf.contains("from_bivector")) {
      auto it = doc.bivectors.find(jf["from_bivector"].get<std::string>());
      if (it == doc.bivectors.end()) schema_error("unknown bivector in frame " + name);
      doc.frames.emplace(name, from_bivector(it->second, witness, name));
    } else if (jf.contains("from_two_form")) {
      auto it = doc.two_forms.find(jf["from_two_form"].get<std::string>());
      if (it == doc.two_forms.end()) schema_error("unknown two-form in frame " + name);
      doc.frames.emplace(name, from_two_form(it->second, witness, name));
    } else if (jf.contains("sections")) {
      DiracFrame f{c, {}, name, witness};
      for (const auto& js : jf["sections"]) {
        VectorField v = VectorField::from_strings(c, string_list(js.at("vector"), "section vector"));
        std::vector<RF> a;
        for (const auto& s : string_list(js.at("oneform"), "section oneform"))
          a.push_back(parse_expression(s, c.coords));
        f.sections.push_back(PSection(c, v, KForm::one_form(c, a)));
      }
      if (static_cast<int>(f.sections.size()) != c.dim())
        schema_error("frame " + name + " needs dim(chart) sections");
      doc.frames.emplace(name, std::move(f));
    } else {
      schema_error("frame " + name + " needs sections, from_bivector or from_two_form");
    }
  }

  for (const auto& jg : j.value("groupoids", json::array())) {
    std::string name = jg.at("name").get<std::string>();
    GroupoidEntry entry;
    if (jg.contains("pair_of_frame")) {
      std::string fname = jg["pair_of_frame"].get<std::string>();
      auto it = doc.frames.find(fname);
      if (it == doc.frames.end()) schema_error("unknown frame in groupoid " + name);
      PairDirac pd = pair_dirac(it->second);
      entry.def = std::move(pd.def);
      entry.def.name = name;
      entry.is_pair = true;
      entry.pair_base_frame = fname;
      entry.frame_name = fname + ".pair";
      doc.frames.emplace(entry.frame_name, std::move(pd.frame));
      // register the generated charts so two-forms etc. can reference them
      doc.charts[entry.def.total.name] = entry.def.total;
      doc.charts[entry.def.base.name] = entry.def.base;
    } else {
      const Chart& total = chart_of(jg.at("total").get<std::string>());
      const Chart& base = chart_of(jg.at("base").get<std::string>());
      const Chart& comp = chart_of(jg.at("composable").get<std::string>());
      entry.def.name = name;
      entry.def.total = total;
      entry.def.base = base;
      entry.def.composable = comp;
      entry.def.pair_chart = Chart{name + ".pairs", {}};
      auto pair_coords = string_list(jg.at("pair_coords"), name + ".pair_coords");
      if (static_cast<int>(pair_coords.size()) != 2 * total.dim())
        schema_error("pair_coords of " + name + " needs 2*dim(total) names");
      entry.def.pair_chart.coords = pair_coords;
      entry.def.src = map_from(jg.at("src"), total, base, name + ".src");
      entry.def.tgt = map_from(jg.at("tgt"), total, base, name + ".tgt");
      entry.def.unit = map_from(jg.at("unit"), base, total, name + ".unit");
      entry.def.inv = map_from(jg.at("inv"), total, total, name + ".inv");
      entry.def.pr1 = map_from(jg.at("pr1"), comp, total, name + ".pr1");
      entry.def.pr2 = map_from(jg.at("pr2"), comp, total, name + ".pr2");
      entry.def.mult = map_from(jg.at("mult"), comp, total, name + ".mult");
      entry.def.lift = map_from(jg.at("lift"), entry.def.pair_chart, comp, name + ".lift");
      if (jg.contains("frame")) entry.frame_name = jg["frame"].get<std::string>();
    }
    doc.groupoids.emplace(name, std::move(entry));
  }

  for (const auto& jb : j.value("bisections", json::array())) {
    BisectionEntry e;
    e.groupoid = jb.at("groupoid").get<std::string>();
    const GroupoidEntry& g = doc.groupoid(e.groupoid);
    e.bisection.name = jb.at("name").get<std::string>();
    e.bisection.map = map_from(jb, g.def.base, g.def.total, e.bisection.name);
    if (jb.contains("sk_inverse"))
      e.bisection.sk_inverse = SmoothMap::from_strings(
          g.def.base, g.def.base, string_list(jb["sk_inverse"], "sk_inverse"));
    doc.bisections.emplace(e.bisection.name, std::move(e));
  }

  for (const auto& js : j.value("subgroupoids", json::array())) {
    SubgroupoidEntry e;
    e.groupoid = js.at("groupoid").get<std::string>();
    const GroupoidEntry& g = doc.groupoid(e.groupoid);
    e.data.name = js.at("name").get<std::string>();
    for (const auto& col : js.value("ah", json::array())) {
      auto comps = string_list(col, "ah column");
      if (static_cast<int>(comps.size()) != g.def.n())
        schema_error("ah column of " + e.data.name + " needs dim(total) entries");
      RFVec v;
      for (const auto& s : comps) v.push_back(parse_expression(s, g.def.base.coords));
      e.data.ah_columns.push_back(std::move(v));
    }
    for (const auto& bn : js.value("bisections", json::array())) {
      auto it = doc.bisections.find(bn.get<std::string>());
      if (it == doc.bisections.end())
        schema_error("unknown bisection in subgroupoid " + e.data.name);
      e.data.generators.push_back(it->second.bisection);
    }
    doc.subgroupoids.emplace(e.data.name, std::move(e));
  }

  for (const auto& ju : j.value("unit_dirac", json::array())) {
    UnitDiracEntry e;
    e.groupoid = ju.at("groupoid").get<std::string>();
    const GroupoidEntry& g = doc.groupoid(e.groupoid);
    e.ud.name = ju.at("name").get<std::string>();
    for (const auto& js : ju.at("sections")) {
      RFVec v, a;
      for (const auto& s : string_list(js.at("vector"), "unit section vector"))
        v.push_back(parse_expression(s, g.def.base.coords));
      for (const auto& s : string_list(js.at("oneform"), "unit section oneform"))
        a.push_back(parse_expression(s, g.def.base.coords));
      if (static_cast<int>(v.size()) != g.def.n() || static_cast<int>(a.size()) != g.def.n())
        schema_error("unit section of " + e.ud.name + " needs dim(total) entries per slot");
      e.ud.sections.push_back(unit_section(g.def.base, std::move(v), std::move(a)));
    }
    e.ud.witness = ju.contains("witness")
                       ? point_from(ju["witness"], g.def.base, e.ud.name + ".witness")
                       : PointP{g.def.base, std::vector<Rational>(g.def.p(), Rational(1))};
    doc.unit_diracs.emplace(e.ud.name, std::move(e));
  }

  return doc;
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema_error("cannot open document '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

}  // namespace dgv
