#ifndef DGV_DOCUMENT_HPP
#define DGV_DOCUMENT_HPP

#include <map>
#include <string>

#include "dgv/homogeneous.hpp"

namespace dgv {

// A groupoid entry; pair groupoids built from a base frame remember
// their origin so the family isomorphisms can be dispatched.
struct GroupoidEntry {
  GroupoidDef def;
  std::string frame_name;       // Dirac frame living on the total chart
  bool is_pair = false;
  std::string pair_base_frame;  // for pair groupoids: the inducing frame
};

struct BisectionEntry {
  Bisection bisection;
  std::string groupoid;
};

struct SubgroupoidEntry {
  SubgroupoidData data;
  std::string groupoid;
};

struct UnitDiracEntry {
  UnitDirac ud;
  std::string groupoid;
};

// In-memory form of a verification document (version "1").
struct Document {
  std::map<std::string, Chart> charts;
  std::map<std::string, SmoothMap> maps;
  std::map<std::string, Bivector> bivectors;
  std::map<std::string, KForm> two_forms;
  std::map<std::string, DiracFrame> frames;
  std::map<std::string, GroupoidEntry> groupoids;
  std::map<std::string, BisectionEntry> bisections;
  std::map<std::string, SubgroupoidEntry> subgroupoids;
  std::map<std::string, UnitDiracEntry> unit_diracs;
  std::uint64_t seed = 7;
  int samples = 25;

  const GroupoidEntry& groupoid(const std::string& name) const;
  const DiracFrame& frame(const std::string& name) const;
  // resolves "" to the unique entry of the kind
  std::string only_groupoid(const std::string& requested) const;
  std::string only_frame(const std::string& requested) const;
};

Document load_document(const std::string& path);
Document parse_document(const std::string& json_text);

// The difference bivector pi (+) (-pi) on the pair groupoid chart.
Bivector pair_bivector(const Bivector& pi, const Chart& total);
// pr1^* omega - pr2^* omega on the pair groupoid chart.
KForm pair_two_form(const KForm& omega, const Chart& total);

}  // namespace dgv

#endif
