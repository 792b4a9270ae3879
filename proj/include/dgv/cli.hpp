#ifndef DGV_CLI_HPP
#define DGV_CLI_HPP

#include <iosfwd>
#include <optional>

#include "dgv/document.hpp"

namespace dgv {

struct CliOptions {
  std::string command;
  std::string input;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::string json_out;
  std::string groupoid;   // selectors; empty = the unique one
  std::string frame_sel;
  std::string family;     // for iso-check: poisson | presymplectic | pair
  std::string bivector;
  std::string two_form;
  std::string subgroupoid;
  std::string unit_dirac;
};

// Runs one verification command against a document.  Exit codes:
//   0 all checks passed, 1 a check failed, 2 input error,
//   3 internal degeneracy (generic solve failure and friends).
int run_command(const CliOptions& opts, std::ostream& text_out);

}  // namespace dgv

#endif
