#include <CLI11.hpp>

#include <iostream>

#include <dgv/cli.hpp>

int main(int argc, char** argv) {
  CLI::App app{"exact verification of multiplicative Dirac structures on Lie groupoids"};
  app.require_subcommand(1);

  dgv::CliOptions opts;
  std::uint64_t seed = 0;
  int samples = 0;
  bool seed_set = false, samples_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", opts.input, "verification document (JSON)")->required();
    cmd->add_option("--seed", seed, "sampling seed")->each([&](const std::string&) {
      seed_set = true;
    });
    cmd->add_option("--samples", samples, "sample count")->each([&](const std::string&) {
      samples_set = true;
    });
    cmd->add_option("--json-out", opts.json_out, "write the report as JSON to this file");
    cmd->add_option("--groupoid", opts.groupoid, "groupoid name (default: the unique one)");
    cmd->add_option("--frame", opts.frame_sel, "Dirac frame name");
  };

  for (const char* name :
       {"verify-dirac", "verify-multiplicative", "units-algebroid", "cores", "base-dirac",
        "integrability", "build-b", "courant-axioms", "bisection-action", "classify"}) {
    CLI::App* cmd = app.add_subcommand(name);
    add_common(cmd);
    if (std::string(name) == "classify") {
      cmd->add_option("--subgroupoid", opts.subgroupoid, "wide subgroupoid name");
      cmd->add_option("--class", opts.unit_dirac, "unit Dirac class name");
    }
  }
  {
    CLI::App* cmd = app.add_subcommand("iso-check");
    add_common(cmd);
    cmd->add_option("family", opts.family, "poisson | presymplectic | pair")->required();
    cmd->add_option("--bivector", opts.bivector, "bivector name (poisson family)");
    cmd->add_option("--two-form", opts.two_form, "two-form name (presymplectic family)");
  }

  CLI11_PARSE(app, argc, argv);
  opts.command = app.get_subcommands().front()->get_name();
  if (seed_set) opts.seed = seed;
  if (samples_set) opts.samples = samples;
  return dgv::run_command(opts, std::cout);
}
