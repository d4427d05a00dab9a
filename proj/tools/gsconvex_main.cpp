#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "gsconvex/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gsconvex: certify or refute GS-exponential kind of convexity on sample grids"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out = "out";
  gsconvex::cli::RunOptions options;
  std::uint64_t seed = 0;

  const std::map<std::string, std::string> about{
      {"check", "sweep the defining inequality over the grid"},
      {"classes", "run the s-convex, sub-b-s-convex and exponential-kind checks too"},
      {"minimal-g", "smallest constant G per (m1, m2, s)"},
      {"epi", "epigraph characterization check"},
      {"bounds", "boundedness scan on an interval"},
      {"diff", "gradient-form margins"},
      {"minimize", "multi-start projected gradient descent"},
      {"certify", "sufficient-condition check at a candidate point"},
      {"oracle", "brute-force reference sweep, optional witness replay"},
  };
  for (const auto& name : gsconvex::cli::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "output directory for report.json and CSV tables");
    sub->add_option("--threads", options.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for random refinement and multi-start");
    sub->add_flag("--timings", options.timings, "record wall-clock timings in the report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gsconvex::cli::kInvalid;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed") > 0) options.seed = seed;
  return gsconvex::cli::run(chosen->get_name(), config, out, options, std::cerr);
}
