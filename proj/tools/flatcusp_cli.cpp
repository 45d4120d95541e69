// Command-line driver: one subcommand per study, a flat key=value config,
// and JSON on stdout. Artifacts land under --out (default ./out).

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "flatcusp/commands.hpp"
#include "flatcusp/config.hpp"

namespace {

struct Cli {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = -1;
  bool reduced = false;
  bool extended = false;
  bool compare = false;
  std::vector<std::string> overrides;
};

void apply(flatcusp::Config& cfg, const Cli& cli) {
  for (const std::string& kv : cli.overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    if (!cfg.has(key)) throw std::runtime_error("--set: unknown config key '" + key + "'");
    cfg.set(key, kv.substr(eq + 1));
  }
  if (cli.seed_set) cfg.set("run.seed", static_cast<std::int64_t>(cli.seed));
  if (cli.workers >= 0) cfg.set("run.workers", static_cast<std::int64_t>(cli.workers));
  if (!cli.out_dir.empty()) cfg.set("run.out", cli.out_dir);
  if (cli.reduced) cfg.set("corner.engine", "reduced");
  if (cli.extended) cfg.set("corner.engine", "extended");
  if (cli.compare) cfg.set("corner.compare", "1");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"billiard with a cusp at a flat point: simulation studies"};
  app.require_subcommand(1);

  Cli cli;
  app.add_option("--config", cli.config_path, "config file (key = value lines)");
  auto* seed_opt = app.add_option("--seed", cli.seed, "override run.seed");
  app.add_option("--workers", cli.workers, "override run.workers (0 = all cores)");
  app.add_option("--out", cli.out_dir, "override run.out artifact directory");
  app.add_flag("--reduced", cli.reduced, "corner: use the reduced scalar recursion");
  app.add_flag("--extended-precision", cli.extended,
               "corner: run the exact route in 50-digit floats");
  app.add_flag("--compare", cli.compare, "corner: emit exact-vs-reduced deviation table");
  app.add_option("--set", cli.overrides, "override any config key (key=value)")
      ->take_all();

  // fallthrough() lets the shared options above appear after the subcommand,
  // e.g. `flatcusp table --out audit`.
  app.add_subcommand("table", "geometry audit of the billiard table")->fallthrough();
  app.add_subcommand("corner", "corner-series ensemble asymptotics")->fallthrough();
  app.add_subcommand("tail", "return-time and cell-measure tails")->fallthrough();
  app.add_subcommand("expansion", "expansion-factor law and one-step sum")->fallthrough();
  app.add_subcommand("transitions", "cell-to-cell transition statistics")->fallthrough();
  app.add_subcommand("correlations", "autocorrelation of a trig observable")->fallthrough();
  app.add_subcommand("all", "every study in sequence")->fallthrough();

  CLI11_PARSE(app, argc, argv);
  cli.seed_set = seed_opt->count() > 0;

  try {
    flatcusp::Config cfg = cli.config_path.empty()
                               ? flatcusp::Config()
                               : flatcusp::Config::from_file(cli.config_path);
    apply(cfg, cli);

    const std::string name = app.get_subcommands().front()->get_name();
    std::string report;
    if (name == "table")
      report = flatcusp::cmd_table(cfg);
    else if (name == "corner")
      report = flatcusp::cmd_corner(cfg);
    else if (name == "tail")
      report = flatcusp::cmd_tail(cfg);
    else if (name == "expansion")
      report = flatcusp::cmd_expansion(cfg);
    else if (name == "transitions")
      report = flatcusp::cmd_transitions(cfg);
    else if (name == "correlations")
      report = flatcusp::cmd_correlations(cfg);
    else
      report = flatcusp::cmd_all(cfg);
    std::cout << report;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
