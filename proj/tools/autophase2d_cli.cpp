// autophase2d: recover a real N x N signal from its 2D autocorrelation.
//
//   autophase2d solve --input R.json --output report.json
//   autophase2d census --n 3 --seed 42 --output census.csv
//   autophase2d probe --n 3 --alpha 1000
//
// Precedence: command-line flags, then --config JSON, then built-in defaults.

#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "autophase2d/cli.hpp"

namespace {

using autophase2d::cli::RunConfig;

struct Binding {
  CLI::Option* option;
  std::function<void(RunConfig&)> apply;
};

// Adds every flag to sub, writing into `flags`; `bindings` remembers how to
// copy an explicitly given flag onto the final config.
void add_flags(CLI::App* sub, RunConfig& flags, std::string& config_path, std::vector<Binding>& bindings) {
  auto bind = [&](CLI::Option* opt, std::function<void(RunConfig&)> apply) {
    bindings.push_back({opt, std::move(apply)});
  };
  sub->add_option("--config", config_path, "JSON config file (keys mirror the long flags)");
  bind(sub->add_option("--input", flags.input, "input JSON file"),
       [&](RunConfig& c) { c.input = flags.input; });
  bind(sub->add_option("--output", flags.output, "output path, '-' for standard output"),
       [&](RunConfig& c) { c.output = flags.output; });
  bind(sub->add_option("--n", flags.n, "matrix side"), [&](RunConfig& c) { c.n = flags.n; });
  bind(sub->add_option("--seed", flags.seed, "RNG seed"), [&](RunConfig& c) { c.seed = flags.seed; });
  bind(sub->add_option("--alpha", flags.alpha, "probe magnitude alpha"),
       [&](RunConfig& c) { c.alpha = flags.alpha; });
  bind(sub->add_option("--bound", flags.bound, "integer search bound"),
       [&](RunConfig& c) { c.bound = flags.bound; });
  bind(sub->add_option("--trials", flags.trials, "round-trip trial count"),
       [&](RunConfig& c) { c.trials = flags.trials; });
  bind(sub->add_option("--dft-size", flags.dft_size, "autocorr: emit an m x m |DFT|^2 grid instead"),
       [&](RunConfig& c) { c.dft_size = flags.dft_size; });
  bind(sub->add_option("--tol-root", flags.opts.tol_root, "root residual tolerance"),
       [&](RunConfig& c) { c.opts.tol_root = flags.opts.tol_root; });
  bind(sub->add_option("--tol-pair", flags.opts.tol_pair, "reflected-pair matching tolerance"),
       [&](RunConfig& c) { c.opts.tol_pair = flags.opts.tol_pair; });
  bind(sub->add_option("--tol-conj", flags.opts.tol_conj, "conjugate-pair matching tolerance"),
       [&](RunConfig& c) { c.opts.tol_conj = flags.opts.tol_conj; });
  bind(sub->add_option("--tol-resid", flags.opts.tol_resid, "candidate autocorrelation residual tolerance"),
       [&](RunConfig& c) { c.opts.tol_resid = flags.opts.tol_resid; });
  bind(sub->add_option("--tol-match", flags.opts.tol_match, "key-constraint matching tolerance"),
       [&](RunConfig& c) { c.opts.tol_match = flags.opts.tol_match; });
  bind(sub->add_flag("--secondary", flags.opts.secondary_constraints,
                     "break key-constraint ties with the remaining R(i,j) values"),
       [&](RunConfig& c) { c.opts.secondary_constraints = flags.opts.secondary_constraints; });
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = autophase2d::cli;

  CLI::App app{"Recover a real N x N signal from its 2D autocorrelation"};
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path;
  std::vector<Binding> bindings;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"autocorr", "matrix JSON -> 2D autocorrelation (or |DFT|^2 grid)"},
      {"reduce", "2D autocorrelation -> 1D autocorrelation and residual constraints"},
      {"solve", "2D autocorrelation or |DFT|^2 grid -> solve report"},
      {"enumerate", "1D (or 2D) autocorrelation -> all candidates"},
      {"census", "sorted key-constraint products as CSV"},
      {"probe", "large-alpha test point for the key-constraint difference"},
      {"oracle", "exhaustive integer search for small matrices"},
      {"roundtrip", "planted gaussian round trips"},
  };
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags, config_path, bindings);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << cli::error_line("InvalidConfig", e.what()) << '\n';
    return 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cli::apply_config_json(cfg, cli::read_json_file(config_path));
    cfg.command = app.get_subcommands().front()->get_name();
    for (const auto& b : bindings) {
      if (b.option->count() > 0) b.apply(cfg);
    }
    cfg.opts.threads = cli::threads_from_env(cfg.opts.threads);
  } catch (const autophase2d::Error& e) {
    std::cerr << cli::error_line(e.name(), e.detail()) << '\n';
    return 2;
  }
  return cli::run(cfg);
}
