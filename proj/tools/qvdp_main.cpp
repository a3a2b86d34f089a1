#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using qvdp::cli::Command;
using qvdp::cli::RunConfig;

struct Raw {
  std::vector<std::string> seeds;
  std::vector<std::string> grid;
  std::string format;
  double tol = 0.0;
};

void add_common(CLI::App* sub, RunConfig& cfg, Raw& raw) {
  sub->add_option("--mu", cfg.mu, "linear damping parameter")->capture_default_str();
  sub->add_option("--beta", cfg.beta, "linear stiffness (>= 0)")->capture_default_str();
  sub->add_option("--eps", cfg.eps, "cubic stiffness")->capture_default_str();
  sub->add_option("--alpha", cfg.alpha, "forcing amplitude")->capture_default_str();
  sub->add_option("--omega", cfg.omega, "forcing frequency")->capture_default_str();
  sub->add_option("--seed", raw.seeds, "initial state x,y (repeatable)");
  sub->add_option("--t0", cfg.t0, "start time")->capture_default_str();
  sub->add_option("--t1", cfg.t1, "end time")->capture_default_str();
  sub->add_option("--tol", raw.tol, "absolute and relative integration tolerance");
  sub->add_option("--out", cfg.out, "output path (stdout when omitted)");
  sub->add_option("--format", raw.format, "csv, json or svg");
  sub->add_option("--grid", raw.grid, "sweep axis AXIS:MIN:MAX:N (repeatable)");
  sub->add_flag("--disk", cfg.disk, "draw the Poincare disk projection");
  sub->add_option("--eps1", cfg.eps1, "quintic damping weight in the Melnikov integral")->capture_default_str();
  sub->add_option("--n", cfg.periods, "stroboscopic periods")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quintic van der Pol-Duffing bifurcation toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  Raw raw;
  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::Classify, "equilibria, critical curves and region label as JSON"},
      {Command::Portrait, "phase portrait trajectories as CSV or SVG"},
      {Command::Sweep, "region labels over a parameter grid as CSV"},
      {Command::Melnikov, "Melnikov function, closed form against quadrature"},
      {Command::Hopf, "Hopf normal form coefficients at E2"},
      {Command::Forced, "stroboscopic samples and attractor verdict of the forced system"},
      {Command::Repro, "all worked examples into one directory"},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [cmd, help] : commands) {
    auto* sub = app.add_subcommand(std::string(qvdp::cli::to_string(cmd)), help);
    add_common(sub, cfg, raw);
    subs.emplace_back(sub, cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& [sub, cmd] : subs) {
      if (sub->parsed()) cfg.command = cmd;
    }
    for (const auto& s : raw.seeds) cfg.seeds.push_back(qvdp::cli::parse_seed(s));
    for (const auto& g : raw.grid) cfg.grid.push_back(qvdp::cli::parse_grid(g));
    if (!raw.format.empty()) cfg.format = qvdp::cli::parse_format(raw.format);
    if (raw.tol != 0.0) cfg.tol = raw.tol;

    const auto result = qvdp::cli::run(cfg);
    qvdp::cli::emit(result);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qvdp::cli::exit_code_for(e);
  }
}
