#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qvdp/model.hpp"

namespace qvdp::cli {

enum class Command { Classify, Portrait, Sweep, Melnikov, Hopf, Forced, Repro };
enum class Format { Csv, Json, Svg };

struct GridAxis {
  std::string name;  ///< mu, beta or eps
  double min;
  double max;
  int count;

  [[nodiscard]] double at(int i) const noexcept;
};

struct RunConfig {
  Command command = Command::Classify;
  double mu = 0.0;
  double beta = 1.0;
  double eps = 2.0;
  double alpha = 0.0;
  double omega = 1.0;
  double eps1 = 1.0;
  std::vector<State> seeds;
  double t0 = 0.0;
  double t1 = 50.0;
  std::optional<double> tol;  ///< per-command default when unset
  std::optional<std::string> out;
  std::optional<Format> format;
  std::vector<GridAxis> grid;
  bool disk = false;
  std::size_t periods = 2000;

  /// Throws Error{InvalidParams}.
  [[nodiscard]] Params params() const;
};

/// Bad flags or arguments; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Artifact {
  std::string path;  ///< empty for standard output
  std::string content;
};

struct CommandResult {
  std::vector<Artifact> artifacts;
  std::vector<std::string> warnings;
  int exit_code = 0;
};

[[nodiscard]] GridAxis parse_grid(std::string_view spec);
[[nodiscard]] State parse_seed(std::string_view spec);
[[nodiscard]] Format parse_format(std::string_view name);
[[nodiscard]] std::string_view to_string(Command c) noexcept;

[[nodiscard]] CommandResult cmd_classify(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_portrait(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_sweep(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_melnikov(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_hopf(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_forced(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_repro(const RunConfig& cfg);

[[nodiscard]] CommandResult run(const RunConfig& cfg);

/// Writes artifacts (creating parent directories) and prints stdout ones.
void emit(const CommandResult& result);

/// Maps exceptions onto exit codes: 2 for usage and parameter errors, 3 otherwise.
[[nodiscard]] int exit_code_for(const std::exception& e) noexcept;

}  // namespace qvdp::cli
