#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace semisep::cli {

enum class Format { Json, Csv };

struct RunConfig {
  std::string command;  // solve, price-law, compare, adversary, verify, bundle-solve, sweep
  std::string input_path;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  int grid = 200;
  std::size_t samples = 100000;
  Format format = Format::Json;
  std::optional<std::string> output_path;

  // sweep only
  std::size_t sweep_item = 0;
  std::string sweep_bound = "lower";
  std::optional<double> sweep_from;
  std::optional<double> sweep_to;
  int sweep_points = 50;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitVerifyFailed = 2;

/// Runs one command. Artifacts go to `out` unless config.output_path is set;
/// diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and calls run().
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semisep::cli
