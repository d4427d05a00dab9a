#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsconvex::cli {

/// Exit codes of `gsconvex <subcommand>`.
enum ExitCode : int {
  kPass = 0,         // all checks pass / certificate holds
  kNegative = 1,     // valid run, negative verdict
  kInvalid = 2,      // configuration or evaluation error
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  int threads = 1;
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  bool timings = false;               // wall-clock timings make reports non-reproducible
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand against a JSON config, writing report.json and CSV
/// tables into `out_dir`. Diagnostics go to `err`.
int run(const std::string& subcommand, const std::filesystem::path& config_path,
        const std::filesystem::path& out_dir, const RunOptions& options, std::ostream& err);

/// Same, with the config given as text (used by the bindings and tests).
int run_text(const std::string& subcommand, const std::string& config_text,
             const std::filesystem::path& out_dir, const RunOptions& options, std::ostream& err);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& data);

}  // namespace gsconvex::cli
