#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinrestore/chain.hpp"

namespace spinrestore::cli {

enum class Command { scan_lambda, solve, restore_demo, ratio_table, negativity_profile };

std::string command_name(Command c);

/// Bad flags, malformed config files or invalid settings; exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// --help was requested; what() holds the help text. Exit code 0.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::solve;
    std::vector<int> n_values; // one entry except for scan-lambda
    int n_s = 2;
    int n_r = 2;
    int n_er = 3;
    std::optional<double> tau;
    std::optional<double> tau_max; // absolute; when unset a per-command multiple of N
    double tau_step = 0.25;
    int starts = 50;
    int n_states = 50;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir;

    Layout layout() const { return {n_values.front(), n_s, n_r, n_er}; }
    /// Resolved upper end of the time grid for chain length n.
    double tau_limit(int n) const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Parses argv (argv[0] is the program name). Flags override values read from
/// --config; a manifest.json written by `run` is accepted as a config file.
RunConfig parse_config(const std::vector<std::string>& args, const EnvLookup& env);
RunConfig parse_config(const std::vector<std::string>& args);

/// Parses "7", "5..12" or "5,7,9" into chain lengths.
std::vector<int> parse_n_values(const std::string& text);

/// Executes the command and writes its outputs plus manifest.json into
/// out_dir. Returns 0 on success, 2 on I/O failure, 3 when a required
/// restoring solution could not be found. Partial outputs are removed on failure.
int run(const RunConfig& config, std::ostream& console);

/// Full entry point used by the executable.
int main(int argc, char** argv);

} // namespace spinrestore::cli
