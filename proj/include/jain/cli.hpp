#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jain::cli {

/// Bad command line or invalid parameter values; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; carries the text to print. Maps to exit code 0.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand {
  kWeights,
  kIdentity,
  kSSeries,
  kMoments,
  kApply,
  kBounds,
  kVoronovskaya,
  kConverge,
  kStatconv,
  kReport,
};

enum class OutputFormat { kCsv, kJson };

std::string to_string(Subcommand cmd);
std::string to_string(OutputFormat fmt);

/// One fully parsed invocation. Empty lists mean "use the subcommand's
/// default grid"; defaults are resolved inside run() so a config
/// round-trips through JSON unchanged.
struct RunConfig {
  Subcommand cmd = Subcommand::kReport;
  std::vector<double> betas;
  std::vector<double> as;
  std::optional<double> beta_prime;
  std::optional<long> n;
  std::vector<long> n_ladder;
  std::vector<double> xs;
  std::vector<double> zs;
  std::vector<int> orders;
  std::string f_text;
  std::optional<std::pair<double, double>> interval;
  std::optional<double> lambda;
  std::optional<double> eps;
  std::vector<long> horizons;
  std::optional<double> tol;
  std::string out_path;
  OutputFormat format = OutputFormat::kCsv;
  std::string trace_out;

  bool operator==(const RunConfig&) const = default;
};

/// Parses an argv list (without the program name). Throws UsageError on
/// unknown flags, malformed values, or parameter values outside their
/// mathematical domain.
RunConfig parse_args(const std::vector<std::string>& args);

/// JSON round-trip for RunConfig.
std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);

/// Executes the experiment. Returns 0 on success, 1 when an invariant or
/// domination verdict failed during the run. TruncationError propagates
/// (exit 3); UsageError/DomainError propagate (exit 2). Output files are
/// only written after the run completes, so failures leave no partial
/// files.
int run(const RunConfig& config);

/// --help text of the full app, for documentation tests.
std::string help_text();

}  // namespace jain::cli
