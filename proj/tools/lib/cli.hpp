#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace mpm::cli {

enum class Command {
  GenFiltration,
  CheckStructure,
  VerifyIdentities,
  VerifyTheoremA,
  VerifyTheoremB,
  Brossard,
  PNorm,
  Search,
};

std::optional<Command> parse_command(std::string_view name);
std::string command_name(Command command);

enum class Format { Json, Csv };

struct RunConfig {
  Command command = Command::CheckStructure;
  std::string filtration;  // path or constructor spec
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<double> tol;
  std::optional<std::filesystem::path> constants;
  std::optional<std::filesystem::path> out;
  Format format = Format::Json;
  std::optional<double> lambda;           // brossard
  std::optional<double> lambda_quantile;  // brossard, alternative to lambda
  std::optional<double> p;                // pnorm, search
  std::optional<std::size_t> budget;      // search
  std::optional<double> constant;         // verify-theorem-a override
  std::string objective;                  // search: theorem_a | theorem_b | pnorm
  std::size_t threads = 1;                // never affects report contents
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitConfig = 2;

/// Frozen report schema version, embedded in every report.
std::string report_schema_version();

/// Readers accept reports whose major version matches theirs.
bool schema_compatible(std::string_view version);

/// Executes one command. The report goes to config.out (written atomically)
/// or to `out` when no path is set. Diagnostics go to `err`. Returns
/// kExitPass, kExitAssertion when a checked inequality or identity fails, or
/// kExitConfig for invalid input, in which case no report is written.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mpm::cli
