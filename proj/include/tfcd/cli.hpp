#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfcd/meshes.hpp"
#include "tfcd/verification.hpp"

namespace tfcd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPropertyFail = 2;

/// Environment variable holding the default thread count.
inline constexpr const char* kThreadsEnv = "TFCD_THREADS";

enum class Workflow { solve, convergence, check };

struct RunConfig {
  Workflow workflow = Workflow::solve;
  std::string problem = "singular";
  Coefficients coeffs;
  double alpha = 0.5;
  double theta = 4.0;
  int Nt = 64;
  /// 0 means Nt (or half of Nt when the split time is below Tf).
  int Nhat = 0;
  /// 0 means Tf.
  double split_time = 0.0;
  double Tf = 1.0;
  double L = 1.0;
  int Mx = 32;
  int My = 32;
  Axis axis = Axis::temporal;
  std::vector<int> levels;
  std::vector<int> save_levels;
  double tolerance = 0.25;
  std::string out;
  int threads = 1;
  std::uint64_t seed = 20240607;
  int inequality_meshes = 1000;
  int rho_samples = 10000;
  int stability_samples = 50;
};

/// Bad flags, bad config keys or values that violate a module invariant.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by parse_config for --help; what() is the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `tfcd <solve|convergence|check> [flags]`. Flags override values read
/// from --config. Throws UsageError or HelpRequested.
RunConfig parse_config(int argc, const char* const* argv);

/// Temporal mesh described by the config.
TemporalMesh temporal_mesh(const RunConfig& config);

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_convergence(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses, dispatches and maps failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tfcd::cli
