#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flagcurv/flag_curvature.hpp"
#include "flagcurv/minkowski_randers.hpp"

namespace flagcurv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFail = 1;
inline constexpr int kExitInvalidInput = 2;

enum class Mode { Convert, Eval, Curvature, ScalarCheck, Verify, Presets };
enum class Format { Json, Csv };

/// Throws ConfigError for unknown names.
Mode parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

struct Tolerances {
  /// |K_closed - K_oracle|, absolute.
  double oracle = 1e-5;
  /// Closed form vs closed form, relative to max(1, |K|).
  double consistency = 1e-10;
  double scalar = kScalarFlagTol;
};

struct EvalRequest {
  Vec v;
  /// Up to three vectors: g_v(a, b) needs two, C_v(a, b, c) three.
  std::vector<Vec> vectors;
};

struct RunConfig {
  Mode mode = Mode::Curvature;
  std::optional<ZermeloData> zermelo;
  std::optional<RandersData> randers;
  /// Preset spec, "name" or "name{p1,...}".
  std::string immersion;
  int samples = 100;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  /// Compare against the spray oracle in curvature mode (always on in verify).
  bool oracle = true;
  /// scalar-check: number of flagpoles, and an optional fixed chart point.
  int flagpoles = 8;
  std::optional<Vec> point;
  std::optional<EvalRequest> eval;
  std::string out_path;
  Format format = Format::Json;

  /// Zermelo data of whichever parametrization was given.
  ZermeloData zermelo_data() const;
};

/// Parses a JSON config document; `mode` decides which fields are required.
/// Throws GeometryError(ConfigError) naming the offending field or line.
RunConfig parse_config(const std::string& text, Mode mode);

/// Validates fields that command-line overrides may have changed.
void validate(const RunConfig& cfg);

struct RunResult {
  int exit_code = kExitOk;
  std::string report;
};

/// Evaluation threads: FLAG_TOOL_THREADS if set and positive, else hardware
/// concurrency.
int thread_count();

RunResult run(const RunConfig& cfg);

/// Full command line: `<tool> <mode> --config <path> [--out <path>]
/// [--format json|csv] [--seed N] [--samples M]`.
int run_command_line(int argc, char** argv);

}  // namespace flagcurv::cli
