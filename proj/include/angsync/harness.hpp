#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "angsync/bounds.hpp"
#include "angsync/synth.hpp"

namespace angsync {

enum class Method { Er, Lsp, Sdp };

std::string toString(Method m);
Method methodFromString(const std::string& name);

/// Configuration of one experiment sweep. Empty sweep lists fall back to
/// per-sweep defaults: 25 log-spaced noise levels in [0.01, 180] degrees for
/// the noise sweep, a single 2 degree level for the dimension sweep, and the
/// four levels {0.01, 2, 40, 90} degrees for the band-width sweep.
struct ExperimentConfig {
  int d = 64;
  int delta = 16;
  WeightScheme scheme = WeightScheme::Unit;
  std::vector<Method> methods = {Method::Er, Method::Lsp, Method::Sdp};
  std::vector<double> alphas_deg;
  std::vector<int> dims;
  std::vector<int> deltas;
  int trials = 30;
  std::uint64_t seed = 1;
  double magnitude_noise_eps = 0.0;
};

/// 25 log-spaced noise half-widths from 0.01 to 180 degrees inclusive.
std::vector<double> defaultAlphas();

/// Aggregated sweep output: column names plus one row of cells per sweep
/// value. Cell 0 is the sweep variable; empty cells mark quantities that are
/// not applicable under the configuration (they become blank CSV fields).
struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
};

/// Index of a named column; throws std::out_of_range when absent.
std::size_t columnIndex(const SweepTable& table, const std::string& name);

/// Column layout shared by the noise and dimension sweeps, fixed by the
/// configuration alone: sweep variable, per-method mean distances, the
/// scheme's applicable bound means, mean semidefinite rank, mean sup norm of
/// the spectral estimate, then mean/min/max runtime per enabled method.
std::vector<std::string> sweepColumns(const ExperimentConfig& cfg,
                                      const std::string& sweep_name);

/// Means over `cfg.trials` instances per noise level. Per-instance seeds are
/// derived from (seed, noise-level bits, trial), so rows are reproducible
/// individually. Runtimes are medians of 3 repetitions, in seconds.
SweepTable runNoiseSweep(const ExperimentConfig& cfg);

/// Same aggregation per dimension at a fixed noise level, `cfg.delta` band.
SweepTable runDimSweep(const ExperimentConfig& cfg);

/// Mean spectral-estimate error and its magnitude-weighted bound per band
/// width, at each configured noise level. Always uses magnitude weights,
/// which is the scheme the reported bound is defined for.
SweepTable runDeltaSweep(const ExperimentConfig& cfg);

/// Serializes with 17 significant digits, comma separators, LF endings.
std::string toCsv(const SweepTable& table);

/// Writes toCsv(table) to `path`; throws std::runtime_error on I/O failure.
void emitCsv(const SweepTable& table, const std::string& path);

}  // namespace angsync
