#pragma once

// File-level workflows behind the `synth`, `solve`, `eval` and `norm-check`
// commands. All file names below are relative to the directory in `out`
// (outputs) or `data` (inputs) unless the individual key is given.
//
//   synth  writes s.cgt w.cgt x_true.cgt y.cgt alphas.cgt kernels.cgt sources.csv
//   solve  writes x_hat.cgt y_hat.cgt alpha_hat.cgt trace.csv
//   eval   writes eval.csv (or `report`)

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cgsc/apg_solver.hpp"
#include "cgsc/config.hpp"
#include "cgsc/conv_op.hpp"
#include "cgsc/group_builder.hpp"
#include "cgsc/metrics.hpp"
#include "cgsc/synthgen.hpp"

namespace cgsc {

struct SynthSummary {
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::size_t n_sources = 0;
};

struct SolveSummary {
  int iterations = 0;
  bool converged = false;
  ObjectiveValue final_objective;
  std::optional<double> operator_norm;
  std::filesystem::path out_dir;
};

struct EvalSummary {
  ReconError recon;
  LocalizationReport localization;
  double detect_threshold = 0.0;
  std::size_t detect_min_separation = 0;
  std::size_t match_radius = 0;
  std::filesystem::path report_path;
};

struct NormCheckSummary {
  OperatorNormEstimate estimate;
  bool normalized = false;
  std::optional<double> norm_target;
};

/// Resolves `seed` (drawing one from std::random_device when absent) and
/// writes the resolved value back into `cfg`.
SynthSummary cmd_synth(RunConfig& cfg);
SolveSummary cmd_solve(const RunConfig& cfg);
EvalSummary cmd_eval(const RunConfig& cfg);
NormCheckSummary cmd_norm_check(const RunConfig& cfg);

/// Parses `singleton`, `across-k`, `tiles:H,W` or `file:PATH`. For tiles the
/// kernel subsets come from `tile_subsets` ("1,2;3"), defaulting to one
/// subset holding every kernel.
GroupPartition build_groups(std::string_view spec, std::string_view tile_subsets,
                            std::size_t rows, std::size_t cols, std::size_t k_count);

/// Comma-separated list of kernel tensor files: one K x P1 x P2 file or
/// several P1 x P2 files.
KernelDictionary load_kernels(std::string_view paths);

void write_trace_csv(const std::filesystem::path& path, const SolveTrace& trace);
void write_sources_csv(const std::filesystem::path& path, const std::vector<Source>& sources);
std::vector<Source> read_sources_csv(const std::filesystem::path& path);

inline constexpr const char* kEvalCsvHeader =
    "rel_l2,support_iou,precision,recall,f1,mean_match_distance,"
    "detect_threshold,detect_min_separation,match_radius";

}  // namespace cgsc
