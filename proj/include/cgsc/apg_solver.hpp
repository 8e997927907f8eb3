#pragma once

// Accelerated proximal gradient (FISTA) for
//
//   min_{x >= 0}  ||w .* (sum_k h_k (*) x_k - s)||_2^2 + lambda * sum_g ||x_g||_2
//
// The fidelity gradient is 2 A^T (w .* w .* (A x - s)); with kernels
// normalized so that ||w .* A|| <= 1 its Lipschitz constant is at most 2,
// which gives the default step of 1/2.

#include <optional>
#include <vector>

#include "cgsc/types.hpp"

namespace cgsc {

struct SolverConfig {
  int max_iters = 2000;
  double rel_tol = 1e-8;
  double step = 0.5;
  /// Run power_iteration before solving and refuse if the estimate exceeds
  /// 1 + 1e-6.
  bool enforce_norm_bound = true;
  /// Record every n-th iteration (the final iteration is always recorded).
  int trace_every = 1;
  /// Clamp the gradient-step output to x >= 0 before the prox. The prox
  /// projects first anyway, so both settings give identical iterates.
  bool project_before_prox = false;
};

struct ObjectiveValue {
  double total = 0.0;
  double fidelity = 0.0;
  double regularizer = 0.0;
};

struct TraceRecord {
  int iter = 0;
  double objective = 0.0;
  double fidelity = 0.0;
  double regularizer = 0.0;
  double iterate_change = 0.0;
  /// Smallest objective recorded so far (non-increasing).
  double best_objective = 0.0;
};

struct SolveTrace {
  std::vector<TraceRecord> records;
};

struct SolveResult {
  FeatureStack x;
  SolveTrace trace;
  int iterations = 0;
  bool converged = false;
  /// Operator-norm estimate when enforce_norm_bound was set.
  std::optional<double> operator_norm;
};

inline constexpr double kNormBoundSlack = 1e-6;

ObjectiveValue objective(const Problem& p, const FeatureStack& x);

/// 2 * adjoint(dict, w, w .* (forward(dict, x) - s)), the gradient of the
/// weighted fidelity term.
FeatureStack fidelity_gradient(const Problem& p, const FeatureStack& x);

/// Solves from x0 (zero stack when absent). Requires a normalized
/// dictionary; throws NotNormalized or NormBoundViolated otherwise.
SolveResult apg_solve(const Problem& p, const SolverConfig& cfg,
                      const std::optional<FeatureStack>& x0 = std::nullopt);

}  // namespace cgsc
