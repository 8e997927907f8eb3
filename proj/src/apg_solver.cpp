#include "cgsc/apg_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cgsc/conv_op.hpp"
#include "cgsc/error.hpp"
#include "cgsc/prox_group.hpp"

namespace cgsc {

namespace {

void check_config(const SolverConfig& cfg) {
  if (cfg.max_iters < 1) fail(ErrorCode::InvalidArgument, "max_iters must be >= 1");
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step))
    fail(ErrorCode::InvalidArgument, "step must be a positive finite number");
  if (!(cfg.rel_tol >= 0.0)) fail(ErrorCode::InvalidArgument, "rel_tol must be >= 0");
  if (cfg.trace_every < 1) fail(ErrorCode::InvalidArgument, "trace_every must be >= 1");
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

}  // namespace

ObjectiveValue objective(const Problem& p, const FeatureStack& x) {
  ObjectiveValue v;
  v.fidelity = weighted_residual_sq(p, x);
  v.regularizer = regularizer_value(p.groups, x, p.lambda);
  v.total = v.fidelity + v.regularizer;
  return v;
}

FeatureStack fidelity_gradient(const Problem& p, const FeatureStack& x) {
  Image r = forward(p.dict, x);
  if (!r.same_shape(p.s)) fail(ErrorCode::DimensionMismatch, "feature maps and s shapes differ");
  for (std::size_t idx = 0; idx < r.size(); ++idx)
    r.data()[idx] = p.w.data()[idx] * (r.data()[idx] - p.s.data()[idx]);
  FeatureStack g = adjoint(p.dict, p.w, r);
  for (double& v : g.data()) v *= 2.0;
  return g;
}

SolveResult apg_solve(const Problem& p, const SolverConfig& cfg,
                      const std::optional<FeatureStack>& x0) {
  validate_problem(p);
  check_config(cfg);
  if (!p.dict.norm_target)
    fail(ErrorCode::NotNormalized, "kernel dictionary has not been normalized");

  SolveResult result;
  if (cfg.enforce_norm_bound) {
    const auto est = power_iteration(p.dict, p.w);
    result.operator_norm = est.value;
    if (est.value > 1.0 + kNormBoundSlack)
      fail(ErrorCode::NormBoundViolated,
           "operator norm estimate " + std::to_string(est.value) + " exceeds 1");
  }

  const std::size_t K = p.dict.size(), m = p.s.rows(), n = p.s.cols();
  FeatureStack x_curr = x0 ? *x0 : FeatureStack(K, m, n);
  if (x_curr.k_count() != K || x_curr.rows() != m || x_curr.cols() != n)
    fail(ErrorCode::DimensionMismatch, "initial feature stack has the wrong shape");
  FeatureStack x_prev = x_curr;
  FeatureStack v(K, m, n);

  const ProxScaling scaling{cfg.step * p.lambda};
  double t = 1.0;
  double best = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= cfg.max_iters; ++it) {
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    const double beta = (t - 1.0) / t_next;
    for (std::size_t idx = 0; idx < v.size(); ++idx)
      v.data()[idx] = x_curr.data()[idx] + beta * (x_curr.data()[idx] - x_prev.data()[idx]);

    FeatureStack u = fidelity_gradient(p, v);
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
      u.data()[idx] = v.data()[idx] - cfg.step * u.data()[idx];
      if (cfg.project_before_prox) u.data()[idx] = std::max(u.data()[idx], 0.0);
    }
    FeatureStack x_next = prox_nonneg_group(p.groups, u, scaling);

    double diff_sq = 0.0;
    for (std::size_t idx = 0; idx < x_next.size(); ++idx) {
      const double d = x_next.data()[idx] - x_curr.data()[idx];
      diff_sq += d * d;
    }
    const double change = std::sqrt(diff_sq) / std::max(1.0, norm2(x_curr.data()));

    x_prev = std::move(x_curr);
    x_curr = std::move(x_next);
    t = t_next;
    result.iterations = it;
    result.converged = change <= cfg.rel_tol;

    const bool last = result.converged || it == cfg.max_iters;
    if (last || it % cfg.trace_every == 0) {
      const ObjectiveValue obj = objective(p, x_curr);
      best = std::min(best, obj.total);
      result.trace.records.push_back({it, obj.total, obj.fidelity, obj.regularizer, change, best});
    }
    if (result.converged) break;
  }
  result.x = std::move(x_curr);
  return result;
}

}  // namespace cgsc
