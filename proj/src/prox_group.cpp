#include "cgsc/prox_group.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cgsc/error.hpp"

namespace cgsc {

namespace {

void check_shapes(const GroupPartition& groups, const FeatureStack& x) {
  if (groups.rows() != x.rows() || groups.cols() != x.cols() || groups.k_count() != x.k_count())
    fail(ErrorCode::DimensionMismatch, "group partition and feature stack shapes differ");
}

// Sum of squares per group, accumulated in (row, col, k) scan order.
// `positive_part` selects between x and max(x, 0).
std::vector<double> group_sq_norms(const GroupPartition& groups, const FeatureStack& x,
                                   bool positive_part) {
  std::vector<double> sq(groups.group_count() + 1, 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      for (std::size_t k = 0; k < x.k_count(); ++k) {
        const auto g = static_cast<std::size_t>(groups.label(i, j, k));
        if (g == 0) continue;
        double v = x(k, i, j);
        if (positive_part) v = std::max(v, 0.0);
        sq[g] += v * v;
      }
  return sq;
}

}  // namespace

double regularizer_value(const GroupPartition& groups, const FeatureStack& x, double lambda) {
  check_shapes(groups, x);
  const auto sq = group_sq_norms(groups, x, false);
  double acc = 0.0;
  for (std::size_t g = 1; g < sq.size(); ++g) acc += std::sqrt(sq[g]);
  return lambda * acc;
}

FeatureStack prox_nonneg_group(const GroupPartition& groups, const FeatureStack& x,
                               ProxScaling scaling) {
  check_shapes(groups, x);
  if (!(scaling.theta >= 0.0)) fail(ErrorCode::InvalidArgument, "prox threshold must be >= 0");

  const auto sq = group_sq_norms(groups, x, true);
  std::vector<double> factor(sq.size(), 1.0);
  for (std::size_t g = 1; g < sq.size(); ++g) {
    const double norm = std::sqrt(sq[g]);
    factor[g] = norm > scaling.theta ? 1.0 - scaling.theta / norm : 0.0;
  }

  FeatureStack z(x.k_count(), x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      for (std::size_t k = 0; k < x.k_count(); ++k) {
        const auto g = static_cast<std::size_t>(groups.label(i, j, k));
        z(k, i, j) = factor[g] * std::max(x(k, i, j), 0.0);
      }
  return z;
}

}  // namespace cgsc
