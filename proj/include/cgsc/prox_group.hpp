#pragma once

#include "cgsc/types.hpp"

namespace cgsc {

/// Threshold multiplying the inverse group norm in the shrinkage factor.
/// The solver passes step * lambda.
struct ProxScaling {
  double theta = 0.0;
};

/// lambda * sum over groups g of ||x restricted to g||_2. Ungrouped entries
/// contribute nothing.
double regularizer_value(const GroupPartition& groups, const FeatureStack& x, double lambda);

/// Proximal map of the non-negative group-sparsity regularizer.
///
/// With p = max(x, 0) and n_g the 2-norm of p over group g, members of g are
/// set to max(1 - theta / n_g, 0) * p (zero when n_g == 0) and ungrouped
/// entries are set to p. Two passes over the label volume: accumulate the
/// group norms, then scale.
FeatureStack prox_nonneg_group(const GroupPartition& groups, const FeatureStack& x,
                               ProxScaling scaling);

}  // namespace cgsc
