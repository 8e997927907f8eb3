#pragma once

#include <cstddef>
#include <vector>

#include "cgsc/synthgen.hpp"
#include "cgsc/types.hpp"

namespace cgsc {

struct LocalizationReport {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mean_match_distance = 0.0;
};

/// 8-neighbourhood local maxima of y_hat strictly above `threshold`, taken
/// greedily by descending value (ties broken by (row, col)); a candidate is
/// dropped if it lies at Chebyshev distance < min_separation from an
/// accepted detection.
std::vector<Source> detect_sources(const Image& y_hat, double threshold, std::size_t min_separation);

/// Greedy matching within Chebyshev `radius`: candidate pairs are taken in
/// ascending distance, ties broken by detection then truth coordinates, each
/// source used at most once. Not an optimal assignment.
LocalizationReport match_and_score(const std::vector<Source>& detected,
                                   const std::vector<Source>& truth, std::size_t radius);

struct ReconError {
  double rel_l2 = 0.0;
  double support_iou = 0.0;
};

/// Support of a stack: entries above 1e-6 times its own largest entry.
ReconError recon_error(const FeatureStack& x_hat, const FeatureStack& x_true);

}  // namespace cgsc
