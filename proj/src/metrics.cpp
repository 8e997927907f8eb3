#include "cgsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "cgsc/error.hpp"

namespace cgsc {

namespace {

std::size_t chebyshev(const Source& a, const Source& b) {
  const std::size_t dr = a.row > b.row ? a.row - b.row : b.row - a.row;
  const std::size_t dc = a.col > b.col ? a.col - b.col : b.col - a.col;
  return std::max(dr, dc);
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

std::vector<bool> support(const FeatureStack& x) {
  double peak = 0.0;
  for (double v : x.data()) peak = std::max(peak, std::abs(v));
  const double cut = 1e-6 * peak;
  std::vector<bool> supp(x.size(), false);
  if (peak == 0.0) return supp;
  for (std::size_t idx = 0; idx < x.size(); ++idx) supp[idx] = std::abs(x.data()[idx]) > cut;
  return supp;
}

}  // namespace

std::vector<Source> detect_sources(const Image& y_hat, double threshold, std::size_t min_separation) {
  const std::size_t m = y_hat.rows(), n = y_hat.cols();
  std::vector<Source> candidates;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = y_hat(i, j);
      if (!(v > threshold)) continue;
      bool is_max = true;
      for (std::size_t ii = (i == 0 ? 0 : i - 1); ii <= std::min(i + 1, m - 1) && is_max; ++ii)
        for (std::size_t jj = (j == 0 ? 0 : j - 1); jj <= std::min(j + 1, n - 1); ++jj)
          if (y_hat(ii, jj) > v) {
            is_max = false;
            break;
          }
      if (is_max) candidates.push_back({i, j, v});
    }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Source& a, const Source& b) {
    if (a.amplitude != b.amplitude) return a.amplitude > b.amplitude;
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  std::vector<Source> accepted;
  for (const auto& c : candidates) {
    const bool clear = std::none_of(accepted.begin(), accepted.end(), [&](const Source& a) {
      return chebyshev(a, c) < min_separation;
    });
    if (clear) accepted.push_back(c);
  }
  return accepted;
}

LocalizationReport match_and_score(const std::vector<Source>& detected,
                                   const std::vector<Source>& truth, std::size_t radius) {
  struct Pair {
    std::size_t dist, det, tru;
  };
  std::vector<Pair> pairs;
  for (std::size_t d = 0; d < detected.size(); ++d)
    for (std::size_t t = 0; t < truth.size(); ++t) {
      const std::size_t dist = chebyshev(detected[d], truth[t]);
      if (dist <= radius) pairs.push_back({dist, d, t});
    }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    const Source& da = detected[a.det];
    const Source& db = detected[b.det];
    const Source& ta = truth[a.tru];
    const Source& tb = truth[b.tru];
    return std::tie(a.dist, da.row, da.col, ta.row, ta.col) <
           std::tie(b.dist, db.row, db.col, tb.row, tb.col);
  });

  std::vector<bool> det_used(detected.size(), false), truth_used(truth.size(), false);
  LocalizationReport rep;
  double dist_sum = 0.0;
  for (const auto& p : pairs) {
    if (det_used[p.det] || truth_used[p.tru]) continue;
    det_used[p.det] = truth_used[p.tru] = true;
    ++rep.true_positives;
    dist_sum += static_cast<double>(p.dist);
  }
  rep.false_positives = detected.size() - rep.true_positives;
  rep.false_negatives = truth.size() - rep.true_positives;
  const auto tp = static_cast<double>(rep.true_positives);
  rep.precision = safe_ratio(tp, tp + static_cast<double>(rep.false_positives));
  rep.recall = safe_ratio(tp, tp + static_cast<double>(rep.false_negatives));
  rep.f1 = safe_ratio(2.0 * rep.precision * rep.recall, rep.precision + rep.recall);
  rep.mean_match_distance = safe_ratio(dist_sum, tp);
  return rep;
}

ReconError recon_error(const FeatureStack& x_hat, const FeatureStack& x_true) {
  if (!x_hat.same_shape(x_true))
    fail(ErrorCode::ShapeMismatch, "x_hat and x_true have different shapes");
  double diff_sq = 0.0, true_sq = 0.0;
  for (std::size_t idx = 0; idx < x_hat.size(); ++idx) {
    const double d = x_hat.data()[idx] - x_true.data()[idx];
    diff_sq += d * d;
    true_sq += x_true.data()[idx] * x_true.data()[idx];
  }
  ReconError err;
  err.rel_l2 = std::sqrt(diff_sq) / std::max(std::sqrt(true_sq), std::numeric_limits<double>::min());

  const auto a = support(x_hat), b = support(x_true);
  std::size_t inter = 0, uni = 0;
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    inter += a[idx] && b[idx];
    uni += a[idx] || b[idx];
  }
  err.support_iou = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  return err;
}

}  // namespace cgsc
