#pragma once

// Reference computations used only by tests. Each one evaluates a defining
// formula directly rather than going through the library's code path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "cgsc/apg_solver.hpp"
#include "cgsc/conv_op.hpp"
#include "cgsc/group_builder.hpp"
#include "cgsc/prox_group.hpp"
#include "cgsc/random.hpp"
#include "cgsc/types.hpp"

namespace cgsc::test {

/// Definition sum over all (output, input) pixel pairs:
/// o[r,c] = sum_{i,j} x[i,j] h[r - i + a1, c - j + a2] with h = 0 off-support.
inline Image naive_conv(const Kernel& h, const Image& x) {
  const auto m = static_cast<long>(x.rows()), n = static_cast<long>(x.cols());
  const auto a1 = static_cast<long>(h.anchor().row), a2 = static_cast<long>(h.anchor().col);
  Image out(x.rows(), x.cols());
  for (long r = 0; r < m; ++r)
    for (long c = 0; c < n; ++c) {
      double acc = 0.0;
      for (long i = 0; i < m; ++i)
        for (long j = 0; j < n; ++j) {
          const long p = r - i + a1, q = c - j + a2;
          if (p < 0 || q < 0 || p >= static_cast<long>(h.rows()) || q >= static_cast<long>(h.cols()))
            continue;
          acc += x(i, j) * h(p, q);
        }
      out(r, c) = acc;
    }
  return out;
}

inline Image naive_forward(const KernelDictionary& dict, const FeatureStack& x) {
  Image out(x.rows(), x.cols());
  for (std::size_t k = 0; k < dict.size(); ++k) {
    const Image part = naive_conv(dict.kernels[k], x.map_image(k));
    for (std::size_t idx = 0; idx < out.size(); ++idx) out.data()[idx] += part.data()[idx];
  }
  return out;
}

/// s[r,c] = sum_{i,j} y[i,j] sum_k alpha_k[i,j] h_k[r - i + a1, c - j + a2],
/// the spatially-variant-PSF form of the observation model.
inline Image svpsf_forward(const KernelDictionary& dict, const Image& y, const FeatureStack& alphas) {
  const auto m = static_cast<long>(y.rows()), n = static_cast<long>(y.cols());
  Image out(y.rows(), y.cols());
  for (long r = 0; r < m; ++r)
    for (long c = 0; c < n; ++c) {
      double acc = 0.0;
      for (long i = 0; i < m; ++i)
        for (long j = 0; j < n; ++j) {
          if (y(i, j) == 0.0) continue;
          double psf = 0.0;
          for (std::size_t k = 0; k < dict.size(); ++k) {
            const Kernel& h = dict.kernels[k];
            const long p = r - i + static_cast<long>(h.anchor().row);
            const long q = c - j + static_cast<long>(h.anchor().col);
            if (p < 0 || q < 0 || p >= static_cast<long>(h.rows()) || q >= static_cast<long>(h.cols()))
              continue;
            psf += alphas(k, i, j) * h(p, q);
          }
          acc += y(i, j) * psf;
        }
      out(r, c) = acc;
    }
  return out;
}

/// Minimizes a convex f over the box [lo, hi] (per coordinate, lo >= 0) by
/// repeated 9-point-per-axis grid search, halving the box around the best
/// point each round.
inline double grid_refine_min(const std::function<double(const std::vector<double>&)>& f,
                              std::vector<double> center, std::vector<double> half_width,
                              int rounds, std::vector<double>* argmin = nullptr) {
  const std::size_t d = center.size();
  constexpr int kPts = 9;
  std::vector<double> best = center;
  double best_val = f(best);
  std::vector<double> z(d);
  for (int round = 0; round < rounds; ++round) {
    std::vector<int> idx(d, 0);
    std::vector<double> round_best = best;
    double round_val = best_val;
    while (true) {
      for (std::size_t a = 0; a < d; ++a) {
        const double h = half_width[a] / ((kPts - 1) / 2);
        z[a] = std::max(0.0, center[a] + (idx[a] - (kPts - 1) / 2) * h);
      }
      const double v = f(z);
      if (v < round_val) {
        round_val = v;
        round_best = z;
      }
      std::size_t a = 0;
      while (a < d && ++idx[a] == kPts) idx[a++] = 0;
      if (a == d) break;
    }
    best = round_best;
    best_val = round_val;
    center = best;
    for (auto& w : half_width) w *= 0.5;
  }
  if (argmin) *argmin = best;
  return best_val;
}

/// Value of (1/2)||z - x||^2 + theta * sum_g ||z_g||_2 on one group.
inline double group_prox_objective(const std::vector<double>& z, const std::vector<double>& x,
                                   double theta) {
  double quad = 0.0, sq = 0.0;
  for (std::size_t a = 0; a < z.size(); ++a) {
    quad += 0.5 * (z[a] - x[a]) * (z[a] - x[a]);
    sq += z[a] * z[a];
  }
  return quad + theta * std::sqrt(sq);
}

/// Brute-force minimum of the group prox subproblem over z >= 0.
inline double group_prox_oracle(const std::vector<double>& x, double theta,
                                std::vector<double>* argmin = nullptr) {
  double span = 0.0;
  for (double v : x) span = std::max(span, std::max(v, 0.0));
  std::vector<double> center(x.size(), span / 2.0), half(x.size(), span / 2.0 + 0.25);
  return grid_refine_min([&](const std::vector<double>& z) { return group_prox_objective(z, x, theta); },
                         center, half, 40, argmin);
}

/// Plain proximal gradient (no momentum) with the same step, gradient and
/// prox as the accelerated solver.
inline FeatureStack ista(const Problem& p, int iters, double step = 0.5) {
  FeatureStack x(p.dict.size(), p.s.rows(), p.s.cols());
  for (int it = 0; it < iters; ++it) {
    FeatureStack g = fidelity_gradient(p, x);
    for (std::size_t idx = 0; idx < x.size(); ++idx) g.data()[idx] = x.data()[idx] - step * g.data()[idx];
    x = prox_nonneg_group(p.groups, g, ProxScaling{step * p.lambda});
  }
  return x;
}

inline Kernel random_kernel(Rng& rng, std::size_t max_extent, bool non_negative, bool random_anchor) {
  const std::size_t p1 = 1 + rng.below(max_extent), p2 = 1 + rng.below(max_extent);
  std::vector<double> data(p1 * p2);
  for (double& v : data) v = non_negative ? rng.uniform() : rng.uniform(-1.0, 1.0);
  if (!random_anchor) return Kernel(p1, p2, std::move(data));
  return Kernel(p1, p2, std::move(data), Anchor{rng.below(p1), rng.below(p2)});
}

inline Image random_image(Rng& rng, std::size_t m, std::size_t n, double lo, double hi) {
  Image img(m, n);
  for (double& v : img.data()) v = rng.uniform(lo, hi);
  return img;
}

inline FeatureStack random_stack(Rng& rng, std::size_t K, std::size_t m, std::size_t n, double lo,
                                 double hi) {
  FeatureStack x(K, m, n);
  for (double& v : x.data()) v = rng.uniform(lo, hi);
  return x;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// The fixed instance shared by the l1-equivalence, KKT and rate checks:
/// 8x8, K = 2, 3x3 non-negative kernels, w in [0.25, 1] with max exactly 1,
/// singleton groups.
inline Problem l1_reference_problem() {
  Rng rng(20240611);
  Problem p;
  constexpr std::size_t m = 8, n = 8, K = 2;
  p.w = random_image(rng, m, n, 0.25, 1.0);
  p.w(0, 0) = 1.0;
  KernelDictionary raw;
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> data(9);
    for (double& v : data) v = rng.uniform(0.1, 1.0);
    raw.kernels.emplace_back(3, 3, std::move(data));
  }
  p.dict = normalize_kernels(raw, p.w);
  FeatureStack planted(K, m, n);
  planted(0, 2, 3) = 3.0;
  planted(1, 5, 5) = 2.0;
  planted(0, 6, 1) = 1.5;
  p.s = forward(p.dict, planted);
  for (double& v : p.s.data()) v += 0.02 * rng.normal();
  p.groups = singleton_groups(m, n, K);
  p.lambda = 0.05;
  return p;
}

}  // namespace cgsc::test
