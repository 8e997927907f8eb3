#pragma once

// The linear map A: {x_k} -> sum_k h_k (*) x_k with zero-padded same-size
// convolution, its weighted variant x -> w .* A x, and the adjoint of the
// weighted map built from matched filters.

#include <cstddef>
#include <cstdint>

#include "cgsc/types.hpp"

namespace cgsc {

/// o[r,c] = sum_{i,j} x[i,j] * h[r - i + a_row, c - j + a_col], entries of x
/// outside the image treated as zero. Output has the shape of x.
Image conv_same(const Kernel& h, const Image& x);

/// sum over k of conv_same(h_k, x_k), accumulated in ascending k.
Image forward(const KernelDictionary& dict, const FeatureStack& x);

/// Kernel reversed in both dimensions; anchor (a1, a2) maps to
/// (P1 - 1 - a1, P2 - 1 - a2).
Kernel matched_filter(const Kernel& h);

/// For each k, conv_same(matched_filter(h_k), w .* u). This is the adjoint of
/// v -> w .* forward(dict, v).
FeatureStack adjoint(const KernelDictionary& dict, const Image& w, const Image& u);

/// Rescales every kernel to 1-norm 1 / (K * max|w|^2) and records that
/// target in the returned dictionary.
KernelDictionary normalize_kernels(const KernelDictionary& dict, const Image& w);

struct OperatorNormEstimate {
  double value = 0.0;
  int iterations = 0;
  double tolerance = 0.0;
};

struct PowerIterationOptions {
  int iters = 100;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

/// Estimates the operator norm of x -> w .* forward(dict, x) by power
/// iteration on its normal operator, starting from a seeded Gaussian vector.
/// The domain shape is taken from w.
OperatorNormEstimate power_iteration(const KernelDictionary& dict, const Image& w,
                                     const PowerIterationOptions& options = {});

/// ||w .* (forward(dict, x) - s)||_2^2
double weighted_residual_sq(const Problem& p, const FeatureStack& x);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace cgsc
