#pragma once

// Synthetic source-localization scenes. A sparse non-negative image y is
// placed on the grid, each source gets convex weights alpha over the kernel
// dictionary, and the observation is
//
//   s = sum_k h_k (*) (alpha_k .* y) + noise,
//
// i.e. y blurred by a spatially varying PSF that stays inside the convex
// hull of the dictionary.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cgsc/types.hpp"

namespace cgsc {

enum class AlphaMode { SingleKernel, RandomConvex, SmoothField };

AlphaMode parse_alpha_mode(std::string_view name);
std::string_view alpha_mode_name(AlphaMode mode);

struct SceneSpec {
  std::size_t rows = 32;
  std::size_t cols = 32;
  std::size_t k_count = 3;
  std::size_t n_sources = 4;
  /// Minimum Chebyshev distance between sources, in pixels.
  std::size_t min_separation = 3;
  double amplitude_min = 1.0;
  double amplitude_max = 2.0;
  AlphaMode alpha_mode = AlphaMode::RandomConvex;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct Source {
  std::size_t row = 0;
  std::size_t col = 0;
  double amplitude = 0.0;
  friend bool operator==(const Source&, const Source&) = default;
};

struct GroundTruth {
  Image y;
  FeatureStack alphas;
  FeatureStack x_true;
  std::vector<Source> sources;
};

struct SynthInstance {
  Image s;
  Image w;
  GroundTruth truth;
};

/// Draw order from a single Rng(seed): smooth-field centers (SmoothField
/// only), source positions, amplitudes, per-source alpha draws, then one
/// noise sample per pixel in row-major order (skipped when sigma is 0).
/// Throws PlacementFailed if a source cannot be placed within the retry
/// budget.
SynthInstance generate(const SceneSpec& spec, const KernelDictionary& dict);

/// y = sum_k x_k and alpha_k = x_k / y where y > eps, 0 elsewhere.
struct YAlpha {
  Image y;
  FeatureStack alphas;
};
YAlpha reconstruct_y_alpha(const FeatureStack& x, double eps = 1e-12);

/// K anisotropic Gaussian PSFs of size `size` x `size`, major axes rotated
/// by pi/K between kernels (K = 1 gives an isotropic Gaussian). Not
/// normalized.
KernelDictionary gaussian_psf_bank(std::size_t k_count, std::size_t size);

}  // namespace cgsc
