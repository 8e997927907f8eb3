#include "cgsc/synthgen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cgsc/conv_op.hpp"
#include "cgsc/error.hpp"
#include "cgsc/random.hpp"

namespace cgsc {

namespace {

constexpr int kPlacementRetries = 10000;

std::size_t chebyshev(std::size_t r1, std::size_t c1, std::size_t r2, std::size_t c2) {
  const std::size_t dr = r1 > r2 ? r1 - r2 : r2 - r1;
  const std::size_t dc = c1 > c2 ? c1 - c2 : c2 - c1;
  return dr > dc ? dr : dc;
}

void check_spec(const SceneSpec& spec, const KernelDictionary& dict) {
  if (spec.rows == 0 || spec.cols == 0 || spec.k_count == 0)
    fail(ErrorCode::InvalidArgument, "scene dimensions must be positive");
  if (dict.size() != spec.k_count)
    fail(ErrorCode::DimensionMismatch, "scene K=" + std::to_string(spec.k_count) +
                                           " but dictionary has " + std::to_string(dict.size()));
  if (!dict.norm_target) fail(ErrorCode::NotNormalized, "synthgen needs a normalized dictionary");
  if (!(spec.amplitude_min > 0.0) || !(spec.amplitude_max >= spec.amplitude_min))
    fail(ErrorCode::InvalidArgument, "amplitude range must be positive with min <= max");
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma))
    fail(ErrorCode::InvalidArgument, "noise_sigma must be a finite non-negative number");
}

}  // namespace

AlphaMode parse_alpha_mode(std::string_view name) {
  if (name == "single_kernel") return AlphaMode::SingleKernel;
  if (name == "random_convex") return AlphaMode::RandomConvex;
  if (name == "smooth_field") return AlphaMode::SmoothField;
  fail(ErrorCode::InvalidArgument, "unknown alpha_mode '" + std::string(name) + "'");
}

std::string_view alpha_mode_name(AlphaMode mode) {
  switch (mode) {
    case AlphaMode::SingleKernel: return "single_kernel";
    case AlphaMode::RandomConvex: return "random_convex";
    case AlphaMode::SmoothField: return "smooth_field";
  }
  return "unknown";
}

SynthInstance generate(const SceneSpec& spec, const KernelDictionary& dict) {
  check_spec(spec, dict);
  const std::size_t m = spec.rows, n = spec.cols, K = spec.k_count;
  Rng rng(spec.seed);

  // Smooth fields: f_k(i,j) = 0.1 + exp(-|(i,j) - c_k|^2 / (2 sigma^2)).
  std::vector<double> center_r, center_c;
  const double field_sigma = 0.35 * static_cast<double>(std::max(m, n));
  if (spec.alpha_mode == AlphaMode::SmoothField) {
    for (std::size_t k = 0; k < K; ++k) {
      center_r.push_back(rng.uniform(0.0, static_cast<double>(m)));
      center_c.push_back(rng.uniform(0.0, static_cast<double>(n)));
    }
  }

  std::vector<Source> sources;
  sources.reserve(spec.n_sources);
  for (std::size_t s = 0; s < spec.n_sources; ++s) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementRetries && !placed; ++attempt) {
      const std::size_t r = rng.below(m), c = rng.below(n);
      bool ok = true;
      for (const auto& other : sources) {
        const std::size_t d = chebyshev(r, c, other.row, other.col);
        if (d == 0 || d < spec.min_separation) {
          ok = false;
          break;
        }
      }
      if (ok) {
        sources.push_back({r, c, 0.0});
        placed = true;
      }
    }
    if (!placed)
      fail(ErrorCode::PlacementFailed, "could not place source " + std::to_string(s + 1) + " of " +
                                           std::to_string(spec.n_sources) +
                                           " with min_separation " +
                                           std::to_string(spec.min_separation));
  }
  for (auto& src : sources) src.amplitude = rng.uniform(spec.amplitude_min, spec.amplitude_max);

  GroundTruth truth{Image(m, n), FeatureStack(K, m, n), FeatureStack(K, m, n), sources};
  std::vector<double> alpha(K);
  for (const auto& src : sources) {
    switch (spec.alpha_mode) {
      case AlphaMode::SingleKernel: {
        std::fill(alpha.begin(), alpha.end(), 0.0);
        alpha[rng.below(K)] = 1.0;
        break;
      }
      case AlphaMode::RandomConvex: {
        // Normalized unit exponentials are uniform on the simplex.
        double total = 0.0;
        for (double& a : alpha) {
          a = -std::log(1.0 - rng.uniform());
          total += a;
        }
        if (total > 0.0) {
          for (double& a : alpha) a /= total;
        } else {
          std::fill(alpha.begin(), alpha.end(), 1.0 / static_cast<double>(K));
        }
        break;
      }
      case AlphaMode::SmoothField: {
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          const double dr = static_cast<double>(src.row) - center_r[k];
          const double dc = static_cast<double>(src.col) - center_c[k];
          alpha[k] = 0.1 + std::exp(-(dr * dr + dc * dc) / (2.0 * field_sigma * field_sigma));
          total += alpha[k];
        }
        for (double& a : alpha) a /= total;
        break;
      }
    }
    truth.y(src.row, src.col) = src.amplitude;
    for (std::size_t k = 0; k < K; ++k) {
      truth.alphas(k, src.row, src.col) = alpha[k];
      truth.x_true(k, src.row, src.col) = alpha[k] * src.amplitude;
    }
  }

  Image s = forward(dict, truth.x_true);
  if (spec.noise_sigma > 0.0)
    for (double& v : s.data()) v += spec.noise_sigma * rng.normal();

  return SynthInstance{std::move(s), ones_like(m, n), std::move(truth)};
}

YAlpha reconstruct_y_alpha(const FeatureStack& x, double eps) {
  const std::size_t K = x.k_count(), m = x.rows(), n = x.cols();
  YAlpha out{Image(m, n), FeatureStack(K, m, n)};
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t idx = 0; idx < m * n; ++idx) out.y.data()[idx] += x.map(k)[idx];
  for (std::size_t idx = 0; idx < m * n; ++idx) {
    const double y = out.y.data()[idx];
    if (!(y > eps)) continue;
    for (std::size_t k = 0; k < K; ++k) out.alphas.map(k)[idx] = x.map(k)[idx] / y;
  }
  return out;
}

KernelDictionary gaussian_psf_bank(std::size_t k_count, std::size_t size) {
  if (k_count == 0 || size == 0) fail(ErrorCode::InvalidArgument, "PSF bank needs K >= 1 and size >= 1");
  const double major = 0.30 * static_cast<double>(size);
  const double minor = k_count == 1 ? major : 0.13 * static_cast<double>(size);
  const double center = (static_cast<double>(size) - 1.0) / 2.0;
  KernelDictionary dict;
  for (std::size_t k = 0; k < k_count; ++k) {
    const double angle = std::numbers::pi * static_cast<double>(k) / static_cast<double>(k_count);
    const double ca = std::cos(angle), sa = std::sin(angle);
    std::vector<double> data(size * size);
    for (std::size_t p = 0; p < size; ++p)
      for (std::size_t q = 0; q < size; ++q) {
        const double dr = static_cast<double>(p) - center, dc = static_cast<double>(q) - center;
        const double u = ca * dc + sa * dr;
        const double v = -sa * dc + ca * dr;
        data[p * size + q] = std::exp(-0.5 * (u * u / (major * major) + v * v / (minor * minor)));
      }
    dict.kernels.emplace_back(size, size, std::move(data));
  }
  return dict;
}

}  // namespace cgsc
