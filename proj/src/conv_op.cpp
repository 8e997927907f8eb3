#include "cgsc/conv_op.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cgsc/error.hpp"
#include "cgsc/parallel.hpp"
#include "cgsc/random.hpp"

namespace cgsc {

namespace {

void check_stack_matches(const KernelDictionary& dict, const FeatureStack& x) {
  if (dict.size() != x.k_count())
    fail(ErrorCode::DimensionMismatch, "dictionary has K=" + std::to_string(dict.size()) +
                                           " but feature stack has K=" +
                                           std::to_string(x.k_count()));
}

// Gather form: for each output pixel walk the kernel taps whose source
// pixel lands inside the image. Loop bounds are clipped up front.
void conv_same_into(const Kernel& h, std::span<const double> x, std::size_t rows,
                    std::size_t cols, std::span<double> out) {
  const auto a_row = static_cast<std::ptrdiff_t>(h.anchor().row);
  const auto a_col = static_cast<std::ptrdiff_t>(h.anchor().col);
  const auto p1 = static_cast<std::ptrdiff_t>(h.rows());
  const auto p2 = static_cast<std::ptrdiff_t>(h.cols());
  const auto m = static_cast<std::ptrdiff_t>(rows);
  const auto n = static_cast<std::ptrdiff_t>(cols);
  for (std::ptrdiff_t r = 0; r < m; ++r) {
    // source row i = r - p + a_row must lie in [0, m)
    const std::ptrdiff_t p_lo = std::max<std::ptrdiff_t>(0, r + a_row - m + 1);
    const std::ptrdiff_t p_hi = std::min<std::ptrdiff_t>(p1, r + a_row + 1);
    for (std::ptrdiff_t c = 0; c < n; ++c) {
      const std::ptrdiff_t q_lo = std::max<std::ptrdiff_t>(0, c + a_col - n + 1);
      const std::ptrdiff_t q_hi = std::min<std::ptrdiff_t>(p2, c + a_col + 1);
      double acc = 0.0;
      for (std::ptrdiff_t p = p_lo; p < p_hi; ++p) {
        const std::ptrdiff_t i = r - p + a_row;
        const double* xrow = x.data() + i * n;
        for (std::ptrdiff_t q = q_lo; q < q_hi; ++q) acc += h(p, q) * xrow[c - q + a_col];
      }
      out[r * n + c] = acc;
    }
  }
}

std::size_t conv_work(const KernelDictionary& dict, std::size_t pixels) {
  std::size_t taps = 0;
  for (const auto& h : dict.kernels) taps += h.rows() * h.cols();
  return taps * pixels;
}

}  // namespace

Image conv_same(const Kernel& h, const Image& x) {
  Image out(x.rows(), x.cols());
  conv_same_into(h, x.data(), x.rows(), x.cols(), out.data());
  return out;
}

Image forward(const KernelDictionary& dict, const FeatureStack& x) {
  check_stack_matches(dict, x);
  const std::size_t m = x.rows(), n = x.cols(), K = x.k_count();
  // Per-kernel partials are formed independently, then summed in ascending k
  // so the result does not depend on the thread count.
  std::vector<double> partial(K * m * n);
  parallel_for(K, conv_work(dict, m * n), [&](std::size_t k) {
    conv_same_into(dict.kernels[k], x.map(k), m, n, {partial.data() + k * m * n, m * n});
  });
  Image out(m, n);
  auto o = out.data();
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t idx = 0; idx < m * n; ++idx) o[idx] += partial[k * m * n + idx];
  return out;
}

Kernel matched_filter(const Kernel& h) {
  const std::size_t p1 = h.rows(), p2 = h.cols();
  std::vector<double> rev(h.data().rbegin(), h.data().rend());
  return Kernel(p1, p2, std::move(rev),
                Anchor{p1 - 1 - h.anchor().row, p2 - 1 - h.anchor().col});
}

FeatureStack adjoint(const KernelDictionary& dict, const Image& w, const Image& u) {
  if (!w.same_shape(u))
    fail(ErrorCode::DimensionMismatch, "adjoint: w and u shapes differ");
  const std::size_t m = u.rows(), n = u.cols(), K = dict.size();
  Image wu(m, n);
  for (std::size_t idx = 0; idx < m * n; ++idx) wu.data()[idx] = w.data()[idx] * u.data()[idx];
  FeatureStack out(K, m, n);
  parallel_for(K, conv_work(dict, m * n), [&](std::size_t k) {
    conv_same_into(matched_filter(dict.kernels[k]), wu.data(), m, n, out.map(k));
  });
  return out;
}

KernelDictionary normalize_kernels(const KernelDictionary& dict, const Image& w) {
  const double w_inf = w.max_abs();
  if (!(w_inf > 0.0)) fail(ErrorCode::ZeroWeights, "cannot normalize kernels: max|w| is zero");
  if (dict.size() == 0) fail(ErrorCode::DimensionMismatch, "cannot normalize an empty dictionary");
  const double target = 1.0 / (static_cast<double>(dict.size()) * w_inf * w_inf);
  KernelDictionary out;
  out.kernels.reserve(dict.size());
  for (std::size_t k = 0; k < dict.size(); ++k) {
    const Kernel& h = dict.kernels[k];
    const double l1 = h.l1_norm();
    if (!(l1 > 0.0)) fail(ErrorCode::ZeroKernel, "kernel " + std::to_string(k) + " has zero 1-norm");
    Kernel scaled = h;
    // Kernels already at the target are left untouched so that the
    // operation is an exact fixed point.
    if (l1 != target) {
      const double factor = target / l1;
      for (double& v : scaled.data()) v *= factor;
    }
    out.kernels.push_back(std::move(scaled));
  }
  out.norm_target = target;
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

OperatorNormEstimate power_iteration(const KernelDictionary& dict, const Image& w,
                                     const PowerIterationOptions& options) {
  if (options.iters < 1) fail(ErrorCode::InvalidArgument, "power_iteration needs iters >= 1");
  const std::size_t m = w.rows(), n = w.cols(), K = dict.size();
  OperatorNormEstimate est{0.0, 0, options.tol};

  Rng rng(options.seed);
  FeatureStack x(K, m, n);
  for (double& v : x.data()) v = rng.normal();
  double xnorm = std::sqrt(dot(x.data(), x.data()));
  if (xnorm == 0.0) return est;
  for (double& v : x.data()) v /= xnorm;

  double prev = 0.0;
  for (int it = 1; it <= options.iters; ++it) {
    Image y = forward(dict, x);
    for (std::size_t idx = 0; idx < m * n; ++idx) y.data()[idx] *= w.data()[idx];
    // Rayleigh quotient of the normal operator at unit x equals ||w .* A x||^2.
    const double rayleigh = dot(y.data(), y.data());
    est.value = std::sqrt(rayleigh);
    est.iterations = it;
    FeatureStack z = adjoint(dict, w, y);
    const double znorm = std::sqrt(dot(z.data(), z.data()));
    if (znorm == 0.0) break;
    if (it > 1 && std::abs(est.value - prev) <= options.tol * std::max(est.value, 1e-300)) break;
    prev = est.value;
    for (std::size_t idx = 0; idx < x.size(); ++idx) x.data()[idx] = z.data()[idx] / znorm;
  }
  return est;
}

double weighted_residual_sq(const Problem& p, const FeatureStack& x) {
  const Image ax = forward(p.dict, x);
  if (!ax.same_shape(p.s)) fail(ErrorCode::DimensionMismatch, "feature maps and s shapes differ");
  if (!p.w.same_shape(p.s)) fail(ErrorCode::DimensionMismatch, "w and s shapes differ");
  double acc = 0.0;
  for (std::size_t idx = 0; idx < ax.size(); ++idx) {
    const double r = p.w.data()[idx] * (ax.data()[idx] - p.s.data()[idx]);
    acc += r * r;
  }
  return acc;
}

}  // namespace cgsc
