#include "cgsc/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cgsc/error.hpp"

namespace cgsc {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::EmptyGroupLabel: return "EmptyGroupLabel";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroKernel: return "ZeroKernel";
    case ErrorCode::ZeroWeights: return "ZeroWeights";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NormBoundViolated: return "NormBoundViolated";
    case ErrorCode::InvalidSubset: return "InvalidSubset";
    case ErrorCode::PlacementFailed: return "PlacementFailed";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::UnsupportedNdims: return "UnsupportedNdims";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

}  // namespace

// ---- Image ----------------------------------------------------------------

Image::Image(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Image::Image(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    fail(ErrorCode::DimensionMismatch, "image data length " + std::to_string(data_.size()) +
                                           " does not match shape " + shape_str(rows, cols));
}

double Image::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Image ones_like(std::size_t rows, std::size_t cols) { return Image(rows, cols, 1.0); }

// ---- FeatureStack ---------------------------------------------------------

FeatureStack::FeatureStack(std::size_t k_count, std::size_t rows, std::size_t cols, double fill)
    : k_count_(k_count), rows_(rows), cols_(cols), data_(k_count * rows * cols, fill) {}

FeatureStack::FeatureStack(std::size_t k_count, std::size_t rows, std::size_t cols,
                           std::vector<double> data)
    : k_count_(k_count), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != k_count * rows * cols)
    fail(ErrorCode::DimensionMismatch, "feature stack data length does not match " +
                                           std::to_string(k_count) + "x" + shape_str(rows, cols));
}

Image FeatureStack::map_image(std::size_t k) const {
  auto m = map(k);
  return Image(rows_, cols_, std::vector<double>(m.begin(), m.end()));
}

void FeatureStack::set_map(std::size_t k, const Image& image) {
  if (image.rows() != rows_ || image.cols() != cols_)
    fail(ErrorCode::DimensionMismatch, "map shape " + shape_str(image.rows(), image.cols()) +
                                           " does not match stack " + shape_str(rows_, cols_));
  std::copy(image.data().begin(), image.data().end(), map(k).begin());
}

bool FeatureStack::is_non_negative() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v >= 0.0; });
}

// ---- Kernel ---------------------------------------------------------------

Kernel::Kernel(std::size_t rows, std::size_t cols, std::vector<double> data)
    : Kernel(rows, cols, std::move(data), Anchor{rows / 2, cols / 2}) {}

Kernel::Kernel(std::size_t rows, std::size_t cols, std::vector<double> data, Anchor anchor)
    : rows_(rows), cols_(cols), data_(std::move(data)), anchor_(anchor) {
  if (rows == 0 || cols == 0)
    fail(ErrorCode::DimensionMismatch, "kernel must have positive extent");
  if (data_.size() != rows * cols)
    fail(ErrorCode::DimensionMismatch, "kernel data length does not match " + shape_str(rows, cols));
  if (anchor.row >= rows || anchor.col >= cols)
    fail(ErrorCode::InvalidArgument, "kernel anchor (" + std::to_string(anchor.row) + "," +
                                         std::to_string(anchor.col) + ") outside " +
                                         shape_str(rows, cols) + " extent");
}

double Kernel::l1_norm() const noexcept {
  double acc = 0.0;
  for (double v : data_) acc += std::abs(v);
  return acc;
}

// ---- GroupPartition -------------------------------------------------------

GroupPartition::GroupPartition(std::size_t rows, std::size_t cols, std::size_t k_count,
                               std::vector<std::int32_t> labels, std::size_t group_count)
    : rows_(rows), cols_(cols), k_count_(k_count), labels_(std::move(labels)),
      group_count_(group_count) {
  if (labels_.size() != rows * cols * k_count)
    fail(ErrorCode::DimensionMismatch, "label volume length does not match " +
                                           shape_str(rows, cols) + "x" + std::to_string(k_count));
  std::vector<bool> seen(group_count + 1, false);
  for (std::int32_t l : labels_) {
    if (l < 0 || static_cast<std::size_t>(l) > group_count)
      fail(ErrorCode::EmptyGroupLabel, "group label " + std::to_string(l) + " outside 0.." +
                                           std::to_string(group_count));
    seen[static_cast<std::size_t>(l)] = true;
  }
  for (std::size_t g = 1; g <= group_count; ++g)
    if (!seen[g]) fail(ErrorCode::EmptyGroupLabel, "group " + std::to_string(g) + " has no members");
}

std::vector<std::size_t> GroupPartition::group_sizes() const {
  std::vector<std::size_t> sizes(group_count_ + 1, 0);
  for (std::int32_t l : labels_) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

// ---- validation -----------------------------------------------------------

void validate_problem(const Problem& p) {
  const std::size_t m = p.s.rows(), n = p.s.cols();
  if (m == 0 || n == 0) fail(ErrorCode::DimensionMismatch, "observation s is empty");
  if (!p.w.same_shape(p.s))
    fail(ErrorCode::DimensionMismatch, "w is " + shape_str(p.w.rows(), p.w.cols()) +
                                           " but s is " + shape_str(m, n));
  if (p.groups.rows() != m || p.groups.cols() != n)
    fail(ErrorCode::DimensionMismatch, "groups are " + shape_str(p.groups.rows(), p.groups.cols()) +
                                           " but s is " + shape_str(m, n));
  if (p.dict.size() == 0) fail(ErrorCode::DimensionMismatch, "kernel dictionary is empty");
  if (p.groups.k_count() != p.dict.size())
    fail(ErrorCode::DimensionMismatch, "groups have K=" + std::to_string(p.groups.k_count()) +
                                           " but dictionary has K=" + std::to_string(p.dict.size()));
  if (!all_finite(p.s.data())) fail(ErrorCode::NonFiniteEntry, "s has a non-finite entry");
  if (!all_finite(p.w.data())) fail(ErrorCode::NonFiniteEntry, "w has a non-finite entry");
  for (std::size_t k = 0; k < p.dict.size(); ++k) {
    const Kernel& h = p.dict.kernels[k];
    if (!all_finite(h.data()))
      fail(ErrorCode::NonFiniteEntry, "kernel " + std::to_string(k) + " has a non-finite entry");
    if (h.anchor().row >= h.rows() || h.anchor().col >= h.cols())
      fail(ErrorCode::InvalidArgument, "kernel " + std::to_string(k) + " anchor outside extent");
  }
  double wmax = 0.0;
  for (double v : p.w.data()) {
    if (v < 0.0) fail(ErrorCode::NegativeWeight, "w has a negative entry");
    wmax = std::max(wmax, v);
  }
  if (!(wmax > 0.0)) fail(ErrorCode::ZeroWeights, "w is identically zero");
  if (!std::isfinite(p.lambda))
    fail(ErrorCode::NonFiniteEntry, "lambda is not finite");
  if (p.lambda < 0.0) fail(ErrorCode::InvalidArgument, "lambda must be >= 0");
}

}  // namespace cgsc
