#include "cgsc/group_builder.hpp"

#include <string>
#include <unordered_map>

#include "cgsc/error.hpp"

namespace cgsc {

namespace {

void check_dims(std::size_t rows, std::size_t cols, std::size_t k_count) {
  if (rows == 0 || cols == 0 || k_count == 0)
    fail(ErrorCode::InvalidArgument, "group builders need positive dimensions");
}

}  // namespace

GroupPartition singleton_groups(std::size_t rows, std::size_t cols, std::size_t k_count) {
  check_dims(rows, cols, k_count);
  const std::size_t total = rows * cols * k_count;
  std::vector<std::int32_t> labels(total);
  for (std::size_t idx = 0; idx < total; ++idx) labels[idx] = static_cast<std::int32_t>(idx + 1);
  return GroupPartition(rows, cols, k_count, std::move(labels), total);
}

GroupPartition across_k_groups(std::size_t rows, std::size_t cols, std::size_t k_count) {
  check_dims(rows, cols, k_count);
  std::vector<std::int32_t> labels(rows * cols * k_count);
  for (std::size_t pix = 0; pix < rows * cols; ++pix)
    for (std::size_t k = 0; k < k_count; ++k)
      labels[pix * k_count + k] = static_cast<std::int32_t>(pix + 1);
  return GroupPartition(rows, cols, k_count, std::move(labels), rows * cols);
}

GroupPartition tile_groups(std::size_t rows, std::size_t cols, std::size_t k_count,
                           std::size_t tile_h, std::size_t tile_w,
                           const std::vector<std::vector<std::size_t>>& kernel_subsets) {
  check_dims(rows, cols, k_count);
  if (tile_h == 0 || tile_w == 0) fail(ErrorCode::InvalidArgument, "tile dimensions must be >= 1");

  // subset index per kernel, -1 for ungrouped kernels
  std::vector<std::ptrdiff_t> subset_of(k_count, -1);
  for (std::size_t s = 0; s < kernel_subsets.size(); ++s) {
    if (kernel_subsets[s].empty())
      fail(ErrorCode::InvalidSubset, "kernel subset " + std::to_string(s + 1) + " is empty");
    for (std::size_t k1 : kernel_subsets[s]) {
      if (k1 < 1 || k1 > k_count)
        fail(ErrorCode::InvalidSubset, "kernel index " + std::to_string(k1) + " outside 1.." +
                                           std::to_string(k_count));
      if (subset_of[k1 - 1] >= 0)
        fail(ErrorCode::InvalidSubset, "kernel " + std::to_string(k1) + " appears in two subsets");
      subset_of[k1 - 1] = static_cast<std::ptrdiff_t>(s);
    }
  }

  const std::size_t tiles_across = (cols + tile_w - 1) / tile_w;
  const std::size_t tiles_down = (rows + tile_h - 1) / tile_h;
  const std::size_t n_subsets = kernel_subsets.size();
  std::vector<std::int32_t> labels(rows * cols * k_count, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t tile = (i / tile_h) * tiles_across + j / tile_w;
      for (std::size_t k = 0; k < k_count; ++k) {
        if (subset_of[k] < 0) continue;
        labels[(i * cols + j) * k_count + k] =
            static_cast<std::int32_t>(tile * n_subsets + static_cast<std::size_t>(subset_of[k]) + 1);
      }
    }
  return GroupPartition(rows, cols, k_count, std::move(labels),
                        tiles_down * tiles_across * n_subsets);
}

GroupPartition groups_from_labels(std::size_t rows, std::size_t cols, std::size_t k_count,
                                  const std::vector<std::int32_t>& labels) {
  if (labels.size() != rows * cols * k_count)
    fail(ErrorCode::DimensionMismatch, "label volume length does not match its shape");
  std::unordered_map<std::int32_t, std::int32_t> dense;
  std::vector<std::int32_t> out(labels.size(), 0);
  for (std::size_t idx = 0; idx < labels.size(); ++idx) {
    const std::int32_t l = labels[idx];
    if (l < 0) fail(ErrorCode::InvalidArgument, "group labels must be non-negative");
    if (l == 0) continue;
    auto [it, inserted] = dense.try_emplace(l, static_cast<std::int32_t>(dense.size() + 1));
    out[idx] = it->second;
  }
  return GroupPartition(rows, cols, k_count, std::move(out), dense.size());
}

}  // namespace cgsc
