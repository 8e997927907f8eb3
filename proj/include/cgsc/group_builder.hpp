#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cgsc/types.hpp"

namespace cgsc {

/// Every triple in its own group (G = M*N*K). Solving with this partition
/// is the non-negative l1-penalized problem.
GroupPartition singleton_groups(std::size_t rows, std::size_t cols, std::size_t k_count);

/// One group per pixel holding all K kernels at that pixel (G = M*N).
GroupPartition across_k_groups(std::size_t rows, std::size_t cols, std::size_t k_count);

/// One group per (spatial tile, kernel subset). Kernel indices in
/// `kernel_subsets` are 1-based and the subsets must be disjoint; kernels
/// outside every subset stay ungrouped. Edge tiles may be smaller.
/// Group labels run over tiles in row-major order, subsets fastest.
GroupPartition tile_groups(std::size_t rows, std::size_t cols, std::size_t k_count,
                           std::size_t tile_h, std::size_t tile_w,
                           const std::vector<std::vector<std::size_t>>& kernel_subsets);

/// Densifies arbitrary non-negative labels to 1..G, numbering classes in
/// order of first appearance. Label 0 stays ungrouped.
GroupPartition groups_from_labels(std::size_t rows, std::size_t cols, std::size_t k_count,
                                  const std::vector<std::int32_t>& labels);

}  // namespace cgsc
