#pragma once

// Minimal binary tensor files.
//
//   offset 0   8 bytes  magic, "CGSCTEN1" (float64) or "CGSCLAB1" (int32)
//   offset 8   1 byte   ndims, 2 or 3
//   offset 9   ndims x uint32 little-endian dims
//   then       prod(dims) elements, little-endian, row-major (last index fastest)
//
// Files must end exactly after the payload.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cgsc/types.hpp"

namespace cgsc {

struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<double> data;
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

struct LabelTensor {
  std::vector<std::uint32_t> dims;
  std::vector<std::int32_t> data;
  friend bool operator==(const LabelTensor&, const LabelTensor&) = default;
};

Tensor read_tensor(const std::filesystem::path& path);
void write_tensor(const std::filesystem::path& path, const Tensor& t);
LabelTensor read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const LabelTensor& t);

Tensor to_tensor(const Image& image);
Tensor to_tensor(const FeatureStack& stack);  // K x M x N
/// Requires all kernels to share one extent (K x P1 x P2). Anchors are not
/// stored; files always use the default anchor.
Tensor to_tensor(const KernelDictionary& dict);
LabelTensor to_label_tensor(const GroupPartition& groups);  // M x N x K

Image image_from(const Tensor& t);
FeatureStack stack_from(const Tensor& t);
/// Accepts K x P1 x P2 or a single P1 x P2 kernel.
KernelDictionary dictionary_from(const Tensor& t);

}  // namespace cgsc
