#pragma once

// Domain types shared by every module: images, feature stacks, kernel
// dictionaries, group partitions and the problem bundle.
//
// Storage conventions (all row-major, last index fastest):
//   Image          (row, col)
//   FeatureStack   (k, row, col)
//   Kernel         (row, col), origin at `anchor`
//   GroupPartition (row, col, k)

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cgsc {

class Image {
 public:
  Image() = default;
  Image(std::size_t rows, std::size_t cols, double fill = 0.0);
  Image(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool same_shape(const Image& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  /// Largest absolute entry (0 for an empty image).
  double max_abs() const noexcept;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// K maps of identical shape, stored contiguously map after map.
class FeatureStack {
 public:
  FeatureStack() = default;
  FeatureStack(std::size_t k_count, std::size_t rows, std::size_t cols, double fill = 0.0);
  FeatureStack(std::size_t k_count, std::size_t rows, std::size_t cols,
               std::vector<double> data);

  std::size_t k_count() const noexcept { return k_count_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t map_size() const noexcept { return rows_ * cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool same_shape(const FeatureStack& other) const noexcept {
    return k_count_ == other.k_count_ && rows_ == other.rows_ && cols_ == other.cols_;
  }

  double& operator()(std::size_t k, std::size_t i, std::size_t j) {
    return data_[(k * rows_ + i) * cols_ + j];
  }
  double operator()(std::size_t k, std::size_t i, std::size_t j) const {
    return data_[(k * rows_ + i) * cols_ + j];
  }

  std::span<double> map(std::size_t k) { return {data_.data() + k * map_size(), map_size()}; }
  std::span<const double> map(std::size_t k) const {
    return {data_.data() + k * map_size(), map_size()};
  }
  Image map_image(std::size_t k) const;
  void set_map(std::size_t k, const Image& image);

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  bool is_non_negative() const noexcept;

  friend bool operator==(const FeatureStack&, const FeatureStack&) = default;

 private:
  std::size_t k_count_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Anchor {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Anchor&, const Anchor&) = default;
};

/// A convolution kernel together with the index treated as its origin.
/// The default anchor is (floor(rows/2), floor(cols/2)).
class Kernel {
 public:
  Kernel() = default;
  Kernel(std::size_t rows, std::size_t cols, std::vector<double> data);
  Kernel(std::size_t rows, std::size_t cols, std::vector<double> data, Anchor anchor);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Anchor anchor() const noexcept { return anchor_; }

  double operator()(std::size_t p, std::size_t q) const { return data_[p * cols_ + q]; }
  double& operator()(std::size_t p, std::size_t q) { return data_[p * cols_ + q]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  double l1_norm() const noexcept;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  Anchor anchor_;
};

struct KernelDictionary {
  std::vector<Kernel> kernels;
  /// Common 1-norm recorded by normalize_kernels; unset until then.
  std::optional<double> norm_target;

  std::size_t size() const noexcept { return kernels.size(); }
};

/// Disjoint groups over (row, col, k) triples stored as one label per
/// triple. Label 0 means ungrouped, labels 1..G name the groups.
class GroupPartition {
 public:
  GroupPartition() = default;
  /// Throws EmptyGroupLabel if a label is outside 0..group_count or some
  /// group in 1..group_count has no member.
  GroupPartition(std::size_t rows, std::size_t cols, std::size_t k_count,
                 std::vector<std::int32_t> labels, std::size_t group_count);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t k_count() const noexcept { return k_count_; }
  std::size_t group_count() const noexcept { return group_count_; }

  std::int32_t label(std::size_t i, std::size_t j, std::size_t k) const {
    return labels_[(i * cols_ + j) * k_count_ + k];
  }
  std::span<const std::int32_t> labels() const noexcept { return labels_; }

  /// Member count per group, index 0 holds the ungrouped count.
  std::vector<std::size_t> group_sizes() const;

  friend bool operator==(const GroupPartition&, const GroupPartition&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t k_count_ = 0;
  std::vector<std::int32_t> labels_;
  std::size_t group_count_ = 0;
};

struct Problem {
  Image s;
  Image w;
  KernelDictionary dict;
  GroupPartition groups;
  double lambda = 0.0;
};

/// Checks every type invariant of the bundle without modifying it. Throws
/// cgsc::Error naming the first violated invariant.
void validate_problem(const Problem& p);

/// Image of ones, the default weighting.
Image ones_like(std::size_t rows, std::size_t cols);

}  // namespace cgsc
