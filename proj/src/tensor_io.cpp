#include "cgsc/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "cgsc/error.hpp"

namespace cgsc {

namespace {

constexpr std::string_view kFloatMagic = "CGSCTEN1";
constexpr std::string_view kLabelMagic = "CGSCLAB1";

template <typename U>
void put_le(std::string& buf, U value) {
  for (std::size_t b = 0; b < sizeof(U); ++b)
    buf.push_back(static_cast<char>((value >> (8 * b)) & 0xFF));
}

template <typename U>
U get_le(const unsigned char* p) {
  U value = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) value |= static_cast<U>(p[b]) << (8 * b);
  return value;
}

std::size_t element_count(const std::vector<std::uint32_t>& dims) {
  std::size_t count = 1;
  for (auto d : dims) count *= d;
  return count;
}

void check_ndims(std::size_t ndims) {
  if (ndims != 2 && ndims != 3)
    fail(ErrorCode::UnsupportedNdims, "tensor ndims " + std::to_string(ndims) + " not in {2, 3}");
}

std::string header(std::string_view magic, const std::vector<std::uint32_t>& dims) {
  check_ndims(dims.size());
  std::string buf(magic);
  buf.push_back(static_cast<char>(dims.size()));
  for (auto d : dims) put_le<std::uint32_t>(buf, d);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

struct Parsed {
  std::vector<std::uint32_t> dims;
  std::vector<unsigned char> bytes;
  std::size_t payload_offset = 0;
};

Parsed parse(const std::filesystem::path& path, std::string_view magic, std::size_t elem_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  Parsed p;
  p.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  const auto& b = p.bytes;
  if (b.size() < magic.size() || std::memcmp(b.data(), magic.data(), magic.size()) != 0)
    fail(ErrorCode::BadMagic, "'" + path.string() + "' does not start with " + std::string(magic));
  if (b.size() < magic.size() + 1)
    fail(ErrorCode::TruncatedPayload, "'" + path.string() + "' ends inside the header");
  const std::size_t ndims = b[magic.size()];
  check_ndims(ndims);
  const std::size_t dims_at = magic.size() + 1;
  if (b.size() < dims_at + 4 * ndims)
    fail(ErrorCode::TruncatedPayload, "'" + path.string() + "' ends inside the header");
  for (std::size_t d = 0; d < ndims; ++d)
    p.dims.push_back(get_le<std::uint32_t>(b.data() + dims_at + 4 * d));
  p.payload_offset = dims_at + 4 * ndims;
  const std::size_t expected = element_count(p.dims) * elem_size;
  if (b.size() - p.payload_offset != expected)
    fail(ErrorCode::TruncatedPayload, "'" + path.string() + "' payload has " +
                                          std::to_string(b.size() - p.payload_offset) +
                                          " bytes, expected " + std::to_string(expected));
  return p;
}

}  // namespace

Tensor read_tensor(const std::filesystem::path& path) {
  Parsed p = parse(path, kFloatMagic, 8);
  Tensor t{p.dims, std::vector<double>(element_count(p.dims))};
  for (std::size_t i = 0; i < t.data.size(); ++i)
    t.data[i] = std::bit_cast<double>(get_le<std::uint64_t>(p.bytes.data() + p.payload_offset + 8 * i));
  return t;
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  if (element_count(t.dims) != t.data.size())
    fail(ErrorCode::DimensionMismatch, "tensor dims do not match its data length");
  std::string buf = header(kFloatMagic, t.dims);
  buf.reserve(buf.size() + 8 * t.data.size());
  for (double v : t.data) put_le<std::uint64_t>(buf, std::bit_cast<std::uint64_t>(v));
  write_file(path, buf);
}

LabelTensor read_labels(const std::filesystem::path& path) {
  Parsed p = parse(path, kLabelMagic, 4);
  LabelTensor t{p.dims, std::vector<std::int32_t>(element_count(p.dims))};
  for (std::size_t i = 0; i < t.data.size(); ++i)
    t.data[i] = std::bit_cast<std::int32_t>(get_le<std::uint32_t>(p.bytes.data() + p.payload_offset + 4 * i));
  return t;
}

void write_labels(const std::filesystem::path& path, const LabelTensor& t) {
  if (element_count(t.dims) != t.data.size())
    fail(ErrorCode::DimensionMismatch, "label tensor dims do not match its data length");
  std::string buf = header(kLabelMagic, t.dims);
  for (std::int32_t v : t.data) put_le<std::uint32_t>(buf, std::bit_cast<std::uint32_t>(v));
  write_file(path, buf);
}

Tensor to_tensor(const Image& image) {
  return {{static_cast<std::uint32_t>(image.rows()), static_cast<std::uint32_t>(image.cols())},
          image.values()};
}

Tensor to_tensor(const FeatureStack& stack) {
  return {{static_cast<std::uint32_t>(stack.k_count()), static_cast<std::uint32_t>(stack.rows()),
           static_cast<std::uint32_t>(stack.cols())},
          stack.values()};
}

Tensor to_tensor(const KernelDictionary& dict) {
  if (dict.size() == 0) fail(ErrorCode::DimensionMismatch, "cannot store an empty dictionary");
  const std::size_t p1 = dict.kernels[0].rows(), p2 = dict.kernels[0].cols();
  Tensor t{{static_cast<std::uint32_t>(dict.size()), static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p2)},
           {}};
  for (const auto& h : dict.kernels) {
    if (h.rows() != p1 || h.cols() != p2)
      fail(ErrorCode::DimensionMismatch, "kernels of different extents cannot share one tensor");
    t.data.insert(t.data.end(), h.data().begin(), h.data().end());
  }
  return t;
}

LabelTensor to_label_tensor(const GroupPartition& groups) {
  return {{static_cast<std::uint32_t>(groups.rows()), static_cast<std::uint32_t>(groups.cols()),
           static_cast<std::uint32_t>(groups.k_count())},
          std::vector<std::int32_t>(groups.labels().begin(), groups.labels().end())};
}

Image image_from(const Tensor& t) {
  if (t.dims.size() != 2) fail(ErrorCode::ShapeMismatch, "expected a 2-dimensional tensor for an image");
  return Image(t.dims[0], t.dims[1], t.data);
}

FeatureStack stack_from(const Tensor& t) {
  if (t.dims.size() != 3)
    fail(ErrorCode::ShapeMismatch, "expected a 3-dimensional K x M x N tensor for feature maps");
  return FeatureStack(t.dims[0], t.dims[1], t.dims[2], t.data);
}

KernelDictionary dictionary_from(const Tensor& t) {
  KernelDictionary dict;
  if (t.dims.size() == 2) {
    dict.kernels.emplace_back(t.dims[0], t.dims[1], t.data);
    return dict;
  }
  const std::size_t K = t.dims[0], p1 = t.dims[1], p2 = t.dims[2];
  for (std::size_t k = 0; k < K; ++k) {
    auto first = t.data.begin() + static_cast<std::ptrdiff_t>(k * p1 * p2);
    dict.kernels.emplace_back(p1, p2, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(p1 * p2)));
  }
  return dict;
}

}  // namespace cgsc
