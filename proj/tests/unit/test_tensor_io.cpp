#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "cgsc/error.hpp"
#include "cgsc/random.hpp"
#include "cgsc/tensor_io.hpp"

using namespace cgsc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cgsc_tensor_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ErrorCode read_error(const fs::path& p) {
  try {
    read_tensor(p);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("3x4 matrix round trip and exact byte layout") {
  Tensor t{{3, 4}, {}};
  for (int i = 0; i < 12; ++i) t.data.push_back(0.5 * i - 1.25);
  const auto path = scratch("m.cgt");
  write_tensor(path, t);
  CHECK(read_tensor(path) == t);

  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() == 8 + 1 + 8 + 12 * 8);
  CHECK(bytes.substr(0, 8) == "CGSCTEN1");
  CHECK(bytes[8] == 2);
  CHECK(static_cast<unsigned char>(bytes[9]) == 3);
  CHECK(bytes[10] == 0);
  CHECK(static_cast<unsigned char>(bytes[13]) == 4);
  // first payload element -1.25 = 0xBFF4000000000000, little-endian
  CHECK(static_cast<unsigned char>(bytes[17 + 7]) == 0xBF);
  CHECK(static_cast<unsigned char>(bytes[17 + 6]) == 0xF4);
}

TEST_CASE("round trip is bit exact for random shapes and special values") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor t;
    const std::size_t nd = 2 + rng.below(2);
    std::size_t count = 1;
    for (std::size_t d = 0; d < nd; ++d) {
      t.dims.push_back(static_cast<std::uint32_t>(1 + rng.below(6)));
      count *= t.dims.back();
    }
    for (std::size_t i = 0; i < count; ++i) t.data.push_back(rng.normal() * std::pow(10.0, rng.uniform(-300, 300)));
    t.data[0] = -0.0;
    if (count > 1) t.data[1] = std::numeric_limits<double>::denorm_min();
    const auto path = scratch("r.cgt");
    write_tensor(path, t);
    const Tensor back = read_tensor(path);
    REQUIRE(back.dims == t.dims);
    CHECK(std::memcmp(back.data.data(), t.data.data(), count * sizeof(double)) == 0);
  }
  LabelTensor l{{2, 2, 3}, {0, 1, 2, -3, 4, 5, 6, 7, 8, 9, 10, 2147483647}};
  write_labels(scratch("l.cgl"), l);
  CHECK(read_labels(scratch("l.cgl")) == l);
}

TEST_CASE("malformed files") {
  write_bytes(scratch("bad_magic.cgt"), std::string("XXXXXXXX") + '\x02' + std::string(8, '\0'));
  CHECK(read_error(scratch("bad_magic.cgt")) == ErrorCode::BadMagic);

  std::string header = std::string("CGSCTEN1") + '\x02';
  header += std::string("\x02\0\0\0\x02\0\0\0", 8);
  write_bytes(scratch("short.cgt"), header + std::string(3 * 8, '\0'));
  CHECK(read_error(scratch("short.cgt")) == ErrorCode::TruncatedPayload);
  write_bytes(scratch("long.cgt"), header + std::string(5 * 8, '\0'));
  CHECK(read_error(scratch("long.cgt")) == ErrorCode::TruncatedPayload);

  write_bytes(scratch("nd4.cgt"), std::string("CGSCTEN1") + '\x04' + std::string(16, '\0'));
  CHECK(read_error(scratch("nd4.cgt")) == ErrorCode::UnsupportedNdims);

  CHECK(read_error(scratch("does_not_exist.cgt")) == ErrorCode::IoFailure);

  // labels and floats do not mix
  write_tensor(scratch("f.cgt"), Tensor{{1, 1}, {1.0}});
  CHECK_THROWS_AS(read_labels(scratch("f.cgt")), Error);

  CHECK_THROWS_AS(write_tensor(scratch("x.cgt"), Tensor{{1, 1, 1, 1}, {1.0}}), Error);
}

TEST_CASE("domain conversions") {
  const FeatureStack x(2, 3, 4, std::vector<double>(24, 1.5));
  const Tensor t = to_tensor(x);
  CHECK(t.dims == std::vector<std::uint32_t>{2, 3, 4});
  CHECK(stack_from(t) == x);
  CHECK_THROWS_AS(image_from(t), Error);

  KernelDictionary d;
  d.kernels = {Kernel(2, 3, {1, 2, 3, 4, 5, 6}), Kernel(2, 3, {6, 5, 4, 3, 2, 1})};
  const auto back = dictionary_from(to_tensor(d));
  REQUIRE(back.size() == 2);
  CHECK(back.kernels[1] == d.kernels[1]);
  CHECK(dictionary_from(Tensor{{1, 3}, {1, 2, 3}}).size() == 1);

  d.kernels.push_back(Kernel(1, 1, {1.0}));
  CHECK_THROWS_AS(to_tensor(d), Error);
}
