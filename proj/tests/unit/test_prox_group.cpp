#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cgsc/group_builder.hpp"
#include "cgsc/prox_group.hpp"
#include "support/oracles.hpp"

using namespace cgsc;
using namespace cgsc::test;

namespace {

// Two entries (3, 4) in one group, everything else in row 0 of a 1x2, K=1 stack.
struct PairInstance {
  GroupPartition groups{1, 2, 1, {1, 1}, 1};
  FeatureStack x{1, 1, 2, std::vector<double>{3.0, 4.0}};
};

}  // namespace

TEST_CASE("regularizer value") {
  PairInstance inst;
  CHECK(regularizer_value(inst.groups, inst.x, 1.0) == 5.0);
  CHECK(regularizer_value(inst.groups, FeatureStack(1, 1, 2), 1.0) == 0.0);

  Rng rng(1);
  const FeatureStack x = random_stack(rng, 2, 3, 4, -1.0, 1.0);
  double l1 = 0.0;
  for (double v : x.data()) l1 += std::abs(v);
  CHECK(regularizer_value(singleton_groups(3, 4, 2), x, 0.7) == doctest::Approx(0.7 * l1).epsilon(1e-14));

  // ungrouped entries are free
  const GroupPartition none(1, 2, 1, {0, 0}, 0);
  CHECK(regularizer_value(none, inst.x, 3.0) == 0.0);
}

TEST_CASE("theta = 0 is the non-negative projection") {
  Rng rng(2);
  const FeatureStack x = random_stack(rng, 3, 4, 5, -1.0, 1.0);
  const FeatureStack z = prox_nonneg_group(across_k_groups(4, 5, 3), x, {0.0});
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(z.data()[i] == std::max(x.data()[i], 0.0));
}

TEST_CASE("scalar examples match the brute-force minimizer") {
  const GroupPartition g(1, 1, 1, {1}, 1);
  // grid-refinement oracle; its argmin is only resolvable to about sqrt(eps)
  // because the objective is flat to rounding near the minimum
  std::vector<double> zmin;
  group_prox_oracle({3.0}, 1.0, &zmin);
  CHECK(std::abs(zmin[0] - 2.0) <= 1e-6);
  CHECK(prox_nonneg_group(g, FeatureStack(1, 1, 1, std::vector<double>{3.0}), {1.0})(0, 0, 0) == 2.0);

  group_prox_oracle({-3.0}, 1.0, &zmin);
  CHECK(zmin[0] == 0.0);
  CHECK(prox_nonneg_group(g, FeatureStack(1, 1, 1, std::vector<double>{-3.0}), {1.0})(0, 0, 0) == 0.0);
}

TEST_CASE("pair group (3,4) with theta 2.5 halves both entries") {
  PairInstance inst;
  std::vector<double> zmin;
  group_prox_oracle({3.0, 4.0}, 2.5, &zmin);
  CHECK(std::abs(zmin[0] - 1.5) <= 1e-6);
  CHECK(std::abs(zmin[1] - 2.0) <= 1e-6);
  const FeatureStack z = prox_nonneg_group(inst.groups, inst.x, {2.5});
  CHECK(std::abs(z(0, 0, 0) - 1.5) <= 1e-12);
  CHECK(std::abs(z(0, 0, 1) - 2.0) <= 1e-12);
}

TEST_CASE("a group with only negative entries is zeroed") {
  const GroupPartition g(1, 3, 1, {1, 1, 1}, 1);
  const FeatureStack x(1, 1, 3, std::vector<double>{-1.0, -0.5, -2.0});
  const FeatureStack z = prox_nonneg_group(g, x, {0.3});
  for (double v : z.data()) CHECK(v == 0.0);
}

TEST_CASE("group norm uses the projected values") {
  // (3, -4): projection gives (3, 0), norm 3, theta 1.5 -> factor 0.5
  const GroupPartition g(1, 2, 1, {1, 1}, 1);
  const FeatureStack z = prox_nonneg_group(g, FeatureStack(1, 1, 2, std::vector<double>{3.0, -4.0}), {1.5});
  CHECK(z(0, 0, 0) == 1.5);
  CHECK(z(0, 0, 1) == 0.0);
}

TEST_CASE("ungrouped entries are only projected") {
  const GroupPartition g(1, 3, 1, {0, 1, 0}, 1);
  const FeatureStack z = prox_nonneg_group(g, FeatureStack(1, 1, 3, std::vector<double>{2.0, 2.0, -2.0}), {1.0});
  CHECK(z(0, 0, 0) == 2.0);
  CHECK(z(0, 0, 1) == 1.0);
  CHECK(z(0, 0, 2) == 0.0);
}

TEST_CASE("singleton groups give one-sided soft thresholding") {
  Rng rng(3);
  const FeatureStack x = random_stack(rng, 2, 5, 5, 0.0, 2.0);
  const double theta = 0.6;
  const FeatureStack z = prox_nonneg_group(singleton_groups(5, 5, 2), x, {theta});
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(std::abs(z.data()[i] - std::max(x.data()[i] - theta, 0.0)) <= 1e-15);
}

TEST_CASE("properties on random instances") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + rng.below(5), n = 1 + rng.below(5), K = 1 + rng.below(3);
    std::vector<std::int32_t> labels(m * n * K);
    for (auto& l : labels) l = static_cast<std::int32_t>(rng.below(6));
    const GroupPartition g = groups_from_labels(m, n, K, labels);
    const double theta = rng.uniform(0.0, 2.0);
    const FeatureStack x = random_stack(rng, K, m, n, -2.0, 2.0);
    const FeatureStack z = prox_nonneg_group(g, x, {theta});

    CHECK(z.is_non_negative());

    // one shrink factor per group applied to the projected values
    std::vector<double> factor(g.group_count() + 1, -1.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < K; ++k) {
          const double p = std::max(x(k, i, j), 0.0);
          const auto lab = static_cast<std::size_t>(g.label(i, j, k));
          if (p == 0.0) continue;
          const double f = z(k, i, j) / p;
          if (factor[lab] < 0.0) factor[lab] = f;
          CHECK(std::abs(f - factor[lab]) <= 1e-12);
          if (lab == 0) CHECK(f == 1.0);
        }

    // non-expansive on the non-negative orthant
    const FeatureStack a = random_stack(rng, K, m, n, 0.0, 2.0);
    const FeatureStack b = random_stack(rng, K, m, n, 0.0, 2.0);
    const FeatureStack pa = prox_nonneg_group(g, a, {theta}), pb = prox_nonneg_group(g, b, {theta});
    double in = 0.0, out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      in += (a.data()[i] - b.data()[i]) * (a.data()[i] - b.data()[i]);
      out += (pa.data()[i] - pb.data()[i]) * (pa.data()[i] - pb.data()[i]);
    }
    CHECK(std::sqrt(out) <= std::sqrt(in) * (1.0 + 1e-12));
  }
}

TEST_CASE("shape mismatch is rejected") {
  CHECK_THROWS(prox_nonneg_group(singleton_groups(2, 2, 1), FeatureStack(1, 3, 2), {1.0}));
  CHECK_THROWS(regularizer_value(singleton_groups(2, 2, 1), FeatureStack(2, 2, 2), 1.0));
}
