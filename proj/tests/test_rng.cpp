#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "isowalk/rng.hpp"

using namespace isowalk;

TEST_CASE("mix64 matches the published splitmix64 outputs for seed 0") {
  // reference sequence: state k*gamma, output finalize(state + gamma)
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
  CHECK(mix64(0x9e3779b97f4a7c15ULL * 2) == 0x06c45d188009454fULL);
}

TEST_CASE("derived streams replay independently of draw order") {
  auto a = RngStream::derive(42, {1, 2});
  auto b = RngStream::derive(42, {9, 9});
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 16; ++i) first.push_back(a.next_u64());

  // interleave draws from another stream, then re-derive stream a
  for (int i = 0; i < 7; ++i) b.next_u64();
  auto a2 = RngStream::derive(42, {1, 2});
  for (int i = 0; i < 16; ++i) CHECK(a2.next_u64() == first[i]);
}

TEST_CASE("label lists and seeds separate streams") {
  auto base = RngStream::derive(7, {1, 2, 3});
  std::uint64_t x0 = base.next_u64();
  CHECK(RngStream::derive(7, {1, 2, 4}).next_u64() != x0);
  CHECK(RngStream::derive(7, {3, 2, 1}).next_u64() != x0);
  CHECK(RngStream::derive(8, {1, 2, 3}).next_u64() != x0);
  CHECK(RngStream::derive(7, {1, 2}).next_u64() != x0);
}

TEST_CASE("uniform stays in range and fills the unit interval") {
  auto rs = RngStream::derive(1, {0});
  double lo = 1, hi = 0, sum = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double u = rs.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  CHECK(std::abs(sum / n - 0.5) < 0.02);  // sd of the mean is ~0.002

  for (int i = 0; i < 1000; ++i) {
    double v = rs.uniform(-2.0, 3.0);
    REQUIRE(v >= -2.0);
    REQUIRE(v < 3.0);
  }
}

TEST_CASE("uniform_int covers every residue roughly evenly") {
  auto rs = RngStream::derive(2, {0});
  const int n = 7, draws = 70000;
  std::vector<int> counts(n, 0);
  for (int i = 0; i < draws; ++i) {
    int k = rs.uniform_int(n);
    REQUIRE(k >= 0);
    REQUIRE(k < n);
    ++counts[k];
  }
  for (int c : counts) CHECK(std::abs(c - draws / n) < 500);  // ~5 sd
  CHECK_THROWS_AS(rs.uniform_int(0), std::invalid_argument);
  CHECK_THROWS_AS(rs.uniform_int(-3), std::invalid_argument);
}

TEST_CASE("sample_index tracks the weight vector") {
  auto rs = RngStream::derive(3, {0});
  const std::vector<double> w = {0.5, 0.3, 0.2};
  std::vector<int> counts(3, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(rs.sample_index(w))];
  CHECK(std::abs(counts[0] / double(draws) - 0.5) < 0.01);
  CHECK(std::abs(counts[1] / double(draws) - 0.3) < 0.01);
  CHECK(std::abs(counts[2] / double(draws) - 0.2) < 0.01);
}

TEST_CASE("sample_index never returns past the end") {
  auto rs = RngStream::derive(4, {0});
  const std::vector<double> w = {1.0 - 1e-16};
  for (int i = 0; i < 1000; ++i) CHECK(rs.sample_index(w) == 0);
}

TEST_CASE("streams with distinct trial labels look unrelated") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t trial = 0; trial < 1000; ++trial)
    seen.insert(RngStream::derive(99, {5, trial, 1}).next_u64());
  CHECK(seen.size() == 1000);
}
