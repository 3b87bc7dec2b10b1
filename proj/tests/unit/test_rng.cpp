#include <doctest.h>

#include "levytrim/rng.hpp"

#include <cmath>
#include <set>
#include <vector>

using namespace levytrim;

TEST_CASE("philox4x32-10 known answers") {
  // Reference vectors from the Random123 distribution.
  using A = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and disjoint") {
  Stream a(42, substream_id(StreamPurpose::kPath, 3));
  Stream b(42, substream_id(StreamPurpose::kPath, 3));
  Stream c(42, substream_id(StreamPurpose::kPath, 4));
  Stream d(42, substream_id(StreamPurpose::kRepresentation, 3));
  std::vector<std::uint32_t> va, vc, vd;
  for (int i = 0; i < 64; ++i) {
    const auto x = a();
    CHECK(x == b());
    va.push_back(x);
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va != vc);
  CHECK(va != vd);
  CHECK(substream_id(StreamPurpose::kPath, 7) != substream_id(StreamPurpose::kRepresentation, 7));
}

TEST_CASE("uniform stays in the open unit interval with the right moments") {
  Stream s(1, substream_id(StreamPurpose::kUniformTest, 0));
  const int n = 200000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sum2 / n - mean * mean - 1.0 / 12.0) < 2e-3);
}

TEST_CASE("exponential, normal, gamma and poisson moments") {
  Stream s(9, substream_id(StreamPurpose::kGeneric, 1));
  const int n = 100000;
  double e = 0.0, z = 0.0, z2 = 0.0, g = 0.0, p = 0.0, p2 = 0.0, big = 0.0;
  for (int i = 0; i < n; ++i) {
    e += s.exponential();
    const double x = s.normal();
    z += x;
    z2 += x * x;
    g += s.gamma_integer(3);
    const double k = static_cast<double>(s.poisson(2.5));
    p += k;
    p2 += k * k;
    big += static_cast<double>(s.poisson(80.0));
  }
  CHECK(std::abs(e / n - 1.0) < 4.0 / std::sqrt(n));
  CHECK(std::abs(z / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(z2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(g / n - 3.0) < 4.0 * std::sqrt(3.0 / n));
  CHECK(std::abs(p / n - 2.5) < 4.0 * std::sqrt(2.5 / n));
  CHECK(std::abs(p2 / n - (p / n) * (p / n) - 2.5) < 0.1);
  CHECK(std::abs(big / n - 80.0) < 4.0 * std::sqrt(80.0 / n));
  CHECK(s.poisson(0.0) == 0);
}

TEST_CASE("stream satisfies the standard bit generator interface") {
  Stream s(5, 0);
  static_assert(Stream::min() == 0);
  static_assert(Stream::max() == 0xffffffffu);
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(s());
  CHECK(seen.size() > 990);
}
