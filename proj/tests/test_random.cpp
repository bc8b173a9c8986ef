#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "latgeo/normal.hpp"
#include "latgeo/parallel.hpp"
#include "latgeo/random.hpp"

using namespace latgeo;

TEST_CASE("philox matches the Random123 known-answer vectors") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) ==
        C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                             {0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             {0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, 3), b(42, 3), c(42, 4), e(43, 3);
  std::vector<std::uint64_t> va, vb, vc, ve;
  for (int i = 0; i < 16; ++i) {
    va.push_back(a.next_u64());
    vb.push_back(b.next_u64());
    vc.push_back(c.next_u64());
    ve.push_back(e.next_u64());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != ve);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("uniform and normal draws have the right moments") {
  RandomStream s(7, 0);
  const int n = 400'000;
  double su = 0, sn = 0, sn2 = 0, sn4 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double x = s.normal();
    sn += x;
    sn2 += x * x;
    sn4 += x * x * x * x;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.005));
  CHECK(std::abs(sn / n) < 5.0 / std::sqrt(n));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sn4 / n == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("uniform_index stays in range and hits every value") {
  RandomStream s(9, 1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = s.uniform_index(7);
    REQUIRE(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("normal_cdf against tabulated values") {
  // Reference values from 30-digit arbitrary precision evaluation.
  const std::vector<std::pair<double, double>> table = {
      {-8.0, 6.2209605742717841235e-16}, {-6.0, 9.865876450376981407e-10},
      {-5.0, 2.8665157187919391167e-7},  {-4.0, 0.000031671241833119921254},
      {-3.0, 0.0013498980316300945267},  {-2.5, 0.006209665325776135167},
      {-2.0, 0.0227501319481792072},     {-1.5, 0.066807201268858066004},
      {-1.0, 0.15865525393145705141},    {-0.5, 0.30853753872598689636},
      {-0.1, 0.46017216272297101633},    {0.0, 0.5},
      {0.1, 0.53982783727702898367},     {0.2, 0.57925970943910302738},
      {0.5, 0.69146246127401310364},     {1.0, 0.84134474606854294859},
      {1.5, 0.933192798731141934},       {2.0, 0.9772498680518207928},
      {3.0, 0.99865010196836990547},     {5.0, 0.99999971334842812081},
  };
  for (const auto& [x, expected] : table) {
    CAPTURE(x);
    CHECK(std::abs(normal_cdf(x) - expected) <= 1e-12 * expected);
  }
  CHECK(strip_measure(0.2) == doctest::Approx(0.15851941887820598).epsilon(1e-12));
  CHECK(strip_measure(0.0) == 0.0);
}

TEST_CASE("parallel blocks do not depend on the worker pool") {
  const std::size_t n = 3 * kBlockSize + 17;
  std::vector<double> first(n * 2), second(n * 2);
  auto run = [&](std::vector<double>& out) {
    for_each_gaussian_block(n, 2, 123, [&](const GaussianBlock& b) {
      std::copy(b.latents.begin(), b.latents.end(), out.begin() + b.begin * 2);
    });
  };
  run(first);
  setenv("LATGEO_THREADS", "3", 1);
  run(second);
  unsetenv("LATGEO_THREADS");
  CHECK(first == second);
}

TEST_CASE("parallel_for propagates exceptions") {
  auto task = [](std::size_t t) {
    if (t == 5) throw std::runtime_error("boom");
  };
  CHECK_THROWS_AS(parallel_for(10, task), std::runtime_error);
}
