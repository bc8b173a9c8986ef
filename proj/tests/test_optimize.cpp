#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "latgeo/normal.hpp"
#include "latgeo/optimize.hpp"

using namespace latgeo;

namespace {

double combined_slack(const PartitionObjective& a, const PartitionObjective& b) {
  return 3.0 * std::hypot(a.boundary.standard_error(), b.boundary.standard_error());
}

}  // namespace

TEST_CASE("reference frames") {
  const auto s = unit_simplex(5, 7);
  for (std::size_t i = 0; i < 5; ++i) CHECK(norm(s.direction(i)) == doctest::Approx(1.0).epsilon(1e-14));
  for (double a : pairwise_angles_degrees(s))
    CHECK(a == doctest::Approx(std::acos(-1.0 / 4.0) * 180.0 / std::numbers::pi).epsilon(1e-12));
  const auto fan = equal_angle_fan(6);
  const auto angles = pairwise_angles_degrees(fan);
  CHECK(angles.size() == 15);
  CHECK(angles[0] == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(*std::max_element(angles.begin(), angles.end()) == doctest::Approx(180.0).epsilon(1e-12));
}

TEST_CASE("partition objective") {
  SUBCASE("two cells: the strip") {
    const auto o = partition_objective(unit_simplex(2, 5), 0.2, 400'000, 3);
    CHECK(std::abs(o.boundary.value - strip_measure(0.2)) <= 3.0 * binomial_standard_error(strip_measure(0.2), 400'000));
    CHECK(o.cell_fractions.size() == 2);
    CHECK(o.cell_fractions[0] + o.cell_fractions[1] == doctest::Approx(1.0));
    CHECK(o.value == doctest::Approx(o.boundary.value + 10.0 * o.imbalance));
  }
  SUBCASE("agrees with the frame's own boundary test") {
    const auto frame = unit_simplex(4, 3);
    const auto o = partition_objective(frame, 0.3, 50'000, 4);
    const auto b = boundary_measure(frame, 0.3, 50'000, 4);
    CHECK(std::abs(double(o.boundary.hits) - double(b.hits)) <= 2.0);
  }
  CHECK_THROWS_AS(partition_objective(unit_simplex(3, 2), 0.0, 1000, 1), std::invalid_argument);
}

TEST_CASE("optimize_directions") {
  SUBCASE("three cells in the plane: the propeller") {
    for (std::uint64_t seed : {0, 1}) {
      const auto r = optimize_directions(3, 2, 0.1, seed);
      for (double a : pairwise_angles_degrees(r.frame)) CHECK(std::abs(a - 120.0) <= 5.0);
      CHECK(r.restart_objectives.size() == 8);
    }
  }
  SUBCASE("two cells: any pair is a strip") {
    OptimizeOptions opt;
    opt.iters = 30;
    opt.restarts = 2;
    const auto r = optimize_directions(2, 4, 0.2, 5, opt);
    const auto o = partition_objective(r.frame, 0.2, 200'000, 6);
    CHECK(std::abs(o.boundary.value - strip_measure(0.2)) <= 3.0 * o.boundary.standard_error());
  }
  SUBCASE("six cells in the plane: no worse than the equal-angle fan") {
    const auto r = optimize_directions(6, 2, 0.1, 7);
    const auto mine = partition_objective(r.frame, 0.1, 200'000, 8);
    const auto fan = partition_objective(equal_angle_fan(6), 0.1, 200'000, 8);
    CHECK(mine.value <= fan.value + combined_slack(mine, fan));
  }
  SUBCASE("never beats the regular simplex when m <= d + 1") {
    OptimizeOptions opt;
    opt.iters = 100;
    opt.restarts = 4;
    for (auto [m, d] : {std::pair<std::size_t, std::size_t>{3, 2}, {4, 3}, {4, 5}}) {
      const auto r = optimize_directions(m, d, 0.15, 10 + m + d, opt);
      const auto mine = partition_objective(r.frame, 0.15, 200'000, 9);
      const auto simplex = partition_objective(unit_simplex(m, d), 0.15, 200'000, 9);
      CHECK(mine.value >= simplex.value - combined_slack(mine, simplex));
    }
  }
  SUBCASE("warm start is kept when it is already optimal") {
    OptimizeOptions opt;
    opt.iters = 20;
    opt.restarts = 1;
    opt.warm_start = equal_angle_fan(3).directions();
    const auto r = optimize_directions(3, 2, 0.1, 11, opt);
    CHECK(r.restart_objectives.size() == 2);
    for (double a : pairwise_angles_degrees(r.frame)) CHECK(std::abs(a - 120.0) <= 5.0);
  }
  SUBCASE("deterministic") {
    OptimizeOptions opt;
    opt.iters = 20;
    opt.restarts = 2;
    CHECK(optimize_directions(4, 2, 0.1, 3, opt).frame.directions() ==
          optimize_directions(4, 2, 0.1, 3, opt).frame.directions());
  }
  OptimizeOptions bad;
  bad.warm_start = Matrix(2, 2);
  CHECK_THROWS_AS(optimize_directions(3, 2, 0.1, 1, bad), std::invalid_argument);
  CHECK_THROWS_AS(optimize_directions(3, 1, 0.1, 1), std::invalid_argument);
}

TEST_CASE("dimension_sweep") {
  SweepOptions opt;
  opt.n_samples = 50'000;
  opt.optimizer.iters = 60;
  opt.optimizer.restarts = 3;
  SUBCASE("two modes: precision does not depend on d") {
    const auto rows = dimension_sweep(2, {2, 3, 8, 20}, 1, opt);
    REQUIRE(rows.size() == 4);
    const double expect = 1.0 - strip_measure(0.1);
    for (const auto& r : rows) {
      CHECK_FALSE(r.optimized);
      CHECK(r.epsilon_max == doctest::Approx(0.1).epsilon(1e-12));
      CHECK(std::abs(r.alpha_hat.value - expect) <= 3.0 * binomial_standard_error(expect, r.alpha_hat.samples));
    }
  }
  SUBCASE("two regimes") {
    const auto rows = dimension_sweep(6, {2, 3, 5, 9}, 2, opt);
    CHECK(rows[0].optimized);
    CHECK(rows[1].optimized);
    CHECK_FALSE(rows[2].optimized);
    CHECK_FALSE(rows[3].optimized);
    CHECK(rows[0].alpha_hat.value < rows[3].alpha_hat.value);
    for (const auto& r : rows) {
      CHECK(r.upper_bound <= 1.0);
      CHECK(r.lower_order_term >= 0.0);
    }
  }
  CHECK_THROWS_AS(dimension_sweep(4, {1, 2}, 1, opt), std::invalid_argument);
}
