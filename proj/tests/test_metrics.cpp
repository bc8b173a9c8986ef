#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "latgeo/metrics.hpp"
#include "latgeo/random.hpp"

using namespace latgeo;

namespace {

Matrix gaussian_points(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
  RandomStream rng(seed, 0);
  Matrix out(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    rng.fill_normal(out.row_mut(i));
    for (double& x : out.row_mut(i)) x *= scale;
  }
  return out;
}

// Points on a coarse integer grid: plenty of duplicates and distance ties.
Matrix grid_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  Matrix out(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (double& x : out.row_mut(i)) x = double(rng.uniform_index(5));
  return out;
}

SampleSet real_set(Matrix m) { return SampleSet(std::move(m), Provenance::real); }
SampleSet fake_set(Matrix m) { return SampleSet(std::move(m), Provenance::fake); }

double plain_distance(VecView a, VecView b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

// Exhaustive density and coverage, written without the library's search code.
std::pair<double, double> brute_density_coverage(const Matrix& real, const Matrix& fake,
                                                 std::size_t k) {
  const std::size_t n = real.rows();
  std::vector<double> radii(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d.push_back(plain_distance(real.row(i), real.row(j)));
    std::sort(d.begin(), d.end());
    radii[i] = d[k - 1];
  }
  double inside = 0.0, covered = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < fake.rows(); ++j)
      if (plain_distance(real.row(i), fake.row(j)) <= radii[i]) {
        inside += 1.0;
        any = true;
      }
    if (any) covered += 1.0;
  }
  return {inside / (double(k) * double(fake.rows())), covered / double(n)};
}

}  // namespace

TEST_CASE("knn_radii") {
  SUBCASE("two points") {
    const Matrix p = Matrix::from_rows({{0.0, 0.0}, {3.0, 4.0}});
    CHECK(knn_radii(p, 1) == std::vector<double>{5.0, 5.0});
  }
  SUBCASE("duplicated point has radius zero") {
    const Matrix p = Matrix::from_rows({{1.0}, {1.0}, {4.0}});
    const auto r = knn_radii(p, 1);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 3.0);
    CHECK(knn_radii(p, 2) == std::vector<double>{3.0, 3.0, 3.0});
  }
  SUBCASE("tree path is bit-identical to brute force") {
    struct Case { std::size_t n, d, k; bool grid; };
    for (const Case c : {Case{50, 2, 5, false}, Case{2000, 3, 4, false}, Case{700, 1, 7, false},
                         Case{500, 10, 3, false}, Case{3000, 2, 6, true}, Case{400, 4, 40, true}}) {
      const Matrix p = c.grid ? grid_points(c.n, c.d, c.n) : gaussian_points(c.n, c.d, c.n);
      CHECK(knn_radii(p, c.k, NeighborSearch::tree) == knn_radii(p, c.k, NeighborSearch::brute_force));
    }
  }
  CHECK_THROWS_AS(knn_radii(Matrix::from_rows({{0.0}, {1.0}}), 2), std::invalid_argument);
  CHECK_THROWS_AS(knn_radii(Matrix::from_rows({{0.0}, {1.0}}), 0), std::invalid_argument);
}

TEST_CASE("KdTree queries against exhaustive scans") {
  for (bool grid : {false, true}) {
    const Matrix p = grid ? grid_points(1500, 3, 5) : gaussian_points(1500, 3, 5);
    const KdTree tree(p);
    const Matrix queries = grid ? grid_points(300, 3, 6) : gaussian_points(300, 3, 6, 1.3);
    for (std::size_t q = 0; q < queries.rows(); ++q) {
      const VecView x = queries.row(q);
      std::size_t best = 0, within = 0;
      const double r = 0.7;
      std::vector<double> d(p.rows());
      for (std::size_t i = 0; i < p.rows(); ++i) {
        d[i] = distance(x, p.row(i));
        if (d[i] < d[best]) best = i;
        if (d[i] <= r) ++within;
      }
      CHECK(tree.nearest(x) == best);
      CHECK(tree.count_within(x, r) == within);
      CHECK(tree.any_within(x, r) == (within > 0));
      std::sort(d.begin(), d.end());
      for (std::size_t k : {1, 2, 9, 50}) CHECK(tree.kth_distance(x, k) == d[k - 1]);
    }
  }
}

TEST_CASE("support precision and recall") {
  const ModeSet modes(Matrix::from_rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  SUBCASE("exact memorization") {
    const auto fake = fake_set(Matrix::from_rows({{0, 0}, {0, 0}, {0, 0}}));
    CHECK(precision_support(fake, modes).value == 1.0);
    CHECK(recall_support(fake, modes).value == 0.25);
  }
  SUBCASE("far away points") {
    const auto fake = fake_set(Matrix::from_rows({{5, 5}, {0.5, 0.5}}));
    CHECK(precision_support(fake, modes).value == 0.0);
    CHECK(precision_support(fake, modes, 0.8).value == 0.5);
  }
  SUBCASE("three of four modes") {
    const auto fake = fake_set(Matrix::from_rows({{1, 1}, {0, 1}, {1, 0}, {1, 0}}));
    CHECK(recall_support(fake, modes).value == 0.75);
    const auto all = fake_set(Matrix::from_rows({{1, 1}, {0, 1}, {1, 0}, {0, 1e-12}}));
    CHECK(recall_support(all, modes).value == 1.0);
  }
  SUBCASE("permutation invariance") {
    const auto fake = fake_set(gaussian_points(200, 2, 3, 0.4));
    Matrix rev(200, 2);
    for (std::size_t i = 0; i < 200; ++i)
      std::copy(fake.point(199 - i).begin(), fake.point(199 - i).end(), rev.row_mut(i).begin());
    CHECK(precision_support(fake, modes, 0.3).hits == precision_support(fake_set(rev), modes, 0.3).hits);
    const ModeSet flipped(Matrix::from_rows({{1, 1}, {0, 1}, {1, 0}, {0, 0}}));
    CHECK(recall_support(fake, modes, 0.3).hits == recall_support(fake, flipped, 0.3).hits);
  }
  CHECK_THROWS_AS(precision_support(fake_set(Matrix::from_rows({{0, 0, 0}})), modes),
                  std::invalid_argument);
}

TEST_CASE("support metrics on the blending generator") {
  const ModeSet modes(gaussian_points(5, 3, 41, 2.0));
  const auto g = GeneratorStar::at_epsilon_max(equidistant_points(5, 4, 1.0), modes,
                                               1.5 * modes.diameter());
  const auto batch = generate_batch(g, 10'000, 3);
  std::size_t single = 0;
  for (auto s : batch.active_sizes) single += s == 1 ? 1 : 0;
  const auto prec = precision_support(batch.samples, modes);
  CHECK(prec.hits == single);
  CHECK(recall_support(batch.samples, modes).value == 1.0);
}

TEST_CASE("density and coverage") {
  SUBCASE("unit square with one fake at the centre") {
    const auto real = real_set(Matrix::from_rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    const auto fake = fake_set(Matrix::from_rows({{0.5, 0.5}}));
    // Every 1-NN radius is 1 and the centre is sqrt(1/2) from each corner.
    CHECK(density(real, fake, 1) == 4.0);
    CHECK(coverage(real, fake, 1) == 1.0);
  }
  SUBCASE("four real, two fake") {
    const auto real = real_set(Matrix::from_rows({{0, 0}, {1, 0}, {3, 0}, {7, 0}}));
    const auto fake = fake_set(Matrix::from_rows({{0.5, 0}, {9, 0}}));
    // radii 1, 1, 2, 4: the first fake lies in balls 0 and 1, the second in ball 3.
    CHECK(coverage(real, fake, 1) == 0.75);
    CHECK(density(real, fake, 1) == 1.5);
  }
  SUBCASE("fake equal to real") {
    const auto real = real_set(gaussian_points(300, 2, 7));
    const auto fake = fake_set(real.points());
    for (std::size_t k : {1, 3, 10}) {
      CHECK(coverage(real, fake, k) == 1.0);
      CHECK(density(real, fake, k) == brute_density_coverage(real.points(), fake.points(), k).first);
    }
  }
  SUBCASE("far fake points") {
    const auto real = real_set(gaussian_points(100, 3, 8));
    const auto fake = fake_set(gaussian_points(50, 3, 9, 0.1));
    Matrix shifted = fake.points();
    for (std::size_t i = 0; i < shifted.rows(); ++i) shifted.row_mut(i)[0] += 100.0;
    CHECK(coverage(real, fake_set(shifted), 3) == 0.0);
    CHECK(density(real, fake_set(shifted), 3) == 0.0);
  }
  SUBCASE("tree and brute force agree with an independent double loop") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const Matrix r = seed % 2 ? grid_points(400, 2, seed) : gaussian_points(400, 3, seed);
      const Matrix f = seed % 2 ? grid_points(300, 2, seed + 50) : gaussian_points(300, 3, seed + 50, 1.4);
      const std::size_t k = 1 + seed;
      const auto [dens, cov] = brute_density_coverage(r, f, k);
      for (auto method : {NeighborSearch::tree, NeighborSearch::brute_force}) {
        CHECK(density(real_set(r), fake_set(f), k, method) == dens);
        CHECK(coverage(real_set(r), fake_set(f), k, method) == cov);
      }
    }
  }
  SUBCASE("coverage is monotone in k") {
    const auto real = real_set(gaussian_points(500, 2, 10));
    const auto fake = fake_set(gaussian_points(60, 2, 11, 1.5));
    double prev = 0.0;
    for (std::size_t k = 1; k < 40; ++k) {
      const double c = coverage(real, fake, k);
      CHECK(c >= prev);
      CHECK(c <= 1.0);
      CHECK(density(real, fake, k) >= 0.0);
      prev = c;
    }
  }
  SUBCASE("rigid motion invariance") {
    // Quarter turn plus integer shift is exact on a grid.
    const Matrix r = grid_points(600, 2, 12), f = grid_points(200, 2, 13);
    auto move = [](const Matrix& m) {
      Matrix out(m.rows(), 2);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        out.row_mut(i)[0] = -m.row(i)[1] + 3.0;
        out.row_mut(i)[1] = m.row(i)[0] - 7.0;
      }
      return out;
    };
    for (std::size_t k : {1, 5, 20}) {
      CHECK(coverage(real_set(r), fake_set(f), k) == coverage(real_set(move(r)), fake_set(move(f)), k));
      CHECK(density(real_set(r), fake_set(f), k) == density(real_set(move(r)), fake_set(move(f)), k));
    }
    // A generic rotation on continuous data: no ball boundary is hit.
    const Matrix gr = gaussian_points(500, 3, 14), gf = gaussian_points(500, 3, 15);
    const double c = std::cos(0.7), s = std::sin(0.7);
    auto rotate = [&](const Matrix& m) {
      Matrix out(m.rows(), 3);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        const VecView p = m.row(i);
        out.row_mut(i)[0] = c * p[0] - s * p[1] + 1.5;
        out.row_mut(i)[1] = s * p[0] + c * p[1] - 2.0;
        out.row_mut(i)[2] = p[2] + 0.25;
      }
      return out;
    };
    CHECK(coverage(real_set(gr), fake_set(gf), 4) == coverage(real_set(rotate(gr)), fake_set(rotate(gf)), 4));
    CHECK(density(real_set(gr), fake_set(gf), 4) == density(real_set(rotate(gr)), fake_set(rotate(gf)), 4));
  }
  CHECK_THROWS_AS(coverage(real_set(gaussian_points(5, 2, 1)), fake_set(gaussian_points(5, 2, 2)), 5),
                  std::invalid_argument);
}

TEST_CASE("coverage of identical continuous laws matches the order-statistics formula") {
  // A real point's k-NN ball holds no fake point iff its k nearest neighbours
  // in the pooled sample are all real.
  const std::size_t n = 2000, k = 4;
  double miss = 1.0;
  for (std::size_t i = 0; i < k; ++i) miss *= double(n - 1 - i) / double(2 * n - 1 - i);
  double mean = 0.0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r)
    mean += coverage(real_set(gaussian_points(n, 2, 100 + r)), fake_set(gaussian_points(n, 2, 200 + r)), k);
  mean /= reps;
  CAPTURE(mean);
  CHECK(std::abs(mean - (1.0 - miss)) < 0.01);
}

TEST_CASE("equilibrium") {
  SUBCASE("balanced occupancy gives zero") {
    const auto real = real_set(Matrix::from_rows({{0, 0}, {10, 0}, {0, 10}}));
    const auto fake = fake_set(Matrix::from_rows({{1, 0}, {9, 1}, {0, 8}, {-1, 0}, {11, 0}, {0, 12}}));
    const auto rep = equilibrium(real, fake);
    CHECK(rep.kl == 0.0);
    CHECK(rep.empty_cells == 0);
    CHECK(rep.counts == std::vector<std::size_t>{2, 2, 2});
  }
  SUBCASE("two cells with all mass in one") {
    const auto real = real_set(Matrix::from_rows({{0.0}, {1.0}}));
    const auto fake = fake_set(Matrix::from_rows({{-1.0}, {0.1}, {0.2}, {0.3}}));
    // Shares (4 + 1/4) : (0 + 1/4), i.e. 17 : 1.
    const double p0 = 17.0 / 18.0, p1 = 1.0 / 18.0;
    const double expect = 0.5 * std::log(0.5 / p0) + 0.5 * std::log(0.5 / p1);
    const auto rep = equilibrium(real, fake);
    CHECK(rep.kl == doctest::Approx(expect).epsilon(1e-14));
    CHECK(rep.kl > 0.0);
    CHECK(rep.empty_cells == 1);
  }
  SUBCASE("ties go to the lowest index") {
    const auto real = real_set(Matrix::from_rows({{0.0}, {2.0}}));
    const auto rep = equilibrium(real, fake_set(Matrix::from_rows({{1.0}})));
    CHECK(rep.counts == std::vector<std::size_t>{1, 0});
  }
  SUBCASE("real order does not matter off ties") {
    const Matrix r = gaussian_points(200, 3, 30), f = gaussian_points(1000, 3, 31);
    Matrix rev(200, 3);
    for (std::size_t i = 0; i < 200; ++i) std::copy(r.row(199 - i).begin(), r.row(199 - i).end(), rev.row_mut(i).begin());
    CHECK(equilibrium(real_set(r), fake_set(f)).kl ==
          doctest::Approx(equilibrium(real_set(rev), fake_set(f)).kl).epsilon(1e-12));
  }
  CHECK_THROWS_AS(equilibrium(real_set(Matrix::from_rows({{0.0}})), fake_set(Matrix::from_rows({{0.0}}))),
                  std::invalid_argument);
}

TEST_CASE("coverage_convergence") {
  const ModeSet modes(Matrix::from_rows({{0, 0}, {4, 0}, {0, 4}, {4, 4}}));
  const auto real = atom_law(modes, {0, 1, 2, 3}, Provenance::real);
  CHECK(coverage_k(20'000) == 4);
  CHECK(coverage_k(2) == 1);
  SUBCASE("point modes") {
    const std::vector<std::size_t> schedule{500, 2000, 8000};
    const auto same = coverage_convergence(real, atom_law(modes, {0, 1, 2, 3}, Provenance::fake), 1.0, schedule, 1);
    const auto three = coverage_convergence(real, atom_law(modes, {0, 1, 3}, Provenance::fake), 0.75, schedule, 2);
    const auto none = coverage_convergence(real, gaussian_mixture_law(modes, {0, 1, 2, 3}, 0.1, Provenance::fake), 0.0, schedule, 3);
    REQUIRE(same.size() == 3);
    for (std::size_t t = 0; t < 3; ++t) {
      CHECK(same[t].n == schedule[t]);
      CHECK(same[t].k == coverage_k(schedule[t]));
      CHECK(same[t].coverage == 1.0);
      CHECK(three[t].error < 0.05);
      CHECK(none[t].coverage == 0.0);
    }
  }
  SUBCASE("deterministic and validated") {
    const auto fake = atom_law(modes, {0, 1}, Provenance::fake);
    const auto a = coverage_convergence(real, fake, 0.5, {100, 200}, 9);
    const auto b = coverage_convergence(real, fake, 0.5, {100, 200}, 9);
    CHECK(a[1].coverage == b[1].coverage);
    CHECK_THROWS_AS(coverage_convergence(real, fake, 0.5, {200, 100}, 9), std::invalid_argument);
    CHECK_THROWS_AS(coverage_convergence(real, fake, 1.5, {200}, 9), std::invalid_argument);
  }
}
