#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "permlim/permuton.hpp"

using namespace permlim;

namespace {

const GridPermuton kM0 = GridPermuton::from_matrix({{Rational(4, 5), Rational(1, 5)}, {Rational(1, 5), Rational(4, 5)}});

Rational random_unit(Rng& rng, std::uint64_t denominator = 97) {
  return Rational(static_cast<long long>(uniform_below(rng, denominator + 1)), static_cast<long long>(denominator));
}

}  // namespace

TEST_CASE("uniform permuton") {
  const Permuton z = uniform_permuton();
  CHECK(conditional_cdf(z, 0.3, 0.7) == 0.7);
  CHECK(joint_cdf(z, 0.5, 0.5) == 0.25);
  CHECK(rect_mass(z, Rational(0), Rational(1), Rational(0), Rational(1)) == 1);
  CHECK(inverse_conditional_cdf(z, 0.2, 0.37) == 0.37);
  CHECK(rect_mass(z, 0.0, 0.5, 0.0, 0.5) == 0.25);
}

TEST_CASE("grid validation") {
  CHECK_NOTHROW(GridPermuton::from_matrix({{Rational(1)}}));
  CHECK_THROWS_AS(GridPermuton::from_matrix({{Rational(3, 5), Rational(1, 5)}, {Rational(2, 5), Rational(4, 5)}}),
                  InputError);
  CHECK_THROWS_AS(GridPermuton::from_matrix({{Rational(1), Rational(0)}}), InputError);
  CHECK_THROWS_AS(GridPermuton::from_matrix({{Rational(2), Rational(-1)}, {Rational(-1), Rational(2)}}), InputError);
  CHECK_THROWS_AS(GridPermuton::from_matrix({}), InputError);
}

TEST_CASE("Z_sigma for 2 1") {
  const GridPermuton z = from_permutation(Permutation({2, 1}));
  CHECK(z.resolution() == 2);
  CHECK(z.entry(1, 2) == 1);
  CHECK(z.entry(2, 1) == 1);
  CHECK(z.entry(1, 1) == 0);
  const Permuton p = z;
  CHECK(conditional_cdf(p, Rational(1, 4), Rational(3, 4)) == Rational(1, 2));
  CHECK(joint_cdf(p, Rational(1, 2), Rational(1, 2)) == 0);
  CHECK(joint_cdf(p, Rational(1, 2), Rational(1)) == Rational(1, 2));
}

TEST_CASE("diagonal-heavy grid worked values") {
  const Permuton z = kM0;
  CHECK(conditional_cdf(z, Rational(1, 10), Rational(1, 2)) == Rational(4, 5));
  CHECK(inverse_conditional_cdf(z, Rational(1, 10), Rational(9, 10)) == Rational(3, 4));
  CHECK(rect_mass(z, Rational(0), Rational(1, 2), Rational(0), Rational(1, 2)) == Rational(2, 5));
  CHECK(rect_mass(z, Rational(1, 3), Rational(1, 3), Rational(0), Rational(1)) == 0);
  CHECK_THROWS_AS(rect_mass(z, Rational(1, 2), Rational(1, 3), Rational(0), Rational(1)), InputError);
  CHECK_THROWS_AS(conditional_cdf(z, Rational(3, 2), Rational(0)), InputError);
  CHECK_THROWS_AS(joint_cdf(z, -0.1, 0.5), InputError);
}

TEST_CASE("conditional CDF is a CDF in y") {
  Rng rng(1);
  for (int t = 0; t < 30; ++t) {
    const Permuton z = oracle::random_grid(1 + uniform_below(rng, 6), rng);
    const Rational x = random_unit(rng);
    CHECK(conditional_cdf(z, x, Rational(0)) == 0);
    CHECK(conditional_cdf(z, x, Rational(1)) == 1);
    Rational previous = 0;
    for (int j = 0; j <= 60; ++j) {
      const Rational v = conditional_cdf(z, x, Rational(j, 60));
      CHECK(v >= previous);
      previous = v;
    }
  }
}

TEST_CASE("mass condition holds exactly at half-cell points") {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 1 + uniform_below(rng, 6);
    const Permuton z = oracle::random_grid(m, rng);
    // Z(·,y) is constant on each row band, so the integral is a finite sum of band midpoints.
    for (std::size_t j = 0; j <= 2 * m; ++j) {
      const Rational y(static_cast<long long>(j), static_cast<long long>(2 * m));
      Rational integral = 0;
      for (std::size_t r = 1; r <= m; ++r) {
        integral += conditional_cdf(z, Rational(static_cast<long long>(2 * r - 1), static_cast<long long>(2 * m)), y) /
                    Rational(static_cast<long long>(m));
      }
      CHECK(integral == y);
      CHECK(joint_cdf(z, Rational(1), y) == y);
    }
  }
}

TEST_CASE("joint CDF marginals and Lipschitz bound at random points") {
  Rng rng(4);
  const Permuton z = oracle::random_grid(5, rng);
  for (int t = 0; t < 1000; ++t) {
    const Rational x = random_unit(rng, 1009);
    const Rational y = random_unit(rng, 1013);
    REQUIRE(joint_cdf(z, x, Rational(1)) == x);
    REQUIRE(joint_cdf(z, Rational(1), y) == y);
    const double x1 = uniform01(rng), y1 = uniform01(rng), x2 = uniform01(rng), y2 = uniform01(rng);
    REQUIRE(std::abs(joint_cdf(z, x2, y2) - joint_cdf(z, x1, y1)) <= std::abs(x2 - x1) + std::abs(y2 - y1) + 1e-12);
  }
}

TEST_CASE("joint CDF equals the integral of the conditional CDF") {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const std::size_t m = 1 + uniform_below(rng, 5);
    const Permuton z = oracle::random_grid(m, rng);
    for (int s = 0; s < 20; ++s) {
      const Rational x = random_unit(rng, 89);
      const Rational y = random_unit(rng, 83);
      // Piecewise-constant integrand in x: integrate band by band up to x.
      Rational integral = 0;
      for (std::size_t r = 1; r <= m; ++r) {
        const Rational lo = Rational(static_cast<long long>(r - 1), static_cast<long long>(m));
        const Rational hi = Rational(static_cast<long long>(r), static_cast<long long>(m));
        if (lo >= x) break;
        const Rational top = hi < x ? hi : x;
        integral += (top - lo) * conditional_cdf(z, Rational((lo + hi) / 2), y);
      }
      CHECK(joint_cdf(z, x, y) == integral);
    }
  }
}

TEST_CASE("Z_sigma matches numerical integration of its density") {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + uniform_below(rng, 8);
    const Permutation sigma = oracle::random_permutation(n, rng);
    const Permuton z = from_permutation(sigma);
    const std::size_t steps = 64 * n;
    for (int s = 0; s < 10; ++s) {
      const double x = uniform01(rng), y = uniform01(rng);
      // f_σ(x,ỹ) = n·[σ(⌈nx⌉) = ⌈nỹ⌉], integrated over ỹ ∈ [0,y] by the midpoint rule.
      const std::size_t row = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(x * n)));
      double integral = 0.0;
      for (std::size_t i = 0; i < steps; ++i) {
        const double lo = static_cast<double>(i) / steps;
        const double hi = static_cast<double>(i + 1) / steps;
        if (lo >= y) break;
        const double mid = (lo + hi) / 2;
        const double width = std::min(hi, y) - lo;
        const std::size_t col = static_cast<std::size_t>(std::ceil(mid * n));
        integral += width * (sigma(row) == col ? static_cast<double>(n) : 0.0);
      }
      CHECK(std::abs(conditional_cdf(z, x, y) - integral) <= 1e-12);
    }
  }
}

TEST_CASE("Z_sigma corner values count points") {
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + uniform_below(rng, 9);
    const Permutation sigma = oracle::random_permutation(n, rng);
    const Permuton z = from_permutation(sigma);
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j <= n; ++j) {
        long long count = 0;
        for (std::size_t l = 1; l <= i; ++l) count += sigma(l) <= j ? 1 : 0;
        CHECK(joint_cdf(z, Rational(static_cast<long long>(i), static_cast<long long>(n)),
                        Rational(static_cast<long long>(j), static_cast<long long>(n))) ==
              Rational(count, static_cast<long long>(n)));
      }
  }
}

TEST_CASE("inverse conditional CDF round trip") {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const Permuton z = oracle::random_grid(1 + uniform_below(rng, 6), rng);
    for (int s = 0; s < 30; ++s) {
      const Rational x = random_unit(rng);
      const Rational u = random_unit(rng, 101);
      const Rational y = inverse_conditional_cdf(z, x, u);
      CHECK(conditional_cdf(z, x, y) >= u);
      // Rows have positive mass on the target cell, so the round trip is exact.
      CHECK(conditional_cdf(z, x, y) == u);
      const double yd = inverse_conditional_cdf(z, to_double(x), to_double(u));
      CHECK(std::abs(yd - to_double(y)) < 1e-12);
    }
  }
}

TEST_CASE("double and rational evaluations agree") {
  Rng rng(14);
  const Permuton z = oracle::random_grid(4, rng);
  for (int s = 0; s < 200; ++s) {
    const Rational x = random_unit(rng, 1000), y = random_unit(rng, 1000);
    CHECK(std::abs(joint_cdf(z, to_double(x), to_double(y)) - to_double(joint_cdf(z, x, y))) < 1e-12);
    CHECK(std::abs(conditional_cdf(z, to_double(x), to_double(y)) - to_double(conditional_cdf(z, x, y))) < 1e-12);
  }
}

TEST_CASE("1x1 grid evaluates like the uniform permuton") {
  const Permuton g = GridPermuton::from_matrix({{Rational(1)}});
  const Permuton u = uniform_permuton();
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      const Rational x(i, 10), y(j, 10);
      CHECK(joint_cdf(g, x, y) == joint_cdf(u, x, y));
      CHECK(conditional_cdf(g, x, y) == conditional_cdf(u, x, y));
    }
}
