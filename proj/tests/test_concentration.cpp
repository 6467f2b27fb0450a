#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "permlim/concentration.hpp"
#include "permlim/metrics.hpp"

using namespace permlim;

namespace {

const Permuton kM0 = GridPermuton::from_matrix({{Rational(4, 5), Rational(1, 5)}, {Rational(1, 5), Rational(4, 5)}});

}  // namespace

TEST_CASE("bound arithmetic") {
  CHECK(concentration_bound(1u << 20) == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(concentration_bound(100) > 1.0);
  CHECK(concentration_bound(65536) == Catch::Approx(1.0));
  const ConcentrationReport r = concentration_experiment(uniform_permuton(), 100, 2, 1);
  CHECK(r.vacuous);
  CHECK(r.successes == 2);
}

TEST_CASE("lattice estimate bounds the exact distances") {
  Rng rng(301);
  for (int t = 0; t < 12; ++t) {
    const std::size_t k = 20 + uniform_below(rng, 120);
    const Permuton z = t % 3 == 0 ? Permuton(uniform_permuton()) : Permuton(oracle::random_grid(1 + t % 4, rng));
    const Permutation sigma = z_random_permutation(z, k, rng);
    const double exact_sup = to_double(d_infty(from_permutation(sigma), z).value);
    const double exact_sq = to_double(d_square_perm_permuton(sigma, z).value);
    for (std::size_t m : {std::size_t{3}, std::size_t{7}, std::size_t{16}, k}) {
      const GridApproximation g = approximate_distance(sigma, z, m);
      CHECK(g.d_infty_grid <= exact_sup + 1e-12);
      CHECK(exact_sup <= g.d_infty_upper + 1e-12);
      CHECK(exact_sq <= g.d_square_upper + 1e-12);
      CHECK(g.envelope == Catch::Approx(2.0 / static_cast<double>(g.resolution) + 4.0 / static_cast<double>(k)));
    }
  }
}

TEST_CASE("full lattice against the uniform permuton is exact") {
  Rng rng(303);
  const Permutation sigma = z_random_permutation(uniform_permuton(), 300, rng);
  const GridApproximation g = approximate_distance(sigma, uniform_permuton(), 300);
  CHECK(std::abs(g.d_infty_grid - to_double(d_infty(StepCdf<Rational>::of(sigma), StepCdf<Rational>::of(uniform_permuton())).value)) < 1e-12);
}

TEST_CASE("uniform sample of length 10^4 has small normalized discrepancy") {
  Rng rng(305);
  const Permutation sigma = z_random_permutation(uniform_permuton(), 10000, rng);
  // D(σ)/n = d_□(σ, Z_u), bounded through the full lattice.
  CHECK(approximate_distance(sigma, uniform_permuton(), 10000).d_square_upper < 0.05);
}

TEST_CASE("experiment is reproducible and independent of thread count") {
  const ConcentrationReport one = concentration_experiment(kM0, 5000, 4, 77, 128, 1);
  const ConcentrationReport three = concentration_experiment(kM0, 5000, 4, 77, 128, 3);
  REQUIRE(one.trials.size() == 4);
  for (std::size_t t = 0; t < 4; ++t) {
    CHECK(one.trials[t].seed == derive_seed(77, t));
    CHECK(one.trials[t].seed == three.trials[t].seed);
    CHECK(one.trials[t].distance.d_infty_grid == three.trials[t].distance.d_infty_grid);
  }
  CHECK(one.successes == three.successes);
  CHECK(one.k == 5000);
  CHECK(one.master_seed == 77);
  CHECK_THROWS_AS(concentration_experiment(kM0, 0, 1, 1), InputError);
  CHECK_THROWS_AS(concentration_experiment(kM0, 10, 0, 1), InputError);
}
