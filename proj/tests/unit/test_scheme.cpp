#include <doctest.h>

#include "wmce/errors.hpp"
#include "wmce/scheme.hpp"

using namespace wmce;

TEST_CASE("discrete grid is 1..n") {
  CHECK(observation_grid(DiscreteScheme{4}) == std::vector<double>{1, 2, 3, 4});
  CHECK_THROWS_AS(validate_scheme(DiscreteScheme{0}), ValidationError);
  CHECK(is_discrete(DiscreteScheme{3}));
  CHECK(describe(DiscreteScheme{10}) == "discrete(n=10)");
}

TEST_CASE("continuous grid") {
  const ContinuousScheme c{2.0, 0.005, 0.2, 0.0};
  const auto grid = observation_grid(c);
  CHECK(grid.size() == 401);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 2.0);
  CHECK(continuous_steps(c) == 400);
  CHECK(burn_in_index(c) == 40);
  CHECK(describe(c) == "continuous(T=2,h=0.005,delta=0.2)");
}

TEST_CASE("continuous validation") {
  CHECK_THROWS_AS(validate_scheme(ContinuousScheme{0.0, 0.1, 0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(validate_scheme(ContinuousScheme{1.0, 2.0, 0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(validate_scheme(ContinuousScheme{1.0, 0.1, 1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(validate_scheme(ContinuousScheme{1.0, 0.3, 0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(validate_scheme(ContinuousScheme{1.0, 0.1, 0.05, 0.0}), ValidationError);
  CHECK_THROWS_AS(validate_scheme(ContinuousScheme{1.0, 0.1, 0.0, -1.0}), ValidationError);
  CHECK_NOTHROW(validate_scheme(ContinuousScheme{1.0, 0.1, 0.3, 0.0}));
}

TEST_CASE("refinement factors resolve each coordinate's own time scale") {
  const SpectralModel m(1.0, 0.5, {1.0, 100.0, 1000.0}, {1.0, 1.0, 1.0});
  CHECK(refinement_factors(DiscreteScheme{5}, m, 3) == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(refinement_factors(ContinuousScheme{1.0, 0.01, 0.0, 0.0}, m, 3) ==
        std::vector<std::uint32_t>{1, 1, 1});
  // ceil(theta h / resolve_step): 0.01 -> 1, 1 -> 1, 10 -> 10.
  CHECK(refinement_factors(ContinuousScheme{1.0, 0.01, 0.0, 1.0}, m, 3) ==
        std::vector<std::uint32_t>{1, 1, 10});
  CHECK(refinement_factors(ContinuousScheme{1.0, 0.01, 0.0, 0.5}, m, 2) ==
        std::vector<std::uint32_t>{1, 2});
}
