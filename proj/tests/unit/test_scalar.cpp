#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "semisep/error.hpp"
#include "semisep/scalar.hpp"

using namespace semisep;
using semisep::scalar::bisect_root;
using semisep::scalar::lambert_w0;

TEST_CASE("lambert w known values") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lambert_w0(1.0 / std::numbers::e) == doctest::Approx(0.278464542761073795).epsilon(1e-14));
  CHECK(lambert_w0(-1.0 / std::numbers::e) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(lambert_w0(-1.0 / std::numbers::e - 1e-13) == -1.0);
  CHECK_THROWS_AS(lambert_w0(-0.4), Error);
  CHECK_THROWS_AS(lambert_w0(std::nan("")), Error);
}

TEST_CASE("lambert w inverse identity, random inputs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0 / std::numbers::e + 1e-6, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng);
    const double w = lambert_w0(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-10 * std::max(1.0, std::abs(x)));
    CHECK(w >= -1.0);
  }
}

TEST_CASE("lambert w agrees with a bisection oracle over decades") {
  for (double x : {1e-12, 1e-6, 0.01, 0.5, 3.0, 50.0, 1e4, 1e10, 1e100}) {
    CHECK(lambert_w0(x) == doctest::Approx(oracle::lambert_w(x)).epsilon(1e-11));
  }
}

TEST_CASE("bisection") {
  const auto r = bisect_root([](double x) { return x - 0.5; }, 0.0, 1.0, 1e-12);
  CHECK(r.root == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.bracket.second - r.bracket.first <= 1e-12);

  // decreasing functions work too
  CHECK(bisect_root([](double x) { return 2.0 - x; }, 0.0, 3.0).root ==
        doctest::Approx(2.0).epsilon(1e-12));

  try {
    bisect_root([](double x) { return x * x; }, 1.0, 2.0);
    FAIL("expected NoSignChange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoSignChange);
  }
}

TEST_CASE("bisection residual is no worse than the end points") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const double c = u(rng);
    const auto f = [c](double x) { return std::tanh(x - c) * 5.0; };
    const auto r = bisect_root(f, -4.0, 4.0, 1e-10);
    CHECK(std::abs(f(r.root)) <= std::abs(f(-4.0)));
    CHECK(std::abs(f(r.root)) <= std::abs(f(4.0)));
    CHECK(r.root == doctest::Approx(c).epsilon(1e-9));
  }
}
