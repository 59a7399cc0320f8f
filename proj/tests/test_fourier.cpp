#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hestonis/fourier.hpp"
#include "support.hpp"

using namespace hestonis;

namespace {
const HestonParams kHighVol(60.0, 0.36, 3.0, -0.1, 0.36);
const HestonParams kSlowRev(15.0, 0.5, 1.0, -0.1, 0.5);
}  // namespace

TEST_CASE("characteristic function basics", "[fourier]") {
  SECTION("phi(0) = 1") {
    REQUIRE(std::abs(heston_cf({0.0, 0.0}, 0.5, kHighVol) - std::complex<double>(1.0, 0.0)) <
            1e-14);
  }
  SECTION("martingale: phi(-i) = E[S_T/S_0] = 1") {
    const auto v = heston_cf({0.0, -1.0}, 1.0, kSlowRev);
    REQUIRE(v.real() == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(std::abs(v.imag()) < 1e-12);
  }
  SECTION("modulus bounded by one on the real line") {
    for (double u : {0.5, 2.0, 10.0, 50.0}) {
      REQUIRE(std::abs(heston_cf({u, 0.0}, 0.25, kHighVol)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("reference price reproduces frozen quadrature values", "[fourier][oracle]") {
  // Values pinned with an independent adaptive quadrature of the same
  // integral representation.
  SECTION("high-vol set, one day") {
    const double c = reference_price(kHighVol, MarketSpec(2000.0, 2200.0, 1.0 / 252.0));
    REQUIRE(c == Catch::Approx(0.1484498549161799).margin(2e-6));
  }
  SECTION("high-vol set, one month") {
    const double c = reference_price(kHighVol, MarketSpec(2000.0, 2200.0, 21.0 / 252.0));
    REQUIRE(c == Catch::Approx(64.73892925450605).margin(2e-4));
  }
  SECTION("slow-reversion set, one year") {
    REQUIRE(reference_price(kSlowRev, MarketSpec(2000.0, 3000.0, 1.0)) ==
            Catch::Approx(292.38821852443834).margin(2e-4));
    REQUIRE(reference_price(kSlowRev, MarketSpec(2000.0, 4000.0, 1.0)) ==
            Catch::Approx(163.53835305548068).margin(2e-4));
  }
}

TEST_CASE("reference price degenerates to Black-Scholes as sigma -> 0", "[fourier][oracle]") {
  HestonParams p(2.0, 0.09, 1e-4, 0.0, 0.09);
  const double c = reference_price(p, MarketSpec(100.0, 110.0, 0.5));
  const double bs = testsup::bs_call(100.0, 110.0, 0.5, 0.3);
  REQUIRE(std::abs(c - bs) / bs < 1e-6);
}

TEST_CASE("reference price bounds and edge cases", "[fourier]") {
  SECTION("zero strike is the forward") {
    REQUIRE(reference_price(kSlowRev, MarketSpec(2000.0, 0.0, 1.0)) == 2000.0);
  }
  SECTION("deep strike stays inside arbitrage bounds") {
    const double c = reference_price(kSlowRev, MarketSpec(2000.0, 20000.0, 1.0));
    REQUIRE(c >= 0.0);
    REQUIRE(c <= 2000.0);
  }
  SECTION("monotone decreasing in strike") {
    double prev = 1e300;
    for (double k : {1800.0, 2000.0, 2400.0, 3200.0}) {
      const double c = reference_price(kSlowRev, MarketSpec(2000.0, k, 0.5));
      REQUIRE(c < prev);
      REQUIRE(c >= std::max(2000.0 - k, 0.0));
      prev = c;
    }
  }
}
