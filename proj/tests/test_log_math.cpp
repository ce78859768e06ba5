#include <doctest.h>

#include <cmath>

#include "mdw/log_math.hpp"

using namespace mdw;

TEST_SUITE("log_math") {
  TEST_CASE("log1mexp matches the naive formula where the latter is accurate") {
    for (double d : {0.01, 0.3, 0.7, 1.0, 5.0, 20.0}) {
      CHECK(log1mexp(d) == doctest::Approx(std::log(1.0 - std::exp(-d))).epsilon(1e-12));
    }
  }

  TEST_CASE("log1mexp stays accurate at the extremes") {
    CHECK(log1mexp(1e-20) == doctest::Approx(std::log(1e-20)).epsilon(1e-12));
    CHECK(log1mexp(800.0) == 0.0);
    CHECK(log1mexp(0.0) == neg_inf);
  }

  TEST_CASE("log_diff_exp_neg") {
    CHECK(log_diff_exp_neg(1.0, 2.0) ==
          doctest::Approx(std::log(std::exp(-1.0) - std::exp(-2.0))).epsilon(1e-13));
    // far beyond double range of exp
    CHECK(log_diff_exp_neg(1000.0, 1001.0) ==
          doctest::Approx(-1000.0 + std::log(1.0 - std::exp(-1.0))).epsilon(1e-15));
  }

  TEST_CASE("pow_gap avoids cancellation") {
    const double lo = 1e12;
    const double gap = pow_gap(lo, lo + 1.0, 0.3);
    // derivative 0.3 lo^{-0.7}
    CHECK(gap == doctest::Approx(0.3 * std::pow(lo, -0.7)).epsilon(1e-9));
    CHECK(pow_gap(0.0, 8.0, 1.0 / 3.0) == doctest::Approx(2.0));
  }

  TEST_CASE("log_add_exp and LogSum") {
    CHECK(log_add_exp(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
    CHECK(log_add_exp(neg_inf, 1.5) == 1.5);
    CHECK(log_add_exp(-1e308, neg_inf) == -1e308);
    LogSum s;
    CHECK(s.value() == neg_inf);
    for (int i = 1; i <= 4; ++i) s.add(std::log(static_cast<double>(i)));
    CHECK(s.value() == doctest::Approx(std::log(10.0)));
    LogSum tiny;
    tiny.add(-2000.0);
    tiny.add(-2000.0);
    CHECK(tiny.value() == doctest::Approx(-2000.0 + std::log(2.0)));
  }

  TEST_CASE("integer square roots are exact") {
    for (std::uint64_t r : {0ULL, 1ULL, 2ULL, 31622ULL, 3037000499ULL}) {
      CHECK(isqrt(r * r) == r);
      if (r > 0) CHECK(isqrt(r * r - 1) == r - 1);
    }
    CHECK(isqrt(~std::uint64_t{0}) == 4294967295ULL);

    const int128 big = static_cast<int128>(316227766016ULL) * 316227766016ULL;
    CHECK(isqrt(big) == static_cast<int128>(316227766016ULL));
    CHECK(isqrt(big - 1) == static_cast<int128>(316227766015ULL));
  }

  TEST_CASE("int128 formatting") {
    int128 x = 1;
    for (int i = 0; i < 23; ++i) x *= 10;
    CHECK(to_string(x) == "100000000000000000000000");
    CHECK(to_string(-x) == "-100000000000000000000000");
    CHECK(to_string(int128{0}) == "0");
  }
}
