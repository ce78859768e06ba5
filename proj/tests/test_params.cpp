#include <doctest.h>

#include <cmath>

#include <string>

#include "mdw/errors.hpp"
#include "mdw/params.hpp"

using namespace mdw;

TEST_SUITE("params") {
  TEST_CASE("valid parameters") {
    const Params p = validate_params(0.3, 0.05);
    CHECK(p.alpha() == 0.3);
    CHECK(p.beta() == 0.05);
    CHECK_NOTHROW(validate_params(0.49, 0.0));
  }

  TEST_CASE("violations name the inequality") {
    auto message = [](double a, double b) {
      try {
        validate_params(a, b);
      } catch (const ParamError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message(0.6, 0.0).find("alpha + 2*beta < 1/2") != std::string::npos);
    CHECK(message(0.3, 0.1).find("alpha + 2*beta < 1/2") != std::string::npos);
    CHECK(message(0.0, 0.1).find("alpha > 0") != std::string::npos);
    CHECK(message(0.2, -0.01).find("beta >= 0") != std::string::npos);
    CHECK_THROWS_AS(validate_params(std::nan(""), 0.0), ParamError);
  }

  TEST_CASE("forward and inverse window maps") {
    const ScaleWindow w = window_from_params(validate_params(0.3, 0.05));
    CHECK(w.u == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w.v == doctest::Approx(0.4).epsilon(1e-15));

    const Params p = params_from_window(0.25, 0.4);
    CHECK(p.alpha() == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(p.beta() == doctest::Approx(0.05).epsilon(1e-15));

    const Params q = params_from_window(0.1, 0.15);
    CHECK(q.alpha() == doctest::Approx(0.65 / 6.0).epsilon(1e-15));
    CHECK(q.beta() == doctest::Approx(0.175).epsilon(1e-15));
  }

  TEST_CASE("round trip over a grid, with u < alpha < v") {
    for (double u = 0.02; u < 0.5; u += 0.04) {
      for (double v = u + 0.01; v <= 0.5; v += 0.03) {
        const Params p = params_from_window(u, v);
        const ScaleWindow w = window_from_params(p);
        CHECK(w.u == doctest::Approx(u).epsilon(1e-12));
        CHECK(w.v == doctest::Approx(v).epsilon(1e-12));
        CHECK(w.u < p.alpha());
        CHECK(p.alpha() < w.v);
      }
    }
  }

  TEST_CASE("inverse map rejects bad orderings") {
    CHECK_THROWS_AS(params_from_window(0.4, 0.25), DomainError);
    CHECK_THROWS_AS(params_from_window(0.0, 0.25), DomainError);
    CHECK_THROWS_AS(params_from_window(0.2, 0.6), DomainError);
    CHECK_THROWS_AS(params_from_window(0.2, 0.2), DomainError);
  }

  TEST_CASE("window sets") {
    const WindowSet ws({{0.1, 0.15}, {0.25, 0.4}});
    CHECK(ws.size() == 2);
    CHECK(ws.contains(0.12));
    CHECK(ws.contains(0.3));
    CHECK_FALSE(ws.contains(0.2));
    CHECK_FALSE(ws.contains(0.1));
    CHECK(ws.is_endpoint(0.15));
    CHECK(ws.is_endpoint(0.4));
    CHECK_FALSE(ws.is_endpoint(0.3));
    CHECK(WindowSet({}).empty());

    CHECK_THROWS_AS(WindowSet({{0.25, 0.4}, {0.1, 0.15}}), DomainError);
    CHECK_THROWS_AS(WindowSet({{0.1, 0.3}, {0.25, 0.4}}), DomainError);
    CHECK_THROWS_AS(WindowSet({{0.1, 0.25}, {0.25, 0.4}}), DomainError);
    CHECK_THROWS_AS(WindowSet({{0.3, 0.2}}), DomainError);
    CHECK_THROWS_AS(WindowSet({{0.3, 0.55}}), DomainError);
  }
}
