#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "mdw/errors.hpp"
#include "mdw/tail_oracles.hpp"

using namespace mdw;

TEST_SUITE("tail_oracles") {
  TEST_CASE("wilson interval against reference values") {
    TailEstimate e = wilson_interval(20, 100, 0.95);
    CHECK(e.p_hat == doctest::Approx(0.2));
    CHECK(e.ci_low == doctest::Approx(0.1333669333310325).epsilon(1e-9));
    CHECK(e.ci_high == doctest::Approx(0.2888291655931589).epsilon(1e-9));

    e = wilson_interval(3, 10000, 0.999);
    CHECK(e.ci_low == doctest::Approx(5.5303155303477796e-05).epsilon(1e-8));
    CHECK(e.ci_high == doctest::Approx(0.0016256334165667336).epsilon(1e-8));

    e = wilson_interval(0, 1000, 0.95);
    CHECK(e.ci_low == 0.0);
    CHECK(e.ci_high == doctest::Approx(1.0 - std::pow(0.05, 1.0 / 1000.0)).epsilon(1e-12));
    CHECK(e.ci_high == doctest::Approx(3.0 / 1000.0).epsilon(0.01));

    e = wilson_interval(50, 50, 0.95);
    CHECK(e.ci_high == 1.0);
    CHECK(e.ci_low < 1.0);
    CHECK_THROWS_AS(wilson_interval(5, 4, 0.95), DomainError);
    CHECK_THROWS_AS(wilson_interval(1, 4, 1.0), DomainError);
  }

  TEST_CASE("tail target names") {
    for (auto t : {TailTarget::total, TailTarget::tilde, TailTarget::boundary, TailTarget::double_prime}) {
      CHECK(parse_tail_target(to_string(t)) == t);
    }
    CHECK(parse_tail_target("dprime") == TailTarget::double_prime);
    CHECK_THROWS_AS(parse_tail_target("bogus"), DomainError);
  }

  TEST_CASE("boundary tail oracle against direct state enumeration") {
    // P[S''_n > x], summed over (A_n, B_n) in an independent script (N = 2e4)
    const Params p = validate_params(0.3, 0.05);
    struct Ref {
      std::int64_t n;
      double x;
      double prob;
    };
    // truncation leaves at most exp(-(2e4)^0.3) / 2 < 2e-9 unaccounted
    for (const Ref& r : {Ref{50, 0.5, 0.1762120379513213}, Ref{50, 1.0, 0.10120498946551323},
                         Ref{200, 2.0, 0.06805716446161263}, Ref{200, 5.0, 0.019503571485555763}}) {
      const double lp = boundary_tail_exact(p, r.n, r.x);
      CHECK(std::exp(lp) == doctest::Approx(r.prob).epsilon(1e-7).scale(0.0));
      CHECK(std::abs(std::exp(lp) - r.prob) < 3e-9);
    }
  }

  TEST_CASE("boundary tail oracle is exactly zero beyond the deterministic bound") {
    const Params p = validate_params(0.3, 0.05);
    CHECK(boundary_term_bound(p, 1000) == doctest::Approx(std::pow(1000.0, 0.9)));
    CHECK(boundary_sum_bound(p, 1000) == doctest::Approx(2.0 * std::pow(500.0, 0.9)));
    CHECK(std::floor(boundary_sum_bound(p, 1000)) == 537.0);
    CHECK(boundary_tail_exact(p, 1000, boundary_term_bound(p, 1000)) == neg_inf);
    CHECK(boundary_tail_exact(p, 1000, 600.0) == neg_inf);
    CHECK(std::isfinite(boundary_tail_exact(p, 1000, 50.0)));
    CHECK_THROWS_AS(boundary_tail_exact(p, 1000, 0.0), DomainError);
  }

  TEST_CASE("boundary tail oracle is monotone in x") {
    const Params p = validate_params(0.3, 0.05);
    double prev = 0.0;
    for (double x : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
      const double lp = boundary_tail_exact(p, 1000, x);
      CHECK(lp < prev);
      prev = lp;
    }
  }

  TEST_CASE("case-2 certificate construction") {
    const Params p = validate_params(0.3, 0.05);
    const RateQuery q{1'000'000, 0.32, 1.0};
    const RateCertificate cert = case2_certificate(p, q);
    CHECK(cert.kind == CertificateKind::case2_lower);
    CHECK(cert.a_n + cert.b_n == cert.c_n);
    CHECK(cert.a_n < q.n);
    // the whole reward block of the end excursion is inside the window
    CHECK(cert.a_n * cert.a_n > cert.c_n);
    CHECK(cert.magnitude > cert.threshold);
    CHECK(cert.threshold == doctest::Approx(std::pow(1e6, 0.82)));
    CHECK(cert.log_prob ==
          doctest::Approx(std::log(0.25) + log_mu_real(p, static_cast<double>(cert.c_n))));
    CHECK(cert.rate == doctest::Approx(cert.log_prob / std::pow(1e6, 0.64)));
    CHECK(cert.log_prob < 0.0);
  }

  TEST_CASE("case-2 certificate domain and empty brackets") {
    const Params p = validate_params(0.3, 0.05);
    CHECK_THROWS_AS(case2_certificate(p, {1000, 0.2, 1.0}), DomainError);
    CHECK_THROWS_AS(case2_certificate(p, {1000, 0.45, 1.0}), DomainError);
    CHECK_THROWS_AS(case2_certificate(p, {1000, 0.25, 1.0}), DomainError);
    bool thrown = false;
    try {
      case2_certificate(p, {10, 0.3, 3.0});
    } catch (const BracketEmpty& e) {
      thrown = true;
      CHECK(e.minimal_n() > 1'000'000'000);
      const auto m = static_cast<std::int64_t>(e.minimal_n());
      CHECK_NOTHROW(case2_certificate(p, {m, 0.3, 3.0}));
      CHECK_THROWS_AS(case2_certificate(p, {m - 1, 0.3, 3.0}), BracketEmpty);
    }
    CHECK(thrown);
    // next to the window edge the margin is too thin for any 64-bit horizon
    try {
      case2_certificate(p, {10, 0.26, 3.0});
      CHECK(false);
    } catch (const BracketEmpty& e) {
      CHECK(e.minimal_n() == 0);
    }
  }

  TEST_CASE("case-2 rates match the golden file") {
    std::ifstream in(MDW_GOLDEN_DIR "/case2_rates.csv");
    REQUIRE(in);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,gamma,c,c_n,log_prob,rate");
    const Params p = validate_params(0.3, 0.05);
    int rows = 0;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string field;
      std::vector<std::string> f;
      while (std::getline(ss, field, ',')) f.push_back(field);
      REQUIRE(f.size() == 6);
      const RateQuery q{std::stoll(f[0]), std::stod(f[1]), std::stod(f[2])};
      const RateCertificate cert = case2_certificate(p, q);
      CHECK(to_string(cert.c_n) == f[3]);
      CHECK(cert.log_prob == doctest::Approx(std::stod(f[4])).epsilon(1e-10));
      CHECK(cert.rate == doctest::Approx(std::stod(f[5])).epsilon(1e-10));
      ++rows;
    }
    CHECK(rows == 4);
  }

  TEST_CASE("case-1 upper bound") {
    const Params p = validate_params(0.3, 0.05);
    const RateQuery q{1'000'000'000'000, 0.15, 1.0};
    const RateCertificate cert = case1_upper(p, q);
    const double x = 0.5 * std::pow(1e12, 0.65);
    const double k = std::floor(std::pow(x, 1.0 / 0.45));
    CHECK(cert.log_prob == doctest::Approx(std::log(2.0) - std::pow(k, 0.3)));
    CHECK(cert.rate == doctest::Approx(cert.log_prob / std::pow(1e12, 0.3)));
    CHECK_THROWS_AS(case1_upper(p, {1000, 0.3, 1.0}), DomainError);
    // tiny thresholds give the trivial bound
    CHECK(case1_upper(p, {1, 0.1, 0.01}).log_prob == 0.0);
  }

  TEST_CASE("rate transform and references") {
    CHECK(rate_transform(-10.0, 100, 0.25) == doctest::Approx(-1.0));
    CHECK(rate_transform(0.0, 100, 0.25) == 0.0);
    CHECK(gaussian_reference(2.0) == -2.0);
  }

  TEST_CASE("predicted rate by window membership") {
    const WindowSet ws({{0.25, 0.4}});
    CHECK(predicted_rate(ws, 0.3, 1.0) == 0.0);
    CHECK(predicted_rate(ws, 0.1, 2.0) == -2.0);
    CHECK(predicted_rate(ws, 0.45, 1.0) == -0.5);
    CHECK_THROWS_AS(predicted_rate(ws, 0.25, 1.0), DomainError);
    CHECK_THROWS_AS(predicted_rate(ws, 0.4, 1.0), DomainError);
    CHECK_THROWS_AS(predicted_rate(ws, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(predicted_rate(ws, 0.0, 1.0), DomainError);
  }

  TEST_CASE("exact autocovariance against reference values") {
    const Params p = validate_params(0.3, 0.05);
    const std::pair<std::int64_t, double> refs[] = {
        {0, 0.15176420866122255416}, {1, 0.036209030740173120097}, {2, 0.010744905664367378181}, {5, 0.0013061994434086601276}, {10, 0.00014508057997427353883}};
    for (const auto& [k, ref] : refs) {
      const SeriesValue r = autocovariance_exact(p, k, 1e-12);
      CHECK(r.error_bound <= 1e-12);
      CHECK(std::abs(r.value - ref) <= r.error_bound + 1e-14);
    }
  }

  TEST_CASE("autocovariance is dominated and sums to the variance constant") {
    const Params p = validate_params(0.3, 0.05);
    double total = autocovariance_exact(p, 0, 1e-12).value;
    for (std::int64_t k = 1; k <= 200; ++k) {
      const double r = autocovariance_exact(p, k, 1e-12).value;
      CHECK(r >= 0.0);
      CHECK(r <= autocovariance_dominance_bound(p, k));
      total += 2.0 * r;
    }
    const double sigma2 = std::pow(sigma(p, 1e-12).sigma, 2);
    CHECK(total == doctest::Approx(sigma2).epsilon(1e-9));
    CHECK_THROWS_AS(autocovariance_dominance_bound(p, 0), DomainError);
  }

  TEST_CASE("Monte Carlo tail estimates are deterministic per seed and shards") {
    const Params p = validate_params(0.3, 0.05);
    const std::vector<double> xs{1.0, 5.0, 20.0};
    const McPlan plan{4000, 0.95, 77, 3};
    const auto a = mc_tail_grid(p, 300, xs, TailTarget::total, plan);
    const auto b = mc_tail_grid(p, 300, xs, TailTarget::total, plan);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(a[i].hits == b[i].hits);
      CHECK(a[i].reps == 4000);
      CHECK(a[i].ci_low <= a[i].p_hat);
      CHECK(a[i].p_hat <= a[i].ci_high);
      if (i > 0) CHECK(a[i].hits <= a[i - 1].hits);
    }
    const TailEstimate single = mc_tail(p, {300, 0.1, 1.0}, TailTarget::tilde, {2000, 0.95, 1, 1});
    CHECK(single.reps == 2000);
  }
}
