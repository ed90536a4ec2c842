#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wtail/distributions.hpp"
#include "wtail/estimators.hpp"
#include "wtail/quantiles.hpp"
#include "wtail/rng.hpp"
#include "wtail/sample.hpp"

using wtail::DistributionSpec;
using wtail::Method;
using wtail::QuantileRequest;
using wtail::Sample;
using wtail::SeededStream;
using wtail::TailFit;

namespace {
constexpr std::uint64_t kSeed = 5150ULL;

QuantileRequest direct_request(double p, double theta, double anchor, std::size_t n,
                               std::size_t k) {
    return QuantileRequest{p, TailFit{Method::Check, theta, std::nullopt, -1.0, k, n}, anchor,
                           n, k};
}
}  // namespace

TEST_CASE("weissman quantile with exact logs") {
    // theta = 1, anchor = 10, n = 100, k = 10, p = 1e-3: u = log(1e3)/log(10) = 3.
    const auto req = direct_request(1e-3, 1.0, 10.0, 100, 10);
    CHECK(wtail::quantile_weissman(req) == Catch::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("no extrapolation at p = k/n") {
    const auto req = direct_request(10.0 / 100.0, 0.77, 12.5, 100, 10);
    CHECK(wtail::quantile_weissman(req) == Catch::Approx(12.5).epsilon(1e-12));

    // The bias-reduced correction also collapses at u = 1.
    CHECK(wtail::quantile_bias_reduced(req, 0.4) == Catch::Approx(12.5).epsilon(1e-12));
}

TEST_CASE("bias-reduced quantile evaluates the exponential correction") {
    const auto req = direct_request(1e-3, 1.0, 10.0, 100, 10);
    // u = 3, rho = -1: 30 * exp(0.5 * (1 - 1/3)) = 30 * exp(1/3).
    CHECK(wtail::quantile_bias_reduced(req, 0.5) ==
          Catch::Approx(30.0 * std::exp(1.0 / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(wtail::quantile_bias_reduced(req, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(wtail::quantile_bias_reduced(req, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("a zero bias estimate reduces to the Weissman form") {
    SeededStream stream(kSeed, 0);
    const Sample s = wtail::sample(DistributionSpec::weibull(4.0, 4.0), 300, stream);
    const TailFit ls = wtail::ls_fit(wtail::log_spacings(s, 80));
    for (double p : {1e-2, 1e-3, 1e-5}) {
        const auto req = wtail::make_quantile_request(s, ls, p);
        CHECK(wtail::quantile_bias_reduced(req, 0.0) ==
              Catch::Approx(wtail::quantile_weissman(req)).epsilon(1e-12));
    }
}

TEST_CASE("quantile estimators reject probabilities outside (0,1)") {
    const auto req_lo = direct_request(0.5, 1.0, 10.0, 100, 10);
    QuantileRequest bad = req_lo;
    bad.p = 0.0;
    CHECK_THROWS_AS(wtail::quantile_weissman(bad), std::domain_error);
    bad.p = 1.0;
    CHECK_THROWS_AS(wtail::quantile_weissman(bad), std::domain_error);
    bad.p = -0.25;
    CHECK_THROWS_AS(wtail::quantile_weissman(bad), std::domain_error);
    CHECK_THROWS_AS(wtail::make_quantile_request(
                        Sample::from_sorted({1.0, 2.0, 3.0}),
                        TailFit{Method::Check, 1.0, std::nullopt, -1.0, 2, 3}, 1.5),
                    std::domain_error);
}

TEST_CASE("both estimators decrease in p") {
    SeededStream stream(kSeed, 1);
    const Sample s = wtail::sample(DistributionSpec::gamma(4.0, 1.0), 400, stream);
    const TailFit ls = wtail::ls_fit(wtail::log_spacings(s, 60));
    double prev_w = std::numeric_limits<double>::infinity();
    double prev_b = std::numeric_limits<double>::infinity();
    for (double p = 1e-7; p < 0.15; p *= 10.0) {
        const auto req = wtail::make_quantile_request(s, ls, p);
        const double w = wtail::quantile_weissman(req);
        const double b = wtail::quantile_bias_reduced(req, *ls.b);
        REQUIRE(w < prev_w);
        REQUIRE(b < prev_b);
        prev_w = w;
        prev_b = b;
    }
}

TEST_CASE("quantiles scale with the sample") {
    SeededStream stream(kSeed, 2);
    const Sample s = wtail::sample(DistributionSpec::abs_gaussian(0.0, 1.0), 250, stream);
    std::vector<double> scaled;
    for (double v : s.values()) scaled.push_back(42.0 * v);
    const Sample cs = Sample::from_sorted(scaled);

    const std::size_t k = 50;
    const double p = 1e-4;
    const TailFit f0 = wtail::theta_check(wtail::log_spacings(s, k));
    const TailFit f1 = wtail::theta_check(wtail::log_spacings(cs, k));
    const double q0 = wtail::quantile_weissman(wtail::make_quantile_request(s, f0, p));
    const double q1 = wtail::quantile_weissman(wtail::make_quantile_request(cs, f1, p));
    CHECK(q1 == Catch::Approx(42.0 * q0).epsilon(1e-12));
}

TEST_CASE("return level maps the return period to an exceedance probability") {
    // n = 154 exceedances over 35 years, 100-year level: p = 35/15400.
    SeededStream stream(kSeed, 3);
    const Sample s = wtail::sample(DistributionSpec::weibull(1.0, 30.0), 154, stream);
    const auto sel = wtail::select_k(s, 2, 153);

    const double level = wtail::return_level(s, 100.0, 35.0, sel);
    const double p = 35.0 / (100.0 * 154.0);
    const TailFit fit{Method::Check, sel.theta_at_k_hat, std::nullopt, -1.0, sel.k_hat,
                      s.size()};
    const double expected =
        wtail::quantile_weissman(wtail::make_quantile_request(s, fit, p));
    CHECK(level == Catch::Approx(expected).epsilon(1e-15));

    // Return period chosen so that p = k_hat/n gives back the anchor.
    const double years_at_anchor =
        35.0 / (static_cast<double>(sel.k_hat) / 154.0 * 154.0);
    const double anchor = s.order_statistic(s.size() - sel.k_hat + 1);
    CHECK(wtail::return_level(s, years_at_anchor, 35.0, sel) ==
          Catch::Approx(anchor).epsilon(1e-12));

    CHECK_THROWS_AS(wtail::return_level(s, 0.1, 35.0, sel), std::domain_error);
    CHECK_THROWS_AS(wtail::return_level(s, -5.0, 35.0, sel), std::domain_error);
}

TEST_CASE("bias-reduced return level refits at the selected k") {
    SeededStream stream(kSeed, 4);
    const Sample s = wtail::sample(DistributionSpec::gamma(0.25, 1.0), 300, stream);
    const auto sel = wtail::select_k(s, 2, 299);
    const double plain = wtail::return_level(s, 100.0, 35.0, sel);
    const double reduced = wtail::return_level(s, 100.0, 35.0, sel, true);
    CHECK(plain > 0.0);
    CHECK(reduced > 0.0);

    const TailFit ls = wtail::ls_fit(wtail::log_spacings(s, sel.k_hat));
    const double p = 35.0 / (100.0 * 300.0);
    const auto req = wtail::make_quantile_request(s, ls, p);
    CHECK(reduced ==
          Catch::Approx(wtail::quantile_bias_reduced(req, *ls.b, ls.rho)).epsilon(1e-15));
}
