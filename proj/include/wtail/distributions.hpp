#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wtail/rng.hpp"
#include "wtail/sample.hpp"

namespace wtail {

enum class Family { Gamma, AbsGaussian, Weibull, HallD };

// H^{-1}(x) = x^(1/alpha) * (1 + x^(-beta)) for the Hall-type family;
// strictly increasing on (0, inf) whenever alpha*beta <= 1.
inline double hall_h_inverse(double alpha, double beta, double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("hall_h_inverse: x must be > 0");
    }
    return std::pow(x, 1.0 / alpha) * (1.0 + std::pow(x, -beta));
}

// A simulatable family together with its tail truth: theta, rho and the
// second-order bias function b(x). One instance per study distribution.
class DistributionSpec {
public:
    static DistributionSpec gamma(double shape, double rate) {
        require(shape > 0.0, "gamma: shape must be > 0");
        require(rate > 0.0, "gamma: rate must be > 0");
        return DistributionSpec(Family::Gamma, shape, rate);
    }

    static DistributionSpec abs_gaussian(double mean, double variance) {
        require(variance > 0.0, "absnormal: variance must be > 0");
        return DistributionSpec(Family::AbsGaussian, mean, variance);
    }

    static DistributionSpec weibull(double shape, double scale) {
        require(shape > 0.0, "weibull: shape must be > 0");
        require(scale > 0.0, "weibull: scale must be > 0");
        return DistributionSpec(Family::Weibull, shape, scale);
    }

    // Requires 0 < alpha, 0 < beta < 1 and alpha*beta <= 1.
    static DistributionSpec hall_d(double alpha, double beta) {
        require(alpha > 0.0, "halld: alpha must be > 0");
        require(beta > 0.0 && beta < 1.0, "halld: beta must be in (0,1)");
        require(alpha * beta <= 1.0, "halld: alpha*beta must be <= 1");
        return DistributionSpec(Family::HallD, alpha, beta);
    }

    // Accepts "gamma:0.25,1", "absnormal:0,1", "weibull:4,4", "halld:1,0.5".
    static DistributionSpec parse(std::string_view text);

    Family family() const noexcept { return family_; }
    double param1() const noexcept { return p1_; }
    double param2() const noexcept { return p2_; }

    double theta_true() const noexcept {
        switch (family_) {
            case Family::Gamma: return 1.0;
            case Family::AbsGaussian: return 0.5;
            case Family::Weibull: return 1.0 / p1_;
            case Family::HallD: return 1.0 / p1_;
        }
        return 0.0;
    }

    double rho_true() const noexcept {
        switch (family_) {
            case Family::Gamma: return -1.0;
            case Family::AbsGaussian: return -1.0;
            case Family::Weibull: return -std::numeric_limits<double>::infinity();
            case Family::HallD: return -p2_;
        }
        return 0.0;
    }

    // Second-order rate function b(x); identically zero for Weibull.
    // Defined for x > 0; the tail regime of interest is x -> infinity.
    double bias(double x) const {
        if (family_ == Family::Weibull) return 0.0;
        if (!(x > 0.0)) {
            throw std::domain_error("DistributionSpec::bias: x must be > 0");
        }
        switch (family_) {
            case Family::Gamma: return (1.0 - p1_) * std::log(x) / x;
            case Family::AbsGaussian: return 0.25 * std::log(x) / x;
            case Family::HallD: return -p2_ * std::pow(x, -p2_);
            case Family::Weibull: break;
        }
        return 0.0;
    }

    // Canonical spec string, e.g. "weibull:4,4".
    std::string name() const {
        return std::string(family_name()) + ":" + format_param(p1_) + "," + format_param(p2_);
    }

    // name() with ':' and ',' replaced by '_'; used in emitted file names.
    std::string file_tag() const {
        std::string tag = name();
        for (char& c : tag) {
            if (c == ':' || c == ',') c = '_';
        }
        return tag;
    }

private:
    DistributionSpec(Family family, double p1, double p2)
        : family_(family), p1_(p1), p2_(p2) {}

    static void require(bool ok, const char* message) {
        if (!ok) throw std::invalid_argument(message);
    }

    std::string_view family_name() const noexcept {
        switch (family_) {
            case Family::Gamma: return "gamma";
            case Family::AbsGaussian: return "absnormal";
            case Family::Weibull: return "weibull";
            case Family::HallD: return "halld";
        }
        return "?";
    }

    static std::string format_param(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return buf;
    }

    Family family_;
    double p1_;
    double p2_;
};

inline double true_bias(const DistributionSpec& spec, double x) { return spec.bias(x); }

// n i.i.d. draws, sorted ascending, all strictly positive. Weibull and
// HallD use the exact inverse transform of a standard exponential; zero
// draws (floating underflow) are rejected and redrawn.
inline Sample sample(const DistributionSpec& spec, std::size_t n, SeededStream stream) {
    if (n < 1) {
        throw std::invalid_argument("sample: n must be >= 1");
    }
    std::vector<double> values;
    values.reserve(n);
    const double p1 = spec.param1();
    const double p2 = spec.param2();
    while (values.size() < n) {
        double x = 0.0;
        switch (spec.family()) {
            case Family::Gamma:
                x = stream.gamma(p1) / p2;
                break;
            case Family::AbsGaussian:
                x = std::abs(p1 + std::sqrt(p2) * stream.normal());
                break;
            case Family::Weibull:
                x = p2 * std::pow(stream.exponential(), 1.0 / p1);
                break;
            case Family::HallD: {
                const double e = stream.exponential();
                x = std::pow(e, 1.0 / p1) * (1.0 + std::pow(e, -p2));
                break;
            }
        }
        if (x > 0.0) values.push_back(x);
    }
    std::sort(values.begin(), values.end());
    return Sample::from_sorted(std::move(values));
}

inline DistributionSpec DistributionSpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument(
            "distribution spec must be family:p1,p2 with family one of "
            "gamma, absnormal, weibull, halld");
    }
    const std::string_view family = text.substr(0, colon);
    const std::string_view params = text.substr(colon + 1);
    const auto comma = params.find(',');
    if (comma == std::string_view::npos) {
        throw std::invalid_argument("distribution spec needs two comma-separated parameters");
    }
    const auto to_double = [](std::string_view s) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(std::string(s), &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("distribution spec: bad number '" + std::string(s) + "'");
        }
        if (pos != s.size()) {
            throw std::invalid_argument("distribution spec: bad number '" + std::string(s) + "'");
        }
        return v;
    };
    const double p1 = to_double(params.substr(0, comma));
    const double p2 = to_double(params.substr(comma + 1));
    if (family == "gamma") return gamma(p1, p2);
    if (family == "absnormal") return abs_gaussian(p1, p2);
    if (family == "weibull") return weibull(p1, p2);
    if (family == "halld") return hall_d(p1, p2);
    throw std::invalid_argument("unknown family '" + std::string(family) +
                                "'; valid: gamma, absnormal, weibull, halld");
}

}  // namespace wtail
