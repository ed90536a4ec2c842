#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "wtail/estimators.hpp"
#include "wtail/sample.hpp"

namespace wtail {

// Extrapolation request: anchor order statistic X_{n-k+1,n} plus the fit to
// extrapolate with, targeting exceedance probability p (extrapolation regime
// is p < k/n).
struct QuantileRequest {
    double p = 0.0;
    TailFit fit;
    double anchor = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
};

inline QuantileRequest make_quantile_request(const Sample& sample, const TailFit& fit,
                                             double p) {
    const std::size_t n = sample.size();
    if (fit.n != n) {
        throw std::invalid_argument("make_quantile_request: fit computed on different n");
    }
    detail::check_k_range(fit.k, 1, n, "make_quantile_request");
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("make_quantile_request: p must lie in (0,1)");
    }
    return QuantileRequest{p, fit, sample.order_statistic(n - fit.k + 1), n, fit.k};
}

// Weissman-type extrapolation: anchor * (log(1/p) / log(n/k))^theta.
inline double quantile_weissman(const QuantileRequest& req) {
    if (!(req.p > 0.0) || !(req.p < 1.0)) {
        throw std::domain_error("quantile_weissman: p must lie in (0,1)");
    }
    if (!(req.anchor > 0.0) || req.k + 1 > req.n) {
        throw std::domain_error("quantile_weissman: invalid anchor or k");
    }
    const double u = std::log(1.0 / req.p) /
                     std::log(static_cast<double>(req.n) / static_cast<double>(req.k));
    return req.anchor * std::pow(u, req.fit.theta);
}

// Bias-reduced variant: multiplies the Weissman form (with the LS theta in
// req.fit) by exp(b_hat * (u^rho_hat - 1)/rho_hat). At the canonical
// rho_hat = -1 the correction is exp(b_hat * (1 - 1/u)).
inline double quantile_bias_reduced(const QuantileRequest& req, double b_hat,
                                    double rho_hat = -1.0) {
    if (!(rho_hat < 0.0)) {
        throw std::invalid_argument("quantile_bias_reduced: rho_hat must be < 0");
    }
    const double u = std::log(1.0 / req.p) /
                     std::log(static_cast<double>(req.n) / static_cast<double>(req.k));
    if (!(u > 0.0)) {
        throw std::domain_error("quantile_bias_reduced: log-ratio u must be > 0");
    }
    const double correction = std::exp(b_hat * (std::pow(u, rho_hat) - 1.0) / rho_hat);
    return quantile_weissman(req) * correction;
}

// N-year return level from exceedances collected over record_years: the
// exceedance rate is n/record_years per year, so the target probability is
// p = record_years / (years * n). Uses theta_check at the selected k and the
// Weissman form; the bias-reduced route refits LS at the selected k.
inline double return_level(const Sample& data, double years, double record_years,
                           const SelectionResult& selection, bool bias_reduced = false) {
    if (!(years > 0.0) || !(record_years > 0.0)) {
        throw std::domain_error("return_level: years and record_years must be > 0");
    }
    const std::size_t n = data.size();
    const double p = record_years / (years * static_cast<double>(n));
    if (!(p < 1.0)) {
        throw std::domain_error(
            "return_level: return period is shorter than the data resolution");
    }
    const std::size_t k = selection.k_hat;
    if (bias_reduced) {
        const TailFit ls = ls_fit(log_spacings(data, k));
        const QuantileRequest req = make_quantile_request(data, ls, p);
        return quantile_bias_reduced(req, *ls.b, ls.rho);
    }
    const TailFit fit{Method::Check, selection.theta_at_k_hat, std::nullopt, -1.0, k, n};
    return quantile_weissman(make_quantile_request(data, fit, p));
}

}  // namespace wtail
