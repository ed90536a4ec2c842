#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wtail/compensated.hpp"
#include "wtail/distributions.hpp"
#include "wtail/sample.hpp"

namespace wtail {

enum class Method { Tilde, Check, LeastSquares };

inline std::string_view method_name(Method m) noexcept {
    switch (m) {
        case Method::Tilde: return "tilde";
        case Method::Check: return "check";
        case Method::LeastSquares: return "ls";
    }
    return "?";
}

// One estimate record. b is present only for the least-squares fit, where
// theta = mean(Z) - b * mean(x) holds to rounding; rho is the canonical
// second-order choice substituted into the LS route.
struct TailFit {
    Method method = Method::Check;
    double theta = 0.0;
    std::optional<double> b;
    double rho = -1.0;
    std::size_t k = 0;
    std::size_t n = 0;
};

// Rescaled log-spacings Z_1..Z_k of the upper order statistics.
struct LogSpacings {
    std::vector<double> z;
    std::size_t n = 0;
    std::size_t k = 0;
};

struct SelectionResult {
    std::size_t k_hat = 0;
    std::vector<std::pair<std::size_t, double>> amse_curve;
    double theta_at_k_hat = 0.0;
};

namespace detail {

inline void check_k_range(std::size_t k, std::size_t k_min, std::size_t n, const char* where) {
    if (k < k_min || k + 1 > n) {
        throw std::out_of_range(std::string(where) + ": k=" + std::to_string(k) +
                                " outside [" + std::to_string(k_min) + ", " +
                                std::to_string(n - 1) + "]");
    }
}

}  // namespace detail

// Z_j = j * log(n/j) * (log X_{n-j+1,n} - log X_{n-j,n}), j = 1..k.
inline LogSpacings log_spacings(const Sample& sample, std::size_t k) {
    const std::size_t n = sample.size();
    detail::check_k_range(k, 1, n, "log_spacings");
    const auto& v = sample.values();
    LogSpacings out;
    out.n = n;
    out.k = k;
    out.z.resize(k);
    double log_upper = std::log(v[n - 1]);
    for (std::size_t j = 1; j <= k; ++j) {
        const double log_lower = std::log(v[n - j - 1]);
        out.z[j - 1] =
            static_cast<double>(j) * std::log(static_cast<double>(n) / static_cast<double>(j)) *
            (log_upper - log_lower);
        log_upper = log_lower;
    }
    return out;
}

// Ratio estimator built from upper order statistics against iterated-log
// spacings of their ranks.
inline TailFit theta_tilde(const Sample& sample, std::size_t k) {
    const std::size_t n = sample.size();
    detail::check_k_range(k, 2, n, "theta_tilde");
    const auto& v = sample.values();
    const double log_anchor = std::log(v[n - k]);
    const double loglog_k =
        std::log(std::log(static_cast<double>(n) / static_cast<double>(k)));
    CompensatedSum num;
    CompensatedSum den;
    for (std::size_t i = 1; i <= k; ++i) {
        num.add(std::log(v[n - i]) - log_anchor);
        den.add(std::log(std::log(static_cast<double>(n) / static_cast<double>(i))) - loglog_k);
    }
    if (den.value() == 0.0) {
        throw std::out_of_range("theta_tilde: degenerate denominator");
    }
    return TailFit{Method::Tilde, num.value() / den.value(), std::nullopt, -1.0, k, n};
}

// Mean of the log-spacings (the model's ML estimator when the bias term is
// ignored).
inline TailFit theta_check(const LogSpacings& zs) {
    if (zs.k < 1 || zs.z.size() != zs.k) {
        throw std::out_of_range("theta_check: need k >= 1 spacings");
    }
    CompensatedSum acc;
    for (double z : zs.z) acc.add(z);
    return TailFit{Method::Check, acc.value() / static_cast<double>(zs.k), std::nullopt, -1.0,
                   zs.k, zs.n};
}

// Regression design points x_j = log(n/k) / log(n/j), j = 1..k; strictly
// increasing with x_k = 1.
inline std::vector<double> design_points(std::size_t n, std::size_t k) {
    detail::check_k_range(k, 2, n, "design_points");
    const double log_nk = std::log(static_cast<double>(n) / static_cast<double>(k));
    std::vector<double> x(k);
    for (std::size_t j = 1; j <= k; ++j) {
        x[j - 1] = log_nk / std::log(static_cast<double>(n) / static_cast<double>(j));
    }
    return x;
}

// Least-squares fit of Z against the design points with the canonical
// rho = -1: b = sum_j (x_j - xbar) Z_j / sum_j (x_j - xbar)^2 and
// theta = Zbar - b * xbar.
inline TailFit ls_fit(const LogSpacings& zs) {
    if (zs.k < 2 || zs.z.size() != zs.k) {
        throw std::out_of_range("ls_fit: need k >= 2 spacings");
    }
    const std::vector<double> x = design_points(zs.n, zs.k);
    const double k = static_cast<double>(zs.k);
    CompensatedSum sx;
    CompensatedSum sz;
    for (std::size_t j = 0; j < zs.k; ++j) {
        sx.add(x[j]);
        sz.add(zs.z[j]);
    }
    const double xbar = sx.value() / k;
    const double zbar = sz.value() / k;
    CompensatedSum sxx;
    CompensatedSum sxz;
    for (std::size_t j = 0; j < zs.k; ++j) {
        const double dx = x[j] - xbar;
        sxx.add(dx * dx);
        sxz.add(dx * zs.z[j]);
    }
    const double b = sxz.value() / sxx.value();
    return TailFit{Method::LeastSquares, zbar - b * xbar, b, -1.0, zs.k, zs.n};
}

// Plug-in AMSE estimate for theta_check at k: theta_hat^2/k + (b_hat * xbar)^2.
inline double amse_hat(const TailFit& fit, std::size_t n, std::size_t k) {
    if (fit.method != Method::LeastSquares || !fit.b.has_value()) {
        throw std::invalid_argument("amse_hat: requires a least-squares fit");
    }
    if (fit.k != k || fit.n != n) {
        throw std::invalid_argument("amse_hat: fit was computed at different (n, k)");
    }
    const std::vector<double> x = design_points(n, k);
    CompensatedSum sx;
    for (double xj : x) sx.add(xj);
    const double xbar = sx.value() / static_cast<double>(k);
    const double variance = fit.theta * fit.theta / static_cast<double>(k);
    const double bias = *fit.b * xbar;
    return variance + bias * bias;
}

// True AMSE from the registry truth: theta^2/k plus the squared bias term
// b(log(n/k)) * mean_j (log(n/j)/log(n/k))^rho. Reduces to theta^2/k for
// Weibull families.
inline double amse_true(const DistributionSpec& spec, std::size_t n, std::size_t k) {
    detail::check_k_range(k, 1, n, "amse_true");
    const double theta = spec.theta_true();
    const double variance = theta * theta / static_cast<double>(k);
    if (spec.family() == Family::Weibull) {
        return variance;
    }
    const double rho = spec.rho_true();
    const double log_nk = std::log(static_cast<double>(n) / static_cast<double>(k));
    CompensatedSum sum;
    for (std::size_t j = 1; j <= k; ++j) {
        const double ratio =
            std::log(static_cast<double>(n) / static_cast<double>(j)) / log_nk;
        sum.add(std::pow(ratio, rho));
    }
    const double bias = spec.bias(log_nk) * sum.value() / static_cast<double>(k);
    return variance + bias * bias;
}

// Per-k traces of all three estimators plus the plug-in AMSE, computed in a
// single O(k_max) sweep from running moments. The entry at index k is the
// value at that k; entries below the first valid k are NaN.
struct TailCurves {
    std::size_t n = 0;
    std::size_t k_max = 0;
    std::vector<double> check;  // valid for k >= 1
    std::vector<double> tilde;  // valid for k >= 2
    std::vector<double> hat;    // valid for k >= 2
    std::vector<double> b;      // valid for k >= 2
    std::vector<double> amse;   // valid for k >= 2
};

inline TailCurves tail_curves(const Sample& sample, std::size_t k_max) {
    const std::size_t n = sample.size();
    detail::check_k_range(k_max, 1, n, "tail_curves");
    const auto& v = sample.values();
    const double nd = static_cast<double>(n);

    TailCurves out;
    out.n = n;
    out.k_max = k_max;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.check.assign(k_max + 1, nan);
    out.tilde.assign(k_max + 1, nan);
    out.hat.assign(k_max + 1, nan);
    out.b.assign(k_max + 1, nan);
    out.amse.assign(k_max + 1, nan);

    // Linear prefix sums are compensated; the centered second moments for
    // the LS slope use Welford updates. Both keep the per-k curve stable
    // enough that grid argmins do not depend on summation order.
    CompensatedSum sum_z;       // sum of Z_j
    CompensatedSum sum_logx;    // sum of log X_{n-i+1,n}
    CompensatedSum sum_loglog;  // sum of loglog(n/i)
    double wbar = 0.0;          // running mean of w_j = 1/log(n/j)
    double zbar = 0.0;          // running mean of Z_j
    double c_ww = 0.0;          // sum (w_j - wbar)^2
    double c_wz = 0.0;          // sum (w_j - wbar)(Z_j - zbar)

    double log_upper = std::log(v[n - 1]);
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double kd = static_cast<double>(k);
        const double log_nk = std::log(nd / kd);
        const double log_lower = std::log(v[n - k - 1]);
        const double z = kd * log_nk * (log_upper - log_lower);

        sum_z.add(z);
        sum_logx.add(log_upper);
        sum_loglog.add(std::log(log_nk));

        const double w = 1.0 / log_nk;
        const double dw = w - wbar;
        const double dz = z - zbar;
        wbar += dw / kd;
        zbar += dz / kd;
        c_ww += dw * (w - wbar);
        c_wz += dw * (z - zbar);

        out.check[k] = sum_z.value() / kd;
        if (k >= 2) {
            const double num = sum_logx.value() - kd * log_upper;
            const double den = sum_loglog.value() - kd * std::log(log_nk);
            out.tilde[k] = num / den;

            const double b_hat = c_wz / (log_nk * c_ww);
            const double xbar = log_nk * wbar;
            const double theta_hat = out.check[k] - b_hat * xbar;
            out.hat[k] = theta_hat;
            out.b[k] = b_hat;
            const double bias = b_hat * xbar;
            out.amse[k] = theta_hat * theta_hat / kd + bias * bias;
        }
        log_upper = log_lower;
    }
    return out;
}

// Adaptive choice of k: minimize the plug-in AMSE over [k_min, k_max],
// breaking ties toward the smallest k, and report theta_check there.
inline SelectionResult select_k(const Sample& sample, std::size_t k_min, std::size_t k_max) {
    const std::size_t n = sample.size();
    if (k_min < 2 || k_min > k_max || k_max + 1 > n) {
        throw std::out_of_range("select_k: need 2 <= k_min <= k_max <= n-1");
    }
    const TailCurves curves = tail_curves(sample, k_max);
    SelectionResult result;
    result.amse_curve.reserve(k_max - k_min + 1);
    std::size_t best_k = k_min;
    double best = curves.amse[k_min];
    for (std::size_t k = k_min; k <= k_max; ++k) {
        const double a = curves.amse[k];
        result.amse_curve.emplace_back(k, a);
        if (a < best) {
            best = a;
            best_k = k;
        }
    }
    result.k_hat = best_k;
    result.theta_at_k_hat = curves.check[best_k];
    return result;
}

}  // namespace wtail
