#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <vector>

#include "wtail/compensated.hpp"
#include "wtail/distributions.hpp"
#include "wtail/estimators.hpp"
#include "wtail/io.hpp"
#include "wtail/rng.hpp"

namespace wtail {

struct SimulationConfig {
    DistributionSpec spec;
    std::size_t n = 500;
    std::size_t replications = 100;
    std::size_t k_curve_max = 360;
    std::size_t k_min = 2;
    std::size_t k_sel_max = 350;
    std::uint64_t master_seed = 0;
    unsigned workers = 0;  // 0 = hardware concurrency

    void validate() const {
        if (replications < 1) {
            throw std::invalid_argument("SimulationConfig: replications must be >= 1");
        }
        if (k_curve_max < 2 || k_curve_max + 1 > n) {
            throw std::invalid_argument("SimulationConfig: need 2 <= k_curve_max <= n-1");
        }
        if (k_min < 2 || k_min > k_sel_max || k_sel_max + 1 > n) {
            throw std::invalid_argument("SimulationConfig: need 2 <= k_min <= k_sel_max <= n-1");
        }
    }
};

// Per-k mean and MSE curves over k = 2..k_curve_max (index by k; entries
// below 2 are NaN).
struct CurveReport {
    std::size_t n = 0;
    std::size_t k_curve_max = 0;
    std::vector<double> mean_hat, mean_tilde, mean_check;
    std::vector<double> mse_hat, mse_tilde, mse_check;
};

struct AdaptiveSummary {
    double mu_k_hat = 0.0;
    double sigma_k_hat = 0.0;
    double mu_theta_check = 0.0;
    double sigma_theta_check = 0.0;
    double r_n = 0.0;
    std::size_t k_opt = 0;
};

struct SimulationReport {
    CurveReport curves;
    AdaptiveSummary adaptive;
};

// argmin over [k_min, k_max] of the true AMSE; smallest k on ties.
// Deterministic: depends only on (spec, n, grid).
inline std::size_t k_opt(const DistributionSpec& spec, std::size_t n, std::size_t k_min,
                         std::size_t k_max) {
    if (k_min < 1 || k_min > k_max || k_max + 1 > n) {
        throw std::out_of_range("k_opt: need 1 <= k_min <= k_max <= n-1");
    }
    std::size_t best_k = k_min;
    double best = amse_true(spec, n, k_min);
    for (std::size_t k = k_min + 1; k <= k_max; ++k) {
        const double a = amse_true(spec, n, k);
        if (a < best) {
            best = a;
            best_k = k;
        }
    }
    return best_k;
}

namespace detail {

// Everything the reductions need, kept per replication so that results are
// independent of the worker schedule: replication i always consumes stream i
// and aggregation runs in index order afterwards.
struct ReplicationTraces {
    std::size_t k_all = 0;
    std::vector<double> check, tilde, hat;  // flattened [replication][k]
    std::vector<std::size_t> k_hat;
    std::vector<double> theta_at_k_hat;
};

inline ReplicationTraces run_replications(const SimulationConfig& config) {
    const std::size_t N = config.replications;
    const std::size_t k_all = std::max(config.k_curve_max, config.k_sel_max);
    ReplicationTraces traces;
    traces.k_all = k_all;
    traces.check.resize(N * (k_all + 1));
    traces.tilde.resize(N * (k_all + 1));
    traces.hat.resize(N * (k_all + 1));
    traces.k_hat.resize(N);
    traces.theta_at_k_hat.resize(N);

    const auto run_one = [&](std::size_t i) {
        SeededStream stream(config.master_seed, i);
        const Sample draw = sample(config.spec, config.n, stream);
        const TailCurves curves = tail_curves(draw, k_all);
        const std::size_t row = i * (k_all + 1);
        std::copy(curves.check.begin(), curves.check.end(), traces.check.begin() + row);
        std::copy(curves.tilde.begin(), curves.tilde.end(), traces.tilde.begin() + row);
        std::copy(curves.hat.begin(), curves.hat.end(), traces.hat.begin() + row);

        std::size_t best_k = config.k_min;
        double best = curves.amse[config.k_min];
        for (std::size_t k = config.k_min; k <= config.k_sel_max; ++k) {
            if (curves.amse[k] < best) {
                best = curves.amse[k];
                best_k = k;
            }
        }
        traces.k_hat[i] = best_k;
        traces.theta_at_k_hat[i] = curves.check[best_k];
    };

    unsigned workers = config.workers;
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, N));

    if (workers <= 1) {
        for (std::size_t i = 0; i < N; ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < N; i += workers) run_one(i);
            });
        }
        for (auto& th : pool) th.join();
    }
    return traces;
}

}  // namespace detail

// One pass over the replications delivering both the Hill-type curves and
// the adaptive-selection summary.
inline SimulationReport run_study(const SimulationConfig& config) {
    config.validate();
    const std::size_t N = config.replications;
    const double theta = config.spec.theta_true();
    const detail::ReplicationTraces traces = detail::run_replications(config);
    const std::size_t stride = traces.k_all + 1;

    SimulationReport report;
    CurveReport& curves = report.curves;
    curves.n = config.n;
    curves.k_curve_max = config.k_curve_max;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (auto* arr : {&curves.mean_hat, &curves.mean_tilde, &curves.mean_check,
                      &curves.mse_hat, &curves.mse_tilde, &curves.mse_check}) {
        arr->assign(config.k_curve_max + 1, nan);
    }
    for (std::size_t k = 2; k <= config.k_curve_max; ++k) {
        CompensatedSum m_hat, m_tilde, m_check, e_hat, e_tilde, e_check;
        for (std::size_t i = 0; i < N; ++i) {
            const double th_hat = traces.hat[i * stride + k];
            const double th_tilde = traces.tilde[i * stride + k];
            const double th_check = traces.check[i * stride + k];
            m_hat.add(th_hat);
            m_tilde.add(th_tilde);
            m_check.add(th_check);
            e_hat.add((th_hat - theta) * (th_hat - theta));
            e_tilde.add((th_tilde - theta) * (th_tilde - theta));
            e_check.add((th_check - theta) * (th_check - theta));
        }
        const double dn = static_cast<double>(N);
        curves.mean_hat[k] = m_hat.value() / dn;
        curves.mean_tilde[k] = m_tilde.value() / dn;
        curves.mean_check[k] = m_check.value() / dn;
        curves.mse_hat[k] = e_hat.value() / dn;
        curves.mse_tilde[k] = e_tilde.value() / dn;
        curves.mse_check[k] = e_check.value() / dn;
    }

    AdaptiveSummary& adaptive = report.adaptive;
    CompensatedSum sum_k, sum_theta;
    for (std::size_t i = 0; i < N; ++i) {
        sum_k.add(static_cast<double>(traces.k_hat[i]));
        sum_theta.add(traces.theta_at_k_hat[i]);
    }
    const double dn = static_cast<double>(N);
    adaptive.mu_k_hat = sum_k.value() / dn;
    adaptive.mu_theta_check = sum_theta.value() / dn;
    CompensatedSum var_k, var_theta, selected_sse;
    for (std::size_t i = 0; i < N; ++i) {
        const double dk = static_cast<double>(traces.k_hat[i]) - adaptive.mu_k_hat;
        const double dt = traces.theta_at_k_hat[i] - adaptive.mu_theta_check;
        var_k.add(dk * dk);
        var_theta.add(dt * dt);
        const double err = traces.theta_at_k_hat[i] - theta;
        selected_sse.add(err * err);
    }
    adaptive.sigma_k_hat = std::sqrt(var_k.value() / dn);
    adaptive.sigma_theta_check = std::sqrt(var_theta.value() / dn);

    double min_fixed_sse = std::numeric_limits<double>::infinity();
    for (std::size_t k = config.k_min; k <= config.k_sel_max; ++k) {
        CompensatedSum sse;
        for (std::size_t i = 0; i < N; ++i) {
            const double err = traces.check[i * stride + k] - theta;
            sse.add(err * err);
        }
        min_fixed_sse = std::min(min_fixed_sse, sse.value());
    }
    adaptive.r_n = std::sqrt(selected_sse.value() / min_fixed_sse);
    adaptive.k_opt = k_opt(config.spec, config.n, config.k_min, config.k_sel_max);
    return report;
}

inline CurveReport run_curves(const SimulationConfig& config) {
    return run_study(config).curves;
}

inline AdaptiveSummary run_adaptive_study(const SimulationConfig& config) {
    return run_study(config).adaptive;
}

inline constexpr std::string_view kCurvesCsvHeader =
    "k,mean_hat,mean_tilde,mean_check,mse_hat,mse_tilde,mse_check";
inline constexpr std::string_view kTable2CsvHeader =
    "dist,theta,rho,mu_k_hat,sigma_k_hat,mu_theta_check,sigma_theta_check,R_n,k_opt";

inline void write_curves_csv(std::ostream& out, const CurveReport& curves) {
    out << kCurvesCsvHeader << '\n';
    for (std::size_t k = 2; k <= curves.k_curve_max; ++k) {
        out << k << ',' << format_g17(curves.mean_hat[k]) << ','
            << format_g17(curves.mean_tilde[k]) << ',' << format_g17(curves.mean_check[k])
            << ',' << format_g17(curves.mse_hat[k]) << ',' << format_g17(curves.mse_tilde[k])
            << ',' << format_g17(curves.mse_check[k]) << '\n';
    }
}

inline void write_table2_row(std::ostream& out, const DistributionSpec& spec,
                             const AdaptiveSummary& adaptive) {
    out << spec.name() << ',' << format_g17(spec.theta_true()) << ','
        << format_g17(spec.rho_true()) << ',' << format_g17(adaptive.mu_k_hat) << ','
        << format_g17(adaptive.sigma_k_hat) << ',' << format_g17(adaptive.mu_theta_check)
        << ',' << format_g17(adaptive.sigma_theta_check) << ',' << format_g17(adaptive.r_n)
        << ',' << adaptive.k_opt << '\n';
}

}  // namespace wtail
