// Command-line front end: estimation, adaptive selection, extreme quantiles,
// quantile-quantile plot data, and the Monte Carlo study.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wtail/distributions.hpp"
#include "wtail/estimators.hpp"
#include "wtail/io.hpp"
#include "wtail/quantiles.hpp"
#include "wtail/sample.hpp"
#include "wtail/simulation.hpp"

namespace {

using json = nlohmann::ordered_json;

wtail::Sample load_sample(const std::string& path) {
    return wtail::Sample::from_data(wtail::load_data_file(path));
}

void emit_record(const json& record, const std::string& format) {
    if (format == "json") {
        std::cout << record.dump() << '\n';
        return;
    }
    // Single-record CSV: header then one row, columns in insertion order.
    std::string header;
    std::string row;
    for (const auto& [key, value] : record.items()) {
        if (!header.empty()) {
            header += ',';
            row += ',';
        }
        header += key;
        if (value.is_number_float()) {
            row += wtail::format_g17(value.get<double>());
        } else if (value.is_string()) {
            row += value.get<std::string>();
        } else {
            row += value.dump();
        }
    }
    std::cout << header << '\n' << row << '\n';
}

json fit_record(const wtail::TailFit& fit) {
    json record;
    record["method"] = std::string(wtail::method_name(fit.method));
    record["theta"] = fit.theta;
    if (fit.b.has_value()) {
        record["b"] = *fit.b;
        record["rho"] = fit.rho;
    }
    record["k"] = fit.k;
    record["n"] = fit.n;
    return record;
}

struct EstimateOptions {
    std::string input;
    std::size_t k = 0;
    std::string method = "check";
    std::string format = "json";
};

void run_estimate(const EstimateOptions& opt) {
    const wtail::Sample data = load_sample(opt.input);
    wtail::TailFit fit;
    if (opt.method == "tilde") {
        fit = wtail::theta_tilde(data, opt.k);
    } else if (opt.method == "check") {
        fit = wtail::theta_check(wtail::log_spacings(data, opt.k));
    } else {
        fit = wtail::ls_fit(wtail::log_spacings(data, opt.k));
    }
    emit_record(fit_record(fit), opt.format);
}

struct SelectOptions {
    std::string input;
    std::size_t k_min = 2;
    std::optional<std::size_t> k_max;
    bool curve = false;
    std::string format = "json";
};

void run_select_k(const SelectOptions& opt) {
    const wtail::Sample data = load_sample(opt.input);
    const std::size_t k_max =
        opt.k_max.value_or(std::min<std::size_t>(350, data.size() - 1));
    const wtail::SelectionResult sel = wtail::select_k(data, opt.k_min, k_max);
    if (opt.curve) {
        std::cerr << "k_hat=" << sel.k_hat << " theta_check=" << sel.theta_at_k_hat << '\n';
        std::cout << "k,amse_hat\n";
        for (const auto& [k, amse] : sel.amse_curve) {
            std::cout << k << ',' << wtail::format_g17(amse) << '\n';
        }
        return;
    }
    json record;
    record["k_hat"] = sel.k_hat;
    record["theta_check"] = sel.theta_at_k_hat;
    record["k_min"] = opt.k_min;
    record["k_max"] = k_max;
    record["n"] = data.size();
    emit_record(record, opt.format);
}

struct QuantileOptions {
    std::string input;
    std::optional<double> p;
    std::optional<double> years;
    std::optional<double> record_years;
    std::optional<std::size_t> k;
    std::size_t k_min = 2;
    std::optional<std::size_t> k_max;
    bool bias_reduced = false;
    std::string format = "json";
};

void run_quantile(const QuantileOptions& opt) {
    if (opt.p.has_value() == (opt.years.has_value() && opt.record_years.has_value())) {
        throw std::invalid_argument(
            "quantile: pass either --p or both --years and --record-years");
    }
    const wtail::Sample data = load_sample(opt.input);
    const std::size_t n = data.size();

    double p = 0.0;
    if (opt.p.has_value()) {
        p = *opt.p;
    } else {
        p = *opt.record_years / (*opt.years * static_cast<double>(n));
        if (!(p < 1.0)) {
            throw std::domain_error(
                "quantile: return period is shorter than the data resolution");
        }
    }

    std::size_t k = 0;
    if (opt.k.has_value()) {
        k = *opt.k;
    } else {
        const std::size_t k_max = opt.k_max.value_or(std::min<std::size_t>(350, n - 1));
        k = wtail::select_k(data, opt.k_min, k_max).k_hat;
    }

    json record;
    double value = 0.0;
    if (opt.bias_reduced) {
        const wtail::TailFit fit = wtail::ls_fit(wtail::log_spacings(data, k));
        const wtail::QuantileRequest req = wtail::make_quantile_request(data, fit, p);
        value = wtail::quantile_bias_reduced(req, *fit.b, fit.rho);
        record["estimator"] = "bias_reduced";
        record["quantile"] = value;
        record["theta"] = fit.theta;
        record["b"] = *fit.b;
        record["anchor"] = req.anchor;
    } else {
        const wtail::TailFit fit = wtail::theta_check(wtail::log_spacings(data, k));
        const wtail::QuantileRequest req = wtail::make_quantile_request(data, fit, p);
        value = wtail::quantile_weissman(req);
        record["estimator"] = "weissman";
        record["quantile"] = value;
        record["theta"] = fit.theta;
        record["anchor"] = req.anchor;
    }
    record["p"] = p;
    record["k"] = k;
    record["n"] = n;
    if (opt.years.has_value()) {
        record["years"] = *opt.years;
        record["record_years"] = *opt.record_years;
    }
    emit_record(record, opt.format);
}

struct QqplotOptions {
    std::string input;
    std::size_t k = 0;
    bool fit = false;
};

void run_qqplot(const QqplotOptions& opt) {
    const wtail::Sample data = load_sample(opt.input);
    const std::size_t n = data.size();
    if (opt.k < 2 || opt.k > n) {
        throw std::out_of_range("qqplot: need 2 <= k <= n");
    }
    const auto& v = data.values();
    std::vector<double> xs(opt.k - 1), ys(opt.k - 1);
    std::cout << "x,y\n";
    for (std::size_t i = 1; i < opt.k; ++i) {
        const double x =
            std::log(std::log(static_cast<double>(n) / static_cast<double>(i)));
        const double y = std::log(v[n - i]);
        xs[i - 1] = x;
        ys[i - 1] = y;
        std::cout << wtail::format_g17(x) << ',' << wtail::format_g17(y) << '\n';
    }
    if (opt.fit) {
        // OLS slope of y on x; an informal check of the tail coefficient.
        double xbar = 0.0, ybar = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xbar += xs[i];
            ybar += ys[i];
        }
        xbar /= static_cast<double>(xs.size());
        ybar /= static_cast<double>(ys.size());
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - xbar) * (xs[i] - xbar);
            sxy += (xs[i] - xbar) * (ys[i] - ybar);
        }
        std::cout << "# fit_slope," << wtail::format_g17(sxy / sxx) << '\n';
    }
}

struct SimulateOptions {
    std::string dist;
    std::size_t n = 500;
    std::size_t replications = 100;
    std::optional<std::size_t> k_curve_max;
    std::size_t k_min = 2;
    std::optional<std::size_t> k_sel_max;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::string out_dir = ".";
};

void run_simulate(const SimulateOptions& opt) {
    const wtail::DistributionSpec spec = wtail::DistributionSpec::parse(opt.dist);
    wtail::SimulationConfig config{spec};
    config.n = opt.n;
    config.replications = opt.replications;
    config.k_curve_max = opt.k_curve_max.value_or(std::min<std::size_t>(360, opt.n - 1));
    config.k_min = opt.k_min;
    config.k_sel_max = opt.k_sel_max.value_or(std::min<std::size_t>(350, opt.n - 1));
    config.master_seed = opt.seed;
    config.workers = opt.workers;

    const wtail::SimulationReport report = wtail::run_study(config);

    const std::filesystem::path out_dir(opt.out_dir);
    std::filesystem::create_directories(out_dir);

    const std::filesystem::path curves_path =
        out_dir / ("curves_" + spec.file_tag() + ".csv");
    {
        std::ofstream out(curves_path);
        if (!out) throw std::runtime_error("cannot write '" + curves_path.string() + "'");
        wtail::write_curves_csv(out, report.curves);
    }

    const std::filesystem::path table_path = out_dir / "table2.csv";
    const bool need_header =
        !std::filesystem::exists(table_path) || std::filesystem::file_size(table_path) == 0;
    {
        std::ofstream out(table_path, std::ios::app);
        if (!out) throw std::runtime_error("cannot write '" + table_path.string() + "'");
        if (need_header) out << wtail::kTable2CsvHeader << '\n';
        wtail::write_table2_row(out, spec, report.adaptive);
    }

    std::cout << wtail::kTable2CsvHeader << '\n';
    wtail::write_table2_row(std::cout, spec, report.adaptive);
    std::cerr << "wrote " << curves_path.string() << " and " << table_path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weibull tail-coefficient estimation and extreme quantiles"};
    app.require_subcommand(1);

    EstimateOptions est;
    auto* cmd_est = app.add_subcommand("estimate", "Estimate the tail coefficient at a given k");
    cmd_est->add_option("--input", est.input, "data file (positive values, # comments)")
        ->required();
    cmd_est->add_option("--k", est.k, "number of upper order statistics")->required();
    cmd_est->add_option("--method", est.method, "estimator")
        ->check(CLI::IsMember({"tilde", "check", "ls"}))
        ->capture_default_str();
    cmd_est->add_option("--format", est.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd_est->callback([&] { run_estimate(est); });

    SelectOptions sel;
    auto* cmd_sel = app.add_subcommand("select-k", "Adaptive selection of k by plug-in AMSE");
    cmd_sel->add_option("--input", sel.input)->required();
    cmd_sel->add_option("--k-min", sel.k_min)->capture_default_str();
    cmd_sel->add_option("--k-max", sel.k_max, "default min(350, n-1)");
    cmd_sel->add_flag("--curve", sel.curve, "emit the full AMSE curve as CSV");
    cmd_sel->add_option("--format", sel.format)
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd_sel->callback([&] { run_select_k(sel); });

    QuantileOptions qnt;
    auto* cmd_qnt =
        app.add_subcommand("quantile", "Extreme quantile / N-year return level");
    cmd_qnt->add_option("--input", qnt.input)->required();
    cmd_qnt->add_option("--p", qnt.p, "exceedance probability in (0,1)");
    cmd_qnt->add_option("--years", qnt.years, "return period in years");
    cmd_qnt->add_option("--record-years", qnt.record_years, "span of the exceedance record");
    cmd_qnt->add_option("--k", qnt.k, "fixed k (skips adaptive selection)");
    cmd_qnt->add_option("--k-min", qnt.k_min)->capture_default_str();
    cmd_qnt->add_option("--k-max", qnt.k_max, "default min(350, n-1)");
    cmd_qnt->add_flag("--bias-reduced", qnt.bias_reduced,
                      "use the LS fit with the exponential bias correction");
    cmd_qnt->add_option("--format", qnt.format)
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd_qnt->callback([&] { run_quantile(qnt); });

    QqplotOptions qq;
    auto* cmd_qq = app.add_subcommand("qqplot", "Quantile-quantile plot points as CSV");
    cmd_qq->add_option("--input", qq.input)->required();
    cmd_qq->add_option("--k", qq.k)->required();
    cmd_qq->add_flag("--fit", qq.fit, "append the OLS slope as a comment row");
    cmd_qq->callback([&] { run_qqplot(qq); });

    SimulateOptions sim;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo study for one distribution");
    cmd_sim->add_option("--dist", sim.dist, "family:p1,p2 (gamma, absnormal, weibull, halld)")
        ->required();
    cmd_sim->add_option("--n", sim.n)->capture_default_str();
    cmd_sim->add_option("--N", sim.replications, "replications")->capture_default_str();
    cmd_sim->add_option("--k-curve-max", sim.k_curve_max, "default min(360, n-1)");
    cmd_sim->add_option("--k-min", sim.k_min)->capture_default_str();
    cmd_sim->add_option("--k-max", sim.k_sel_max, "selection grid upper end, default min(350, n-1)");
    cmd_sim->add_option("--seed", sim.seed)->capture_default_str();
    cmd_sim->add_option("--workers", sim.workers, "0 = hardware concurrency")
        ->capture_default_str();
    cmd_sim->add_option("--out", sim.out_dir, "output directory")->capture_default_str();
    cmd_sim->callback([&] { run_simulate(sim); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
