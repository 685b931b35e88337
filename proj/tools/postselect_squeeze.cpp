// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

// postselect-squeeze: run configs, reproduce figure data, evaluate single points.
//
// Exit codes: 0 success, 2 invalid config or arguments, 3 capacity exceeded,
// 4 impossible detection.

#include "pss/pss.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

int exit_code(pss::ErrorCode code) {
    switch (code) {
        case pss::ErrorCode::CapacityExceeded: return 3;
        case pss::ErrorCode::ImpossibleDetection: return 4;
        default: return 2;
    }
}

std::string cell(const std::optional<double>& v) { return v ? pss::format_double(*v) : std::string(); }

void print_report(const pss::SqueezingReport& r, double weight) {
    std::cout << "xi2=" << cell(r.xi2) << " db=" << cell(r.db_value()) << " verdict=" << to_string(r.verdict)
              << " weight=" << pss::format_double(weight) << "\n";
}

void print_value(const std::optional<double>& xi2, double weight) {
    pss::SqueezingReport r;
    r.xi2 = xi2;
    r.verdict = !xi2 ? pss::Verdict::Indeterminate
                     : (*xi2 < 1.0 ? pss::Verdict::Entangled : pss::Verdict::NotDetected);
    print_report(r, weight);
}

struct SingleArgs {
    std::string analytic;
    std::size_t n = 10;
    std::size_t nu = 1;
    std::optional<std::string> f;
    std::string theta_bar = "pi/2";

    std::string geometry = "chain";
    std::string step = "2*pi";
    std::string radius = "2*pi";
    std::string plane = "xz";
    std::uint64_t seed = 1;
    std::string state = "css";
    std::string theta = "pi/2";
    std::string s = "1";
    std::string drive_polar = "pi/2";
    std::string drive_azimuth = "0";
    std::optional<std::string> det_polar;
    std::string det_azimuth = "0";
    std::optional<std::string> meas_polar;
    std::string meas_azimuth = "0";
    std::string engine = "auto";
    std::string witness = "fixed";
};

int run_single(const SingleArgs& a) {
    using pss::parse_angle;
    const double nd = static_cast<double>(a.n);
    if (a.analytic == "fully-excited") {
        print_value(pss::xi2_fully_excited(a.n, a.nu), pss::population_weight(a.n, a.nu, 1.0));
    } else if (a.analytic == "fully-mixed") {
        const double f = a.f ? parse_angle(*a.f, "--f") : nd * (nd - 1);
        print_value(pss::xi2_fully_mixed(a.n, a.nu, f), pss::population_weight(a.n, a.nu, 0.5));
    } else if (a.analytic == "population") {
        const double tb = parse_angle(a.theta_bar, "--theta-bar");
        print_value(pss::xi2_population(a.n, a.nu, tb),
                    pss::population_weight(a.n, a.nu, (1 - std::cos(tb)) / 2));
    } else if (a.analytic == "population-threshold") {
        const auto nu = pss::population_threshold(a.n, parse_angle(a.theta_bar, "--theta-bar"));
        std::cout << "nu=" << (nu ? std::to_string(*nu) : std::string("none")) << "\n";
    } else if (a.analytic == "optimal-nu-fully-mixed") {
        const auto o = pss::optimal_nu_fully_mixed(a.n);
        std::cout << "nu_real=" << pss::format_double(o.nu_real) << " nu=" << o.nu_int
                  << " xi2=" << pss::format_double(o.xi2) << " db=" << pss::format_double(pss::db(o.xi2)) << "\n";
    } else if (!a.analytic.empty()) {
        throw pss::Error(pss::ErrorCode::InvalidConfig, "unknown --analytic kind '" + a.analytic + "'");
    } else {
        nlohmann::json geometry = {{"kind", a.geometry}, {"n", a.n}};
        if (a.geometry == "chain") geometry["step"] = a.step;
        if (a.geometry == "ring") geometry["plane"] = a.plane;
        if (a.geometry != "chain") geometry["radius"] = a.radius;
        if (a.geometry == "sphere") geometry["seed"] = a.seed;
        nlohmann::json state = {{"kind", a.state}};
        if (a.state == "css") state["theta"] = a.theta;
        if (a.state == "steady") state["s"] = a.s;
        if (a.state == "population") state["theta_bar"] = a.theta_bar;
        else state["drive"] = {{"polar", a.drive_polar}, {"azimuth", a.drive_azimuth}};
        nlohmann::json detection = {{"count", a.nu}};
        if (a.det_polar) detection["direction"] = {{"polar", *a.det_polar}, {"azimuth", a.det_azimuth}};
        else detection["direction"] = "drive";
        nlohmann::json measurement = {{"mode", "same-as-detection"}};
        if (a.meas_polar) measurement = {{"direction", {{"polar", *a.meas_polar}, {"azimuth", a.meas_azimuth}}}};
        const nlohmann::json config = {{"geometry", geometry},   {"state", state},
                                       {"detection", detection}, {"measurement", measurement},
                                       {"engine", a.engine},     {"witness", a.witness}};
        const auto r = pss::evaluate_config(pss::parse_config(config));
        print_report(r.report, r.moments.weight);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional spin squeezing from postselected photon detections"};
    app.require_subcommand(1);
    std::size_t threads = pss::default_threads();
    app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

    auto* run = app.add_subcommand("run", "Evaluate a JSON run configuration and write its CSV");
    std::string config_path;
    std::string run_output;
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--output", run_output, "Override the config's output path (- for stdout)");

    auto* fig = app.add_subcommand(
        "figure",
        "Write figure data: fig2a fig2b fig2c fig2d fig3 fig4a fig4b fig4c.\n"
        "Grids: polar sweeps pi/180..pi (180 pts; fig2b pi/18..pi, 171 pts); s log 1e-3..1e3 (fig2c, 121 pts), 1e-2..1e3 (fig2d, 51 pts);\n"
        "fig2a/fig2c N in {50,100,200,400,800}; fig4a theta_w 181 pts on [0,pi];\n"
        "fig4b/fig4c theta_w 360 pts on [0,2pi); spheres use seed 7.");
    std::string fig_name;
    std::string fig_out = ".";
    bool print_config = false;
    fig->add_option("name", fig_name, "Figure name")->required();
    fig->add_option("--out", fig_out, "Output directory");
    fig->add_flag("--print-config", print_config, "Print the baked-in config(s) instead of running");

    auto* single = app.add_subcommand("single", "Evaluate one point and print xi2, db, verdict, weight");
    SingleArgs sa;
    single->add_option("--analytic", sa.analytic,
                       "fully-excited | fully-mixed | population | population-threshold | optimal-nu-fully-mixed");
    single->add_option("--n", sa.n, "Emitter count");
    single->add_option("--nu", sa.nu, "Detected photons");
    single->add_option("--f", sa.f, "Structure factor (fully-mixed; default n(n-1))");
    single->add_option("--theta-bar", sa.theta_bar, "Population angle");
    single->add_option("--geometry", sa.geometry, "chain | ring | sphere");
    single->add_option("--step", sa.step, "Chain step (k r units)");
    single->add_option("--radius", sa.radius, "Ring or sphere radius");
    single->add_option("--plane", sa.plane, "Ring plane xy | xz | yz");
    single->add_option("--seed", sa.seed, "Sphere seed");
    single->add_option("--state", sa.state, "css | steady | population");
    single->add_option("--theta", sa.theta, "CSS angle");
    single->add_option("--s", sa.s, "Saturation parameter");
    single->add_option("--drive-polar", sa.drive_polar, "Drive direction polar angle");
    single->add_option("--drive-azimuth", sa.drive_azimuth, "Drive direction azimuth");
    single->add_option("--det-polar", sa.det_polar, "Detection polar angle (default: drive)");
    single->add_option("--det-azimuth", sa.det_azimuth, "Detection azimuth");
    single->add_option("--meas-polar", sa.meas_polar, "Measurement polar angle (default: detection)");
    single->add_option("--meas-azimuth", sa.meas_azimuth, "Measurement azimuth");
    single->add_option("--engine", sa.engine, "auto | exact | analytic");
    single->add_option("--witness", sa.witness, "fixed | optimal");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            auto config = pss::parse_config_file(config_path);
            const std::string out = run_output.empty() ? config.output : run_output;
            if (out.empty()) throw pss::Error(pss::ErrorCode::InvalidConfig, "output: missing (use --output)");
            const auto csv = pss::run_to_csv(config, threads);
            if (out == "-") std::cout << csv;
            else pss::write_text_file(out, csv);
        } else if (*fig) {
            if (print_config) {
                for (const auto& f : pss::figure_configs(fig_name))
                    std::cout << "# " << f.file << "\n" << f.config.dump(2) << "\n";
                return 0;
            }
            std::filesystem::create_directories(fig_out);
            for (const auto& p : pss::figure(fig_name, fig_out, threads)) std::cerr << "wrote " << p << "\n";
        } else if (*single) {
            return run_single(sa);
        }
    } catch (const pss::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
