// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Point evaluation with engine routing, sweep expansion, CSV emission and the
// baked-in figure configurations.

#include "pss/closed_forms.hpp"
#include "pss/config.hpp"
#include "pss/dense.hpp"
#include "pss/format.hpp"
#include "pss/geometry.hpp"
#include "pss/single_photon.hpp"
#include "pss/states.hpp"
#include "pss/sweep.hpp"
#include "pss/witness.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace pss {

/// Which engine evaluated a point.
enum class Route { Factorized, Population, Exact };

inline const char* to_string(Route r) {
    switch (r) {
        case Route::Factorized: return "factorized";
        case Route::Population: return "population";
        case Route::Exact: return "exact";
    }
    return "unknown";
}

struct PointResult {
    Route route = Route::Exact;
    FieldMoments moments;
    SqueezingReport report;
    std::optional<double> purity;     // exact engine only
    std::optional<double> intensity;  // when requested
};

/// Fully resolved physical setup for one sweep point.
struct Scenario {
    ProductState state;
    DetectionPlan plan;
    WaveDirection k_w;
    std::vector<WaveDirection> intensity_directions;
};

inline WaveDirection to_direction(const AngleSpec& a) { return WaveDirection::from_angles(a.polar, a.azimuth); }

inline Geometry build_geometry(const GeometrySpec& g) {
    if (g.kind == "chain") return make_chain(g.n, g.step, to_direction(g.axis));
    if (g.kind == "ring") {
        const Plane plane = g.plane == "xy" ? Plane::xy() : g.plane == "yz" ? Plane::yz() : Plane::xz();
        return make_ring(g.n, g.radius, plane);
    }
    return make_random_sphere(g.n, g.radius, g.seed);
}

inline ProductState build_state(const StateSpec& s, const Geometry& g) {
    const auto k_l = to_direction(s.drive);
    if (s.kind == "css") return css_state(s.theta, k_l, g);
    if (s.kind == "steady") return steady_state(s.s, k_l, g);
    return population_state(s.theta_bar, g);
}

inline Scenario build_scenario(const RunConfig& c) {
    auto g = build_geometry(c.geometry);
    auto state = build_state(c.state, g);
    const auto k_l = to_direction(c.state.drive);

    std::vector<WaveDirection> available;  // candidates in detection order
    std::size_t count = c.detection.count;
    switch (c.detection.mode) {
        case DetectionMode::Drive: available.assign(std::max<std::size_t>(count, 1), k_l); break;
        case DetectionMode::Direction:
            available.assign(std::max<std::size_t>(count, 1), to_direction(c.detection.direction));
            break;
        case DetectionMode::List:
            for (const auto& a : c.detection.list) available.push_back(to_direction(a));
            break;
    }
    detail::require(count <= available.size(), ErrorCode::InvalidConfig,
                    "detection count exceeds the listed directions");
    DetectionPlan plan{std::vector<WaveDirection>(available.begin(), available.begin() + static_cast<long>(count))};

    WaveDirection k_w = available.front();
    if (c.measurement.mode == MeasurementMode::Drive) k_w = k_l;
    if (c.measurement.mode == MeasurementMode::Direction) k_w = to_direction(c.measurement.direction);

    std::vector<WaveDirection> intensity_dirs;
    if (c.intensity_nu) {
        const std::size_t m = *c.intensity_nu;
        if (c.detection.mode == DetectionMode::List) {
            detail::require(m <= available.size(), ErrorCode::InvalidConfig,
                            "intensity.nu exceeds the listed directions");
            intensity_dirs.assign(available.begin(), available.begin() + static_cast<long>(m));
        } else {
            intensity_dirs.assign(m, available.front());
        }
    }
    return Scenario{std::move(state), std::move(plan), k_w, std::move(intensity_dirs)};
}

/**
 * Routing. One or zero detections: factorized single-photon engine (any product
 * state). Coherence-free homogeneous state with all photons along one
 * direction: population closed form. Anything else has no closed form and
 * needs the exact engine.
 */
inline std::optional<Route> closed_form_route(const Scenario& s) {
    if (s.plan.nu() <= 1) return Route::Factorized;
    if (s.state.is_homogeneous_population() && s.plan.single_direction()) return Route::Population;
    return std::nullopt;
}

inline Route choose_route(const Scenario& s, EngineKind engine) {
    if (engine == EngineKind::Exact) return Route::Exact;
    const auto r = closed_form_route(s);
    if (r) return *r;
    detail::require(engine == EngineKind::Auto, ErrorCode::InvalidConfig,
                    "engine=analytic: no closed form for " + std::to_string(s.plan.nu()) +
                        " detections from a state with coherences or mixed directions");
    return Route::Exact;
}

inline PointResult evaluate(const Scenario& s, EngineKind engine, WitnessKind witness) {
    const auto& g = s.state.geometry();
    check_plan(s.plan, s.state.size());
    PointResult r;
    r.route = choose_route(s, engine);

    std::optional<DenseQuantumState> initial;
    switch (r.route) {
        case Route::Factorized:
            r.moments = s.plan.nu() == 0 ? product_moments(s.state, s.k_w)
                                         : single_photon_moments(s.state, s.plan.directions.front(), s.k_w);
            break;
        case Route::Population: {
            const auto& k_d = s.plan.directions.front();
            const double vz = 2 * s.state[0].ee - 1;
            detail::require(vz > -1, ErrorCode::ImpossibleDetection, "ground state emits no photons");
            r.moments = population_moments_vz(s.state.size(), s.plan.nu(), vz,
                                              structure_factor(g, k_d.unit() - s.k_w.unit()));
            break;
        }
        case Route::Exact: {
            initial = realize(s.state);
            auto post = postselect(*initial, s.plan, g);
            r.moments = field_moments(post.state, s.k_w, g);
            r.moments.weight = post.weight;
            r.purity = purity(post.state);
            break;
        }
    }
    r.report = witness == WitnessKind::Optimal ? xi2_optimal(r.moments) : xi2_fixed(r.moments);

    if (!s.intensity_directions.empty()) {
        const DetectionPlan ip{s.intensity_directions};
        check_plan(ip, s.state.size());
        if (r.route != Route::Exact && ip.nu() == 1) {
            r.intensity = single_photon_intensity(s.state, ip.directions.front(), s.k_w);
        } else {
            if (!initial) initial = realize(s.state);
            r.intensity = intensity(postselect(*initial, ip, g).state, s.k_w, g);
        }
    }
    return r;
}

/// Applies one sweep value to a copy of the base configuration.
inline void apply_sweep_value(RunConfig& c, const std::string& parameter, double v) {
    if (parameter == "n") c.geometry.n = static_cast<std::size_t>(v);
    else if (parameter == "theta") c.state.theta = v;
    else if (parameter == "s") c.state.s = v;
    else if (parameter == "theta_bar") c.state.theta_bar = v;
    else if (parameter == "nu") c.detection.count = static_cast<std::size_t>(v);
    else if (parameter == "theta_d") c.detection.direction.polar = v;
    else if (parameter == "theta_w") c.measurement.direction.polar = v;
    else if (parameter == "theta_L") c.state.drive.polar = v;
    else throw Error(ErrorCode::InvalidConfig, "unknown sweep parameter '" + parameter + "'");
}

/// Cartesian product of the sweeps, first sweep varying slowest.
inline std::vector<std::vector<double>> sweep_points(const RunConfig& c) {
    std::vector<std::vector<double>> points{{}};
    for (const auto& s : c.sweeps) {
        std::vector<std::vector<double>> next;
        next.reserve(points.size() * s.values.size());
        for (const auto& p : points)
            for (double v : s.values) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    return points;
}

inline PointResult evaluate_config(const RunConfig& c) {
    return evaluate(build_scenario(c), c.engine, c.witness);
}

inline std::string csv_header(const RunConfig& c) {
    std::string h;
    for (const auto& s : c.sweeps) h += s.parameter + ",";
    h += "xi2,db,verdict,minimizer,weight,purity";
    if (c.intensity_nu) h += ",intensity";
    return h + "\n";
}

inline std::string csv_row(const std::vector<double>& point, const PointResult& r, bool with_intensity) {
    std::string row;
    for (double v : point) row += format_double(v) + ",";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    row += opt(r.report.xi2) + "," + opt(r.report.db_value()) + "," + to_string(r.report.verdict) + "," +
           r.report.minimizer_label() + "," + format_double(r.moments.weight) + "," + opt(r.purity);
    if (with_intensity) row += "," + opt(r.intensity);
    return row + "\n";
}

/// Whole CSV document for a run; byte-identical for any thread count.
inline std::string run_to_csv(const RunConfig& c, std::size_t threads = default_threads()) {
    const auto points = sweep_points(c);
    const auto rows = parallel_map<std::string>(points.size(), threads, [&](std::size_t i) {
        RunConfig pc = c;
        for (std::size_t k = 0; k < c.sweeps.size(); ++k) apply_sweep_value(pc, c.sweeps[k].parameter, points[i][k]);
        return csv_row(points[i], evaluate_config(pc), c.intensity_nu.has_value());
    });
    std::string out = csv_header(c);
    for (const auto& r : rows) out += r;
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    detail::require(static_cast<bool>(out), ErrorCode::InvalidConfig, "cannot write '" + path + "'");
    out << text;
    detail::require(static_cast<bool>(out), ErrorCode::InvalidConfig, "failed writing '" + path + "'");
}

// Figure reproductions. Grids are fixed here since only axis ranges are known:
//   polar-angle sweeps over (0, pi]: pi/180 .. pi, 180 points (0 is a ground state);
//   fig2b starts at pi/18 (171 points) since eight detections below ~5 degrees
//   fall under the impossible-detection weight cutoff
//   saturation sweeps: log-spaced 1e-3 .. 1e3, 121 points (fig2c); fig2d uses
//   1e-2 .. 1e3, 51 points, since eight detections at s = 1e-3 fall under the cutoff
//   fig4 measurement sweeps: 181 points on [0, pi] (fig4a), 360 points on [0, 2pi) (fig4b, fig4c)
// Random spheres use seed 7.

inline const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"fig2a", "fig2b", "fig2c", "fig2d",
                                                "fig3",  "fig4a", "fig4b", "fig4c"};
    return names;
}

struct FigureOutput {
    std::string file;
    nlohmann::json config;
};

inline std::vector<FigureOutput> figure_configs(const std::string& name) {
    using nlohmann::json;
    const json x_dir = {{"polar", "pi/2"}, {"azimuth", 0}};
    const json chain = {{"kind", "chain"}, {"n", 10}, {"step", "2*pi"}, {"axis", {{"polar", 0}}}};
    const json theta_grid = {{"parameter", "theta"}, {"from", "pi/180"}, {"to", "pi"}, {"points", 180}};
    const json n_list = {{"parameter", "n"}, {"values", {50, 100, 200, 400, 800}}};
    const json sphere = {{"kind", "sphere"}, {"n", 100}, {"radius", "200*pi"}, {"seed", 7}};
    const json ring = {{"kind", "ring"}, {"n", 10}, {"radius", "2*pi"}, {"plane", "xz"}};
    const json ring_css = {{"kind", "css"}, {"theta", "3*pi/4"}, {"drive", {{"polar", "pi/4"}, {"azimuth", 0}}}};
    const json theta_w_circle = {
        {"parameter", "theta_w"}, {"from", 0}, {"to", "2*pi"}, {"points", 360}, {"endpoint", false}};
    const json same = {{"mode", "same-as-detection"}};

    if (name == "fig2a") {
        return {{"fig2a.csv",
                 {{"geometry", chain},
                  {"state", {{"kind", "css"}, {"theta", "pi/2"}, {"drive", x_dir}}},
                  {"detection", {{"direction", "drive"}, {"count", 1}}},
                  {"measurement", same},
                  {"engine", "analytic"},
                  {"sweeps", {n_list, theta_grid}}}}};
    }
    if (name == "fig2b") {
        return {{"fig2b.csv",
                 {{"geometry", chain},
                  {"state", {{"kind", "css"}, {"theta", "pi/2"}, {"drive", x_dir}}},
                  {"detection", {{"direction", "drive"}, {"count", 1}}},
                  {"measurement", same},
                  {"engine", "exact"},
                  {"sweeps",
                   {{{"parameter", "nu"}, {"values", {1, 2, 3, 4, 5, 6, 7, 8}}},
                    {{"parameter", "theta"}, {"from", "pi/18"}, {"to", "pi"}, {"points", 171}}}}}}};
    }
    const json steady = {{"kind", "steady"}, {"s", 1}, {"drive", {{"polar", "pi/3"}, {"azimuth", 0}}}};
    if (name == "fig2c") {
        return {{"fig2c.csv",
                 {{"geometry", chain},
                  {"state", steady},
                  {"detection", {{"direction", "drive"}, {"count", 1}}},
                  {"measurement", same},
                  {"engine", "analytic"},
                  {"sweeps",
                   {n_list, {{"parameter", "s"}, {"from", 1e-3}, {"to", 1e3}, {"points", 121}, {"scale", "log"}}}}}}};
    }
    if (name == "fig2d") {
        return {{"fig2d.csv",
                 {{"geometry", chain},
                  {"state", steady},
                  {"detection", {{"direction", "drive"}, {"count", 1}}},
                  {"measurement", same},
                  {"engine", "exact"},
                  {"sweeps",
                   {{{"parameter", "nu"}, {"values", {1, 3, 5, 8}}},
                    {{"parameter", "s"}, {"from", 1e-2}, {"to", 1e3}, {"points", 51}, {"scale", "log"}}}}}}};
    }
    if (name == "fig3") {
        return {{"fig3.csv",
                 {{"geometry", sphere},
                  {"state", {{"kind", "population"}, {"theta_bar", "pi/2"}}},
                  {"detection", {{"direction", {{"polar", 0}, {"azimuth", 0}}}, {"count", 10}}},
                  {"measurement", same},
                  {"engine", "analytic"},
                  {"sweeps",
                   {{{"parameter", "nu"}, {"values", {10, 20, 30, 40, 50, 60, 70, 80, 90, 99}}},
                    {{"parameter", "theta_bar"}, {"from", "pi/180"}, {"to", "pi"}, {"points", 180}}}}}}};
    }
    if (name == "fig4a") {
        return {{"fig4a.csv",
                 {{"geometry", sphere},
                  {"state", {{"kind", "population"}, {"theta_bar", "pi/3"}}},
                  {"detection", {{"direction", {{"polar", "pi/2"}, {"azimuth", 0}}}, {"count", 50}}},
                  {"measurement", {{"direction", {{"polar", 0}, {"azimuth", 0}}}}},
                  {"engine", "analytic"},
                  {"sweeps",
                   {{{"parameter", "theta_d"}, {"values", {"pi/4", "pi/2", "3*pi/4"}}},
                    {{"parameter", "theta_w"}, {"from", 0}, {"to", "pi"}, {"points", 181}}}}}}};
    }
    if (name == "fig4b") {
        return {{"fig4b.csv",
                 {{"geometry", ring},
                  {"state", ring_css},
                  {"detection", {{"direction", "drive"}, {"count", 5}}},
                  {"measurement", {{"direction", {{"polar", 0}, {"azimuth", 0}}}}},
                  {"engine", "exact"},
                  {"intensity", {{"nu", 1}}},
                  {"sweeps", {theta_w_circle}}}}};
    }
    if (name == "fig4c") {
        const json nu_list = {{"parameter", "nu"}, {"values", {1, 3, 5}}};
        json multi_dirs = json::array();
        for (const char* a : {"0", "pi/3", "pi/2", "3*pi/2", "pi"}) multi_dirs.push_back({{"polar", a}, {"azimuth", 0}});
        return {{"fig4c_same.csv",
                 {{"geometry", ring},
                  {"state", ring_css},
                  {"detection", {{"direction", "drive"}, {"count", 1}}},
                  {"measurement", {{"direction", {{"polar", 0}, {"azimuth", 0}}}}},
                  {"engine", "exact"},
                  {"sweeps", {nu_list, theta_w_circle}}}},
                {"fig4c_multi.csv",
                 {{"geometry", ring},
                  {"state", ring_css},
                  {"detection", {{"directions", multi_dirs}, {"count", 1}}},
                  {"measurement", {{"direction", {{"polar", 0}, {"azimuth", 0}}}}},
                  {"engine", "exact"},
                  {"sweeps", {nu_list, theta_w_circle}}}}};
    }
    throw Error(ErrorCode::InvalidConfig, "unknown figure '" + name + "'");
}

/// Writes every CSV of a figure into `out_dir`; returns the written paths.
inline std::vector<std::string> figure(const std::string& name, const std::string& out_dir,
                                       std::size_t threads = default_threads()) {
    std::vector<std::string> written;
    for (const auto& f : figure_configs(name)) {
        const auto path = out_dir + "/" + f.file;
        write_text_file(path, run_to_csv(parse_config(f.config), threads));
        written.push_back(path);
    }
    return written;
}

}  // namespace pss
