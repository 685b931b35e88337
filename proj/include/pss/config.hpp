// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Run configuration: a JSON document describing geometry, initial state,
// detection, measurement, engine, witness and parameter sweeps.
// Every angle may be a number (radians) or a string such as "3*pi/4".

#include "pss/common.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pss {

namespace detail {

/// Recursive-descent evaluator for + - * / ( ) with numbers and `pi`.
class AngleParser {
public:
    explicit AngleParser(std::string_view text) : s_(text) {}

    std::optional<double> parse() {
        pos_ = 0;
        ok_ = true;
        const double v = expr();
        skip();
        if (!ok_ || pos_ != s_.size()) return std::nullopt;
        return v;
    }

private:
    void skip() {
        while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    double expr() {
        double v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    double term() {
        double v = factor();
        for (;;) {
            if (eat('*')) v *= factor();
            else if (eat('/')) v /= factor();
            else return v;
        }
    }
    double factor() {
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        if (eat('(')) {
            const double v = expr();
            if (!eat(')')) ok_ = false;
            return v;
        }
        skip();
        if (s_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return kPi;
        }
        double v = 0;
        const auto* begin = s_.data() + pos_;
        const auto [end, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
        if (ec != std::errc() || end == begin) {
            ok_ = false;
            return 0;
        }
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    bool ok_ = true;
};

}  // namespace detail

/// Parses "1.2", "pi/2", "-3*pi/4", ...; throws InvalidConfig on failure.
inline double parse_angle(std::string_view text, const std::string& where = "angle") {
    const auto v = detail::AngleParser(text).parse();
    detail::require(v.has_value() && std::isfinite(*v), ErrorCode::InvalidConfig,
                    where + ": cannot parse '" + std::string(text) + "'");
    return *v;
}

struct AngleSpec {
    double polar = 0.0;
    double azimuth = 0.0;
};

struct GeometrySpec {
    std::string kind = "chain";  // chain | ring | sphere
    std::size_t n = 2;
    double step = 2 * kPi;       // chain
    AngleSpec axis{};            // chain axis (default +z)
    double radius = 2 * kPi;     // ring, sphere
    std::string plane = "xz";    // ring: xy | xz | yz
    std::uint64_t seed = 1;      // sphere
};

struct StateSpec {
    std::string kind = "css";  // css | steady | population
    double theta = kPi / 2;
    double s = 1.0;
    double theta_bar = kPi / 2;
    AngleSpec drive{kPi / 2, 0.0};
};

enum class DetectionMode { Drive, Direction, List };
enum class MeasurementMode { SameAsDetection, Drive, Direction };
enum class EngineKind { Auto, Exact, Analytic };
enum class WitnessKind { Fixed, Optimal };

struct DetectionSpec {
    DetectionMode mode = DetectionMode::Drive;
    AngleSpec direction{};
    std::vector<AngleSpec> list;
    std::size_t count = 1;
};

struct MeasurementSpec {
    MeasurementMode mode = MeasurementMode::SameAsDetection;
    AngleSpec direction{};
};

struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
};

struct RunConfig {
    GeometrySpec geometry;
    StateSpec state;
    DetectionSpec detection;
    MeasurementSpec measurement;
    EngineKind engine = EngineKind::Auto;
    WitnessKind witness = WitnessKind::Fixed;
    std::optional<std::size_t> intensity_nu;
    std::vector<SweepSpec> sweeps;
    std::string output;
};

inline const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names{"n",       "theta", "s",       "theta_bar",
                                                "nu",      "theta_d", "theta_w", "theta_L"};
    return names;
}

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void config_error(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + what);
}

inline void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) config_error(path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.count(key)) config_error(path + "." + key, "unknown field");
}

inline double read_number(const json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_angle(v.get<std::string>(), path);
    config_error(path, "expected a number or an expression string");
}

inline std::size_t read_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) config_error(path, "expected a nonnegative integer");
    return v.get<std::size_t>();
}

inline std::string read_string(const json& v, const std::string& path) {
    if (!v.is_string()) config_error(path, "expected a string");
    return v.get<std::string>();
}

inline AngleSpec read_direction(const json& v, const std::string& path) {
    check_keys(v, path, {"polar", "azimuth"});
    AngleSpec a;
    if (!v.contains("polar")) config_error(path + ".polar", "missing");
    a.polar = read_number(v["polar"], path + ".polar");
    if (v.contains("azimuth")) a.azimuth = read_number(v["azimuth"], path + ".azimuth");
    return a;
}

inline const json& need(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) config_error(path + "." + key, "missing");
    return obj[key];
}

inline GeometrySpec read_geometry(const json& v) {
    const std::string p = "geometry";
    GeometrySpec g;
    if (!v.is_object()) config_error(p, "expected an object");
    g.kind = read_string(need(v, "kind", p), p + ".kind");
    g.n = read_count(need(v, "n", p), p + ".n");
    if (g.kind == "chain") {
        check_keys(v, p, {"kind", "n", "step", "axis"});
        if (v.contains("step")) g.step = read_number(v["step"], p + ".step");
        if (v.contains("axis")) g.axis = read_direction(v["axis"], p + ".axis");
    } else if (g.kind == "ring") {
        check_keys(v, p, {"kind", "n", "radius", "plane"});
        if (v.contains("radius")) g.radius = read_number(v["radius"], p + ".radius");
        if (v.contains("plane")) g.plane = read_string(v["plane"], p + ".plane");
        if (g.plane != "xy" && g.plane != "xz" && g.plane != "yz") config_error(p + ".plane", "expected xy, xz or yz");
    } else if (g.kind == "sphere") {
        check_keys(v, p, {"kind", "n", "radius", "seed"});
        g.radius = read_number(need(v, "radius", p), p + ".radius");
        if (v.contains("seed")) g.seed = read_count(v["seed"], p + ".seed");
    } else {
        config_error(p + ".kind", "expected chain, ring or sphere");
    }
    return g;
}

inline StateSpec read_state(const json& v) {
    const std::string p = "state";
    StateSpec s;
    if (!v.is_object()) config_error(p, "expected an object");
    s.kind = read_string(need(v, "kind", p), p + ".kind");
    if (s.kind == "css") {
        check_keys(v, p, {"kind", "theta", "drive"});
        s.theta = read_number(need(v, "theta", p), p + ".theta");
    } else if (s.kind == "steady") {
        check_keys(v, p, {"kind", "s", "drive"});
        const auto& sv = need(v, "s", p);
        if (sv.is_string() && sv.get<std::string>() == "inf") s.s = std::numeric_limits<double>::infinity();
        else s.s = read_number(sv, p + ".s");
    } else if (s.kind == "population") {
        check_keys(v, p, {"kind", "theta_bar"});
        s.theta_bar = read_number(need(v, "theta_bar", p), p + ".theta_bar");
    } else {
        config_error(p + ".kind", "expected css, steady or population");
    }
    if (v.contains("drive")) s.drive = read_direction(v["drive"], p + ".drive");
    return s;
}

inline DetectionSpec read_detection(const json& v) {
    const std::string p = "detection";
    check_keys(v, p, {"direction", "directions", "count"});
    DetectionSpec d;
    if (v.contains("direction") == v.contains("directions"))
        config_error(p, "give exactly one of direction, directions");
    if (v.contains("direction")) {
        const auto& dir = v["direction"];
        if (dir.is_string()) {
            if (dir.get<std::string>() != "drive") config_error(p + ".direction", "expected \"drive\" or an object");
            d.mode = DetectionMode::Drive;
        } else {
            d.mode = DetectionMode::Direction;
            d.direction = read_direction(dir, p + ".direction");
        }
        d.count = read_count(need(v, "count", p), p + ".count");
    } else {
        d.mode = DetectionMode::List;
        const auto& list = v["directions"];
        if (!list.is_array() || list.empty()) config_error(p + ".directions", "expected a nonempty array");
        for (std::size_t i = 0; i < list.size(); ++i)
            d.list.push_back(read_direction(list[i], p + ".directions[" + std::to_string(i) + "]"));
        d.count = v.contains("count") ? read_count(v["count"], p + ".count") : d.list.size();
        if (d.count > d.list.size()) config_error(p + ".count", "exceeds the number of listed directions");
    }
    return d;
}

inline MeasurementSpec read_measurement(const json& v) {
    const std::string p = "measurement";
    check_keys(v, p, {"mode", "direction"});
    MeasurementSpec m;
    if (v.contains("direction")) {
        if (v.contains("mode") && read_string(v["mode"], p + ".mode") != "direction")
            config_error(p + ".mode", "conflicts with an explicit direction");
        m.mode = MeasurementMode::Direction;
        m.direction = read_direction(v["direction"], p + ".direction");
        return m;
    }
    const auto mode = read_string(need(v, "mode", p), p + ".mode");
    if (mode == "same-as-detection") m.mode = MeasurementMode::SameAsDetection;
    else if (mode == "drive") m.mode = MeasurementMode::Drive;
    else config_error(p + ".mode", "expected same-as-detection, drive, or a direction");
    return m;
}

inline SweepSpec read_sweep(const json& v, const std::string& p) {
    if (!v.is_object()) config_error(p, "expected an object");
    SweepSpec s;
    s.parameter = read_string(need(v, "parameter", p), p + ".parameter");
    const auto& names = sweep_parameters();
    if (std::find(names.begin(), names.end(), s.parameter) == names.end())
        config_error(p + ".parameter", "unknown sweep parameter '" + s.parameter + "'");
    if (v.contains("values")) {
        check_keys(v, p, {"parameter", "values"});
        const auto& vals = v["values"];
        if (!vals.is_array() || vals.empty()) config_error(p + ".values", "expected a nonempty array");
        for (std::size_t i = 0; i < vals.size(); ++i)
            s.values.push_back(read_number(vals[i], p + ".values[" + std::to_string(i) + "]"));
    } else {
        check_keys(v, p, {"parameter", "from", "to", "points", "scale", "endpoint"});
        const double from = read_number(need(v, "from", p), p + ".from");
        const double to = read_number(need(v, "to", p), p + ".to");
        const std::size_t points = read_count(need(v, "points", p), p + ".points");
        if (points < 1) config_error(p + ".points", "need at least one point");
        const std::string scale = v.contains("scale") ? read_string(v["scale"], p + ".scale") : "linear";
        if (v.contains("endpoint") && !v["endpoint"].is_boolean()) config_error(p + ".endpoint", "expected a boolean");
        const bool endpoint = v.contains("endpoint") ? v["endpoint"].get<bool>() : true;
        if (scale != "linear" && scale != "log") config_error(p + ".scale", "expected linear or log");
        if (scale == "log" && !(from > 0 && to > 0)) config_error(p, "log scale needs positive bounds");
        const double a = scale == "log" ? std::log10(from) : from;
        const double b = scale == "log" ? std::log10(to) : to;
        const double div = static_cast<double>(endpoint ? points - 1 : points);
        for (std::size_t i = 0; i < points; ++i) {
            const double t = (points == 1) ? a : a + (b - a) * static_cast<double>(i) / div;
            s.values.push_back(scale == "log" ? std::pow(10.0, t) : t);
        }
        if (endpoint && points > 1) s.values.back() = to;  // exact end value
    }
    if (s.parameter == "n" || s.parameter == "nu") {
        for (double x : s.values)
            if (!(x >= 0 && x == std::floor(x))) config_error(p + ".values", "integer parameter needs whole numbers");
    }
    return s;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    using detail::config_error;
    detail::check_keys(j, "config",
                       {"geometry", "state", "detection", "measurement", "engine", "witness", "intensity",
                        "sweeps", "output"});
    RunConfig c;
    c.geometry = detail::read_geometry(detail::need(j, "geometry", "config"));
    c.state = detail::read_state(detail::need(j, "state", "config"));
    c.detection = detail::read_detection(detail::need(j, "detection", "config"));
    if (j.contains("measurement")) c.measurement = detail::read_measurement(j["measurement"]);
    if (j.contains("engine")) {
        const auto e = detail::read_string(j["engine"], "engine");
        if (e == "auto") c.engine = EngineKind::Auto;
        else if (e == "exact") c.engine = EngineKind::Exact;
        else if (e == "analytic") c.engine = EngineKind::Analytic;
        else config_error("engine", "expected exact, analytic or auto");
    }
    if (j.contains("witness")) {
        const auto w = detail::read_string(j["witness"], "witness");
        if (w == "fixed") c.witness = WitnessKind::Fixed;
        else if (w == "optimal") c.witness = WitnessKind::Optimal;
        else config_error("witness", "expected fixed or optimal");
    }
    if (j.contains("intensity")) {
        detail::check_keys(j["intensity"], "intensity", {"nu"});
        c.intensity_nu = detail::read_count(detail::need(j["intensity"], "nu", "intensity"), "intensity.nu");
        if (*c.intensity_nu < 1) config_error("intensity.nu", "need at least one detection");
    }
    if (j.contains("sweeps")) {
        if (!j["sweeps"].is_array()) config_error("sweeps", "expected an array");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < j["sweeps"].size(); ++i) {
            const std::string p = "sweeps[" + std::to_string(i) + "]";
            auto s = detail::read_sweep(j["sweeps"][i], p);
            if (!seen.insert(s.parameter).second) config_error(p + ".parameter", "swept twice");
            c.sweeps.push_back(std::move(s));
        }
    }
    if (j.contains("output")) c.output = detail::read_string(j["output"], "output");

    for (const auto& s : c.sweeps) {
        if (s.parameter == "theta_d" && c.detection.mode != DetectionMode::Direction)
            config_error("sweeps", "theta_d needs detection.direction to be an explicit direction");
        if (s.parameter == "theta_w" && c.measurement.mode != MeasurementMode::Direction)
            config_error("sweeps", "theta_w needs measurement.direction");
        if (s.parameter == "nu" && c.detection.mode == DetectionMode::List) {
            for (double x : s.values)
                if (x > static_cast<double>(c.detection.list.size()))
                    config_error("sweeps", "nu exceeds the number of listed detection directions");
        }
    }
    return c;
}

/// Parse JSON text; syntax errors report line and column.
inline RunConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
    return parse_config(j);
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    detail::require(static_cast<bool>(in), ErrorCode::InvalidConfig, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace pss
