// Copyright 2026 The chordosc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scenario configs (JSON) and the CSV writers behind `chordosc run`.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "chordosc/chord_state.hpp"
#include "chordosc/errors.hpp"
#include "chordosc/models.hpp"

namespace chordosc::scenario {

using nlohmann::json;

enum class Output { Energy, Trajectory, WignerGrid, Marginals };

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 10.0;
    int n_points = 101;

    double at(int i) const {
        if (i == n_points - 1) return t_end;
        return t_start + (t_end - t_start) * static_cast<double>(i) / static_cast<double>(n_points - 1);
    }
};

struct WignerWindow {
    double q_min = -5.0;
    double q_max = 5.0;
    double p_min = -5.0;
    double p_max = 5.0;
    int n_q = 64;
    int n_p = 64;
    /// Grid times to dump; empty means first and last.
    std::vector<double> times;
};

struct Scenario {
    ModelParams model;
    double x0 = 0.0;
    double p0 = 0.0;
    TimeGrid time_grid;
    std::set<Output> outputs{Output::Energy, Output::Trajectory};
    WignerWindow wigner_window;
    std::uint64_t seed = 0;
    std::string description;

    bool wants(Output o) const { return outputs.count(o) > 0; }
};

namespace detail {

inline void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw config_error(std::string(where) + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw config_error(std::string(where) + ": unknown key '" + key + "'");
    }
}

inline double number(const json& obj, const char* key, std::string_view where, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw config_error(std::string(where) + "." + key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw config_error(std::string(where) + "." + key + ": must be finite");
    return x;
}

inline double required_number(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key)) throw config_error(std::string(where) + "." + key + ": missing");
    return number(obj, key, where, 0.0);
}

inline int integer(const json& obj, const char* key, std::string_view where, int fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw config_error(std::string(where) + "." + key + ": expected an integer");
    return v.get<int>();
}

inline std::string text(const json& obj, const char* key, std::string_view where) {
    const auto& v = obj.at(key);
    if (!v.is_string()) throw config_error(std::string(where) + "." + key + ": expected a string");
    return v.get<std::string>();
}

inline ModelParams parse_model(const json& j) {
    reject_unknown(j, "model", {"variant", "gamma", "D", "omega_c", "od_regime", "drive"});
    if (!j.contains("variant")) throw config_error("model.variant: missing");
    const auto name = text(j, "variant", "model");
    const auto v = parse_variant(name);
    if (!v) throw config_error("model.variant: unknown variant '" + name + "'");
    ModelParams p;
    p.variant = *v;
    p.gamma = required_number(j, "gamma", "model");
    p.D = number(j, "D", "model", 0.0);
    p.omega_c = number(j, "omega_c", "model", 0.0);
    if (j.contains("od_regime")) {
        const auto r = text(j, "od_regime", "model");
        if (r == "HighT") p.od_regime = OverdampedRegime::HighT;
        else if (r == "LowT") p.od_regime = OverdampedRegime::LowT;
        else throw config_error("model.od_regime: expected HighT or LowT");
    }
    if (j.contains("drive")) {
        const auto& d = j.at("drive");
        reject_unknown(d, "model.drive", {"lambda", "nu"});
        p.drive = Drive{number(d, "lambda", "model.drive", 0.1), required_number(d, "nu", "model.drive")};
    } else if (p.is_driven()) {
        throw config_error("model.drive: required for driven variants");
    }
    return p;
}

inline Output parse_output(const std::string& name) {
    if (name == "energy") return Output::Energy;
    if (name == "trajectory") return Output::Trajectory;
    if (name == "wigner_grid") return Output::WignerGrid;
    if (name == "marginals") return Output::Marginals;
    throw config_error("outputs: unknown output '" + name + "'");
}

} // namespace detail

/// Parses and validates a scenario. Structural problems raise config_error;
/// model parameters are checked by ModelParams::validate, which raises
/// std::invalid_argument or regime_error.
inline Scenario parse_scenario(const json& j) {
    using namespace detail;
    reject_unknown(j, "config",
                   {"model", "initial", "time_grid", "outputs", "wigner_window", "seed", "description"});
    if (!j.contains("model")) throw config_error("config.model: missing");
    Scenario sc;
    sc.model = parse_model(j.at("model"));

    if (j.contains("initial")) {
        const auto& in = j.at("initial");
        reject_unknown(in, "initial", {"x0", "p0"});
        sc.x0 = number(in, "x0", "initial", 0.0);
        sc.p0 = number(in, "p0", "initial", 0.0);
    }

    if (!j.contains("time_grid")) throw config_error("config.time_grid: missing");
    const auto& tg = j.at("time_grid");
    reject_unknown(tg, "time_grid", {"t_start", "t_end", "n_points"});
    sc.time_grid.t_start = number(tg, "t_start", "time_grid", 0.0);
    sc.time_grid.t_end = required_number(tg, "t_end", "time_grid");
    sc.time_grid.n_points = integer(tg, "n_points", "time_grid", 101);
    if (!(sc.time_grid.t_end > sc.time_grid.t_start)) throw config_error("time_grid: t_end must exceed t_start");
    if (sc.time_grid.n_points < 2) throw config_error("time_grid.n_points: must be >= 2");

    if (j.contains("outputs")) {
        const auto& outs = j.at("outputs");
        if (!outs.is_array()) throw config_error("outputs: expected an array of names");
        sc.outputs.clear();
        for (const auto& o : outs) {
            if (!o.is_string()) throw config_error("outputs: expected an array of names");
            sc.outputs.insert(parse_output(o.get<std::string>()));
        }
    }

    if (j.contains("wigner_window")) {
        const auto& w = j.at("wigner_window");
        reject_unknown(w, "wigner_window", {"q_min", "q_max", "p_min", "p_max", "n_q", "n_p", "times"});
        auto& ww = sc.wigner_window;
        ww.q_min = number(w, "q_min", "wigner_window", ww.q_min);
        ww.q_max = number(w, "q_max", "wigner_window", ww.q_max);
        ww.p_min = number(w, "p_min", "wigner_window", ww.p_min);
        ww.p_max = number(w, "p_max", "wigner_window", ww.p_max);
        ww.n_q = integer(w, "n_q", "wigner_window", ww.n_q);
        ww.n_p = integer(w, "n_p", "wigner_window", ww.n_p);
        if (w.contains("times")) {
            if (!w.at("times").is_array()) throw config_error("wigner_window.times: expected an array");
            for (const auto& t : w.at("times")) {
                if (!t.is_number()) throw config_error("wigner_window.times: expected numbers");
                const double x = t.get<double>();
                if (x < sc.time_grid.t_start || x > sc.time_grid.t_end)
                    throw config_error("wigner_window.times: outside the time grid");
                ww.times.push_back(x);
            }
        }
        if (!(ww.q_max > ww.q_min) || !(ww.p_max > ww.p_min))
            throw config_error("wigner_window: max must exceed min");
    }
    if (sc.wigner_window.n_q < 8 || sc.wigner_window.n_p < 8)
        throw config_error("wigner_window: grid dimensions must be >= 8");

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw config_error("config.seed: expected a non-negative integer");
        sc.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("description")) sc.description = text(j, "description", "config");

    sc.model.validate();
    return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(j);
}

/// 17 significant digits, '.' decimal separator regardless of locale.
inline std::string format_number(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Shortest round-trip form, for file names and messages.
inline std::string format_label(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace detail {

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header) : path_(path) {
        out_.open(path, std::ios::binary);
        if (!out_) throw io_error("cannot write '" + path.string() + "'");
        bool first = true;
        for (auto h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << '\n';
    }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!first) out_ << ',';
            out_ << format_number(v);
            first = false;
        }
        out_ << '\n';
    }

    void close() {
        out_.close();
        if (!out_) throw io_error("failed writing '" + path_.string() + "'");
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

} // namespace detail

/// Rows where the closed-form and state-derived energies differ by more
/// than this go to discrepancies.csv.
inline constexpr double kEnergyAgreement = 1e-9;

struct RunSummary {
    std::vector<std::filesystem::path> files;
    int discrepancies = 0;
    std::vector<std::string> warnings;
};

/// Propagates the initial coherent state from tau = t_start to every grid
/// time in one step each and writes the requested outputs to out_dir. The
/// sigma column is the elapsed time t - t_start.
inline RunSummary run_scenario(const Scenario& sc, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create output directory '" + out_dir.string() + "': " + ec.message());

    const auto& g = sc.time_grid;
    const auto initial = coherent_state(sc.x0, sc.p0);
    const double e0 = energy(initial);
    std::vector<GaussianChordState> states;
    states.reserve(g.n_points);
    for (int i = 0; i < g.n_points; ++i) states.push_back(propagate(initial, sc.model, g.t_start, g.at(i) - g.t_start));

    RunSummary summary;
    for (int i = 0; i < g.n_points; ++i) {
        if (auto w = physicality_warning(states[i])) {
            summary.warnings.push_back("sigma=" + format_label(g.at(i) - g.t_start) + ": " + *w);
            break;
        }
    }

    if (sc.wants(Output::Energy)) {
        detail::CsvWriter e(out_dir / "energy.csv", {"sigma", "E_closed_form", "E_from_state"});
        detail::CsvWriter d(out_dir / "discrepancies.csv", {"sigma", "E_closed_form", "E_from_state", "abs_diff"});
        for (int i = 0; i < g.n_points; ++i) {
            const double sigma = g.at(i) - g.t_start;
            const double closed = closed_form_energy(sc.model, e0, g.t_start, sigma);
            const double exact = energy(states[i]);
            e.row({sigma, closed, exact});
            const double diff = std::abs(closed - exact);
            if (!(diff <= kEnergyAgreement)) {
                d.row({sigma, closed, exact, diff});
                ++summary.discrepancies;
            }
        }
        e.close();
        d.close();
        summary.files.push_back(out_dir / "energy.csv");
        summary.files.push_back(out_dir / "discrepancies.csv");
    }

    if (sc.wants(Output::Trajectory)) {
        detail::CsvWriter t(out_dir / "trajectory.csv", {"sigma", "x0_sigma", "p0_sigma"});
        for (int i = 0; i < g.n_points; ++i) t.row({g.at(i) - g.t_start, states[i].mean()(0), states[i].mean()(1)});
        t.close();
        summary.files.push_back(out_dir / "trajectory.csv");
    }

    if (sc.wants(Output::Marginals)) {
        detail::CsvWriter m(out_dir / "marginals.csv", {"sigma", "q_mean", "q_variance", "p_mean", "p_variance"});
        for (int i = 0; i < g.n_points; ++i) {
            const auto mq = marginal(states[i], Axis::Position);
            const auto mp = marginal(states[i], Axis::Momentum);
            m.row({g.at(i) - g.t_start, mq.mean, mq.variance, mp.mean, mp.variance});
        }
        m.close();
        summary.files.push_back(out_dir / "marginals.csv");
    }

    if (sc.wants(Output::WignerGrid)) {
        const auto& ww = sc.wigner_window;
        std::vector<double> times = ww.times;
        if (times.empty()) times = {g.t_start, g.t_end};
        for (double t : times) {
            const double sigma = t - g.t_start;
            const auto state = propagate(initial, sc.model, g.t_start, sigma);
            if (!state.is_positive_definite()) {
                summary.warnings.push_back("sigma=" + format_label(sigma) +
                                           ": covariance not positive definite, Wigner grid skipped");
                continue;
            }
            const auto w = to_wigner(state);
            const auto path = out_dir / ("wigner_" + format_label(sigma) + ".csv");
            detail::CsvWriter out(path, {"q", "p", "W"});
            for (int iq = 0; iq < ww.n_q; ++iq) {
                const double q = ww.q_min + (ww.q_max - ww.q_min) * iq / (ww.n_q - 1);
                for (int ip = 0; ip < ww.n_p; ++ip) {
                    const double p = ww.p_min + (ww.p_max - ww.p_min) * ip / (ww.n_p - 1);
                    out.row({q, p, w.density(q, p)});
                }
            }
            out.close();
            summary.files.push_back(path);
        }
    }
    return summary;
}

} // namespace chordosc::scenario
