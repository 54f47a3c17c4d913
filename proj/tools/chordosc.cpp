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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "chordosc/cli/scenario.hpp"
#include "chordosc/cli/validation.hpp"
#include "chordosc/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kRegime = 2, kIo = 3, kValidation = 4 };

int run_command(const std::string& config, const std::filesystem::path& out) {
    const auto sc = chordosc::scenario::load_scenario(config);
    const auto summary = chordosc::scenario::run_scenario(sc, out);
    for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
    if (summary.discrepancies > 0)
        std::cerr << "note: " << summary.discrepancies
                  << " grid points where the closed-form energy differs from the propagated state (see discrepancies.csv)\n";
    return kOk;
}

int validate_command(const std::string& suite_name, std::optional<double> tol, std::uint64_t seed,
                     const std::filesystem::path& out) {
    const auto suite = chordosc::validation::parse_suite(suite_name);
    if (!suite) throw chordosc::config_error("unknown suite '" + suite_name + "' (maps, kernels, models, fock, all)");
    if (tol && !(*tol > 0.0)) throw chordosc::config_error("--tol must be positive");
    chordosc::validation::ValidationOptions opts;
    opts.tolerance_override = tol;
    opts.seed = seed;
    const auto report = chordosc::validation::run_validation(*suite, opts);

    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw chordosc::io_error("cannot create output directory '" + out.string() + "': " + ec.message());
    const auto path = out / ("validate_" + suite_name + ".json");
    std::ofstream f(path, std::ios::binary);
    f << report.to_json().dump(2) << '\n';
    f.close();
    if (!f) throw chordosc::io_error("failed writing '" + path.string() + "'");

    for (const auto& c : report.checks) {
        const char* status = c.audit ? (c.deviation_detected() ? "AUDIT-DEV" : "AUDIT-OK ") : (c.pass ? "PASS     " : "FAIL     ");
        std::cout << status << ' ' << c.check << "  max_error=" << c.max_error << " tol=" << c.tolerance << '\n';
    }
    return report.all_pass() ? kOk : kValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form chord-function propagation for the open quantum harmonic oscillator"};
    app.set_version_flag("--version", std::string("chordosc ") + CHORDOSC_VERSION_STRING);
    app.require_subcommand(1);

    std::string config;
    std::string run_out;
    auto* run = app.add_subcommand("run", "Propagate a scenario config and write CSV data");
    run->add_option("config", config, "Scenario JSON file")->required();
    run->add_option("--out", run_out, "Output directory")->required();

    std::string suite;
    std::string val_out;
    std::optional<double> tol;
    std::uint64_t seed = chordosc::validation::ValidationOptions{}.seed;
    auto* val = app.add_subcommand("validate", "Cross-check closed forms against the numerical oracles");
    val->add_option("suite", suite, "maps, kernels, models, fock or all")->required();
    val->add_option("--tol", tol, "Override the tolerance of every non-audit check");
    val->add_option("--seed", seed, "Seed for the random draws");
    val->add_option("--out", val_out, "Output directory for the JSON report")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) return run_command(config, run_out);
        return validate_command(suite, tol, seed, val_out);
    } catch (const chordosc::regime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRegime;
    } catch (const chordosc::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const chordosc::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
}
