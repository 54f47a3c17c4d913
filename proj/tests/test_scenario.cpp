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
#include <iterator>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "chordosc/cli/scenario.hpp"
#include "chordosc/errors.hpp"

using namespace chordosc;
using scenario::json;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "chordosc_tests" / name;
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

json base_config() {
    return json::parse(R"({
      "model": {"variant": "FiniteTemp", "gamma": 0.1, "D": 1.0},
      "initial": {"x0": 1.0, "p0": 0.0},
      "time_grid": {"t_start": 0.0, "t_end": 10.0, "n_points": 11}
    })");
}

} // namespace

TEST(ParseScenario, Defaults) {
    const auto sc = scenario::parse_scenario(base_config());
    EXPECT_EQ(sc.model.variant, Variant::FiniteTemp);
    EXPECT_DOUBLE_EQ(sc.x0, 1.0);
    EXPECT_EQ(sc.time_grid.n_points, 11);
    EXPECT_TRUE(sc.wants(scenario::Output::Energy));
    EXPECT_TRUE(sc.wants(scenario::Output::Trajectory));
    EXPECT_FALSE(sc.wants(scenario::Output::WignerGrid));
    EXPECT_DOUBLE_EQ(sc.time_grid.at(10), 10.0);
}

TEST(ParseScenario, DriveDefaultsAmplitude) {
    auto j = base_config();
    j["model"]["variant"] = "DrivenFT";
    j["model"]["drive"] = {{"nu", 0.7}};
    const auto sc = scenario::parse_scenario(j);
    ASSERT_TRUE(sc.model.drive.has_value());
    EXPECT_DOUBLE_EQ(sc.model.drive->amplitude, 0.1);
    EXPECT_DOUBLE_EQ(sc.model.drive->frequency, 0.7);
}

TEST(ParseScenario, StructuralErrors) {
    auto expect_config_error = [](json j) { EXPECT_THROW(scenario::parse_scenario(j), config_error) << j.dump(); };
    auto j = base_config();
    j["extra"] = 1;
    expect_config_error(j);
    j = base_config();
    j["model"]["gama"] = 0.1;
    expect_config_error(j);
    j = base_config();
    j["model"]["variant"] = "Brownian";
    expect_config_error(j);
    j = base_config();
    j["time_grid"]["t_end"] = 0.0;
    expect_config_error(j);
    j = base_config();
    j["time_grid"]["n_points"] = 1;
    expect_config_error(j);
    j = base_config();
    j["time_grid"]["n_points"] = 2.5;
    expect_config_error(j);
    j = base_config();
    j["wigner_window"] = {{"n_q", 4}};
    expect_config_error(j);
    j = base_config();
    j["outputs"] = {"energy", "movie"};
    expect_config_error(j);
    j = base_config();
    j["model"]["gamma"] = "0.1";
    expect_config_error(j);
    j = base_config();
    j["model"]["variant"] = "DrivenCL";
    expect_config_error(j);
}

TEST(ParseScenario, ModelErrorsKeepTheirType) {
    auto j = base_config();
    j["model"]["variant"] = "CLUnder";
    j["model"]["gamma"] = 1.0;
    EXPECT_THROW(scenario::parse_scenario(j), regime_error);
    j["model"]["gamma"] = -0.5;
    EXPECT_THROW(scenario::parse_scenario(j), std::invalid_argument);
}

TEST(LoadScenario, FileErrors) {
    const auto dir = fresh_dir("load");
    std::filesystem::create_directories(dir);
    EXPECT_THROW(scenario::load_scenario(dir / "missing.json"), config_error);
    std::ofstream(dir / "broken.json") << "{ \"model\": ";
    EXPECT_THROW(scenario::load_scenario(dir / "broken.json"), config_error);
}

TEST(FormatNumber, SeventeenSignificantDigits) {
    EXPECT_EQ(scenario::format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(scenario::format_number(2.0), "2");
    EXPECT_EQ(scenario::format_number(-0.375), "-0.375");
    EXPECT_EQ(scenario::format_number(1e22), "1e+22");
    EXPECT_EQ(std::stod(scenario::format_number(1.0 / 3.0)), 1.0 / 3.0);
    EXPECT_EQ(scenario::format_label(0.1), "0.1");
}

TEST(RunScenario, TwoPointGrid) {
    auto j = base_config();
    j["time_grid"]["n_points"] = 2;
    const auto dir = fresh_dir("two_points");
    const auto summary = scenario::run_scenario(scenario::parse_scenario(j), dir);
    EXPECT_EQ(summary.discrepancies, 0);
    const auto energy_csv = slurp(dir / "energy.csv");
    EXPECT_EQ(count_lines(energy_csv), 3);
    EXPECT_EQ(energy_csv.rfind("sigma,E_closed_form,E_from_state\n0,1,1\n", 0), 0u);
    EXPECT_EQ(energy_csv.find('\r'), std::string::npos);
    EXPECT_EQ(count_lines(slurp(dir / "trajectory.csv")), 3);
    EXPECT_EQ(count_lines(slurp(dir / "discrepancies.csv")), 1);
}

TEST(RunScenario, EnergyColumnsAgreeForFiniteTemperature) {
    const auto dir = fresh_dir("energy");
    scenario::run_scenario(scenario::parse_scenario(base_config()), dir);
    std::istringstream in(slurp(dir / "energy.csv"));
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        double sigma, closed, exact;
        char c1, c2;
        std::istringstream(line) >> sigma >> c1 >> closed >> c2 >> exact;
        EXPECT_NEAR(closed, exact, 1e-9);
        ++rows;
    }
    EXPECT_EQ(rows, 11);
}

TEST(RunScenario, DeterministicOutput) {
    auto j = base_config();
    j["outputs"] = {"energy", "trajectory", "marginals", "wigner_grid"};
    j["wigner_window"] = {{"n_q", 9}, {"n_p", 8}, {"times", {0.0, 2.5}}};
    const auto a = fresh_dir("det_a");
    const auto b = fresh_dir("det_b");
    const auto sc = scenario::parse_scenario(j);
    const auto sa = scenario::run_scenario(sc, a);
    scenario::run_scenario(sc, b);
    ASSERT_EQ(sa.files.size(), 6u);
    for (const auto& f : sa.files) EXPECT_EQ(slurp(f), slurp(b / f.filename())) << f;
    EXPECT_TRUE(std::filesystem::exists(a / "wigner_2.5.csv"));
    EXPECT_EQ(count_lines(slurp(a / "wigner_0.csv")), 1 + 9 * 8);
}

TEST(RunScenario, ClosedFormDeviationsGoToDiscrepancies) {
    auto j = base_config();
    j["model"] = {{"variant", "DrivenCL"}, {"gamma", 0.1}, {"D", 1.0}, {"drive", {{"lambda", 0.1}, {"nu", 1.0}}}};
    j["initial"] = {{"x0", 0.0}, {"p0", 0.0}};
    const auto dir = fresh_dir("discrepancies");
    const auto summary = scenario::run_scenario(scenario::parse_scenario(j), dir);
    EXPECT_EQ(summary.discrepancies, 10); // every point after sigma = 0
    EXPECT_EQ(count_lines(slurp(dir / "discrepancies.csv")), 11);
}

TEST(RunScenario, WarnsOnUnphysicalStates) {
    auto j = base_config();
    j["model"] = {{"variant", "CLUnder"}, {"gamma", 0.1}, {"D", 0.1}};
    const auto summary = scenario::run_scenario(scenario::parse_scenario(j), fresh_dir("unphysical"));
    ASSERT_EQ(summary.warnings.size(), 1u);
    EXPECT_NE(summary.warnings[0].find("uncertainty"), std::string::npos);
}

TEST(RunScenario, UnwritableDirectory) {
    const auto sc = scenario::parse_scenario(base_config());
    EXPECT_THROW(scenario::run_scenario(sc, "/proc/chordosc_no_such_dir"), io_error);
}
