/*
Copyright 2026 The fclbench Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <filesystem>

#include "fcl/bench.hpp"

using namespace fcl;

namespace {

nlohmann::json small_manifest() {
    return nlohmann::json::parse(R"({
        "experiment_id": "unit",
        "seed": 5,
        "generate": [{"size": [3], "alpha": [0.65], "rho": [3], "ruggedness": [3, 4], "instances": 3}],
        "solvers": [{"name": "sa", "num_reads": 20, "sweeps": 200},
                    {"name": "qmc", "num_reads": 5, "sweeps": 100, "slices": 8},
                    {"name": "hfs", "num_reads": 5},
                    {"name": "exact", "num_reads": 200}],
        "metrics": ["tts", "ttav", "kld", "l1"],
        "workers": 2,
        "bootstrap_resamples": 200
    })");
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("fcl_bench_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

} // namespace

TEST(Bench, FormatNumber) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1e-6), "1e-06");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(format_number(kInfinity), "inf");
    EXPECT_EQ(std::stod(format_number(123.456e-7)), 123.456e-7);
}

TEST(Bench, Statistics) {
    EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
    EXPECT_DOUBLE_EQ(median({4, 1, 2, 3}), 2.5);
    EXPECT_TRUE(std::isinf(median({1, kInfinity})));
    EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
    EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
    // ties get average ranks: x ranks 1, 2.5, 2.5, 4
    EXPECT_NEAR(spearman({1, 2, 2, 3}, {1, 2, 3, 4}), 0.9486832980505138, 1e-12);
    const auto ci = bootstrap_median({1, 2, 3, 4, 5, 6, 7, 8, 9}, 500, 1);
    EXPECT_DOUBLE_EQ(ci.median, 5.0);
    EXPECT_LE(ci.low, 5.0);
    EXPECT_GE(ci.high, 5.0);
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(hex64(fnv1a("a")), "af63dc4c8601ec8c");
}

TEST(Bench, ManifestValidation) {
    EXPECT_NO_THROW(parse_manifest(small_manifest()));
    auto bad = small_manifest();
    bad["colour"] = "blue";
    EXPECT_THROW(parse_manifest(bad), InvalidParameter);
    bad = small_manifest();
    bad["metrics"] = {"tts", "speed"};
    EXPECT_THROW(parse_manifest(bad), InvalidParameter);
    bad = small_manifest();
    bad["solvers"][0]["temperature"] = 2;
    EXPECT_THROW(parse_manifest(bad), InvalidParameter);
    bad = small_manifest();
    bad["solvers"] = {"annealer"};
    EXPECT_THROW(parse_manifest(bad), InvalidParameter);
    bad = small_manifest();
    bad["instance_files"] = {"/nonexistent/instance.json"};
    EXPECT_THROW(parse_manifest(bad), InvalidParameter);
    bad = small_manifest();
    bad["seed"] = "five";
    EXPECT_THROW(parse_manifest(bad), InvalidParameter);
}

TEST(Bench, ManifestRoundTripFillsDefaults) {
    const auto m = parse_manifest(small_manifest());
    const auto j = manifest_to_json(m);
    EXPECT_EQ(j["solvers"][0]["beta_end"], 3.0);
    EXPECT_EQ(j["solvers"][1]["beta"], 30.0);
    const auto again = parse_manifest(j);
    EXPECT_EQ(manifest_to_json(again), j);
}

TEST(Bench, ConfigHashTracksResolvedOptions) {
    const auto a = resolve_solver_options({"sa", {{"sweeps", 100}}}, 1.0);
    const auto b = resolve_solver_options({"sa", {{"sweeps", 100}, {"beta_end", 3.0}}}, 1.0);
    const auto c = resolve_solver_options({"sa", {{"sweeps", 101}}}, 1.0);
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_NE(config_hash(a), config_hash(c));
    EXPECT_EQ(resolve_solver_options({"qmc", nlohmann::json::object()}, 0.01)["num_reads"], 50);
}

TEST(Bench, EmptyManifest) {
    RunManifest m;
    m.output_dir = scratch("empty").string();
    const auto report = run_benchmark(m);
    EXPECT_EQ(report.exit_code, 0);
    EXPECT_TRUE(report.rows.empty());
    EXPECT_EQ(read_text_file(m.output_dir + "/metrics.csv"), kMetricsCsvHeader);
    std::filesystem::remove_all(m.output_dir);
}

TEST(Bench, RunIsDeterministic) {
    auto m = parse_manifest(small_manifest());
    m.output_dir = scratch("a").string();
    const auto a = run_benchmark(m);
    auto m2 = m;
    m2.output_dir = scratch("b").string();
    m2.workers = 1;
    const auto b = run_benchmark(m2);
    EXPECT_EQ(a.exit_code, 0);
    for (const char* f : {"metrics.csv", "curves.csv", "relative_work.csv", "aggregate.json"})
        EXPECT_EQ(read_text_file(m.output_dir + "/" + f), read_text_file(m2.output_dir + "/" + f)) << f;
    // 6 instances x 4 solvers x (tts, p_ground, time_per_anneal, ttav x2, kld, l1)
    EXPECT_EQ(a.rows.size(), 6u * 4u * 7u);
    for (const auto& r : a.rows) {
        if (r.solver == "exact" && r.metric == "p_ground") EXPECT_EQ(r.value, 1.0);
        if (r.metric == "tts") EXPECT_GT(r.value, 0.0);
    }
    const auto rel = read_text_file(m.output_dir + "/relative_work.csv");
    EXPECT_NE(rel.find("sa,3,0.65,3,3,1,"), std::string::npos) << rel;
    std::filesystem::remove_all(m.output_dir);
    std::filesystem::remove_all(m2.output_dir);
}

TEST(Bench, PartialFailureExitCode) {
    auto j = small_manifest();
    // a 1x1 lattice has no couplers, so generation fails for that block
    j["generate"].push_back({{"size", {1}}, {"instances", 1}});
    j["solvers"] = {{{"name", "sa"}, {"num_reads", 5}, {"sweeps", 50}}};
    j["metrics"] = {"tts"};
    auto m = parse_manifest(j);
    m.output_dir = scratch("partial").string();
    const auto report = run_benchmark(m);
    EXPECT_EQ(report.exit_code, 2);
    EXPECT_EQ(report.failures, 1u);
    const auto csv = read_text_file(m.output_dir + "/metrics.csv");
    EXPECT_NE(csv.find("failed:"), std::string::npos);
    std::filesystem::remove_all(m.output_dir);
}

TEST(Bench, LogicalProblemsAndInstanceFiles) {
    const auto dir = scratch("files");
    std::filesystem::create_directories(dir);
    const auto inst = generate_instance({0.65, 3, 3, 3, 1}, build_chimera(3));
    write_instance((dir / "one.json").string(), inst);
    nlohmann::json j = {{"instance_files", {"one.json"}},
                        {"problem", "logical"},
                        {"solvers", {{{"name", "sa"}, {"num_reads", 20}, {"sweeps", 100}}}},
                        {"output_dir", "out"}};
    const auto m = parse_manifest(j, dir);
    EXPECT_EQ(m.instance_files.front(), (dir / "one.json").string());
    const auto report = run_benchmark(m);
    EXPECT_EQ(report.exit_code, 0);
    ASSERT_FALSE(report.rows.empty());
    EXPECT_EQ(report.rows.front().instance_id, "one");
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / "metrics.csv"));
    std::filesystem::remove_all(dir);
}
