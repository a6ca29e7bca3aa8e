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

// fclbench: generate frustrated-cluster-loop instances, run solvers, compute
// exact ground states and valleys, and drive benchmark manifests.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcl/bench.hpp"
#include "fcl/decorrelation.hpp"
#include "fcl/exact.hpp"
#include "fcl/generator.hpp"
#include "fcl/io.hpp"
#include "fcl/metrics.hpp"
#include "fcl/valleys.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitPartial = 2;

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else fcl::write_text_file(path, text);
}

struct GenerateArgs {
    int size = 4;
    double alpha = 0.65;
    int rho = 3;
    int ruggedness = 3;
    std::uint64_t seed = 0;
    double qubit_loss = 0.0;
    double coupler_loss = 0.0;
};

void add_generate_flags(CLI::App* app, GenerateArgs& g) {
    app->add_option("--size", g.size, "Chimera size s (C_s has 8 s^2 qubits)")->capture_default_str();
    app->add_option("--alpha", g.alpha, "loops per logical spin")->capture_default_str();
    app->add_option("--rho", g.rho, "bound on |J| of logical couplings")->capture_default_str();
    app->add_option("--ruggedness", g.ruggedness, "R; inter-cell couplings are J/R")->capture_default_str();
    app->add_option("--seed", g.seed, "generation seed")->capture_default_str();
    app->add_option("--qubit-loss", g.qubit_loss, "fraction of qubits removed from the working graph")
        ->capture_default_str();
    app->add_option("--coupler-loss", g.coupler_loss, "fraction of couplers removed from the working graph")
        ->capture_default_str();
}

fcl::FclInstance generate(const GenerateArgs& g) {
    fcl::FclParams p{g.alpha, g.rho, g.ruggedness, g.size, g.seed};
    fcl::ChimeraGraph working = fcl::build_chimera(g.size);
    if (g.qubit_loss > 0.0 || g.coupler_loss > 0.0) {
        const auto d = fcl::sample_yield(working, g.qubit_loss, g.coupler_loss, fcl::derive_seed(g.seed, 0x79));
        working = fcl::apply_yield(working, d.missing_qubits, d.missing_couplers);
    }
    return fcl::generate_instance(p, working);
}

nlohmann::json valley_document(const fcl::FclInstance& inst, const fcl::GroundStateSet& gs) {
    nlohmann::json doc = {{"ground_states", fcl::to_json(gs)}};
    if (!gs.cap_exceeded) {
        doc["valleys"] = fcl::to_json(fcl::ValleyDecomposition(gs));
        doc["overlap"] = fcl::to_json(fcl::overlap_stats(gs));
    }
    doc["planted_logical_energy"] = inst.planted_logical_energy;
    return doc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frustrated-cluster-loop Ising benchmark toolkit"};
    app.require_subcommand(1);
    std::atomic<int> exit_code{kExitOk};

    // generate
    GenerateArgs gen;
    std::string gen_output = "-";
    auto* generate_cmd = app.add_subcommand("generate", "generate an FCL instance file");
    add_generate_flags(generate_cmd, gen);
    generate_cmd->add_option("--output", gen_output, "instance file (- for stdout)")->capture_default_str();
    generate_cmd->callback([&] {
        const auto inst = generate(gen);
        emit(gen_output, fcl::instance_to_json(inst).dump(1) + "\n");
        std::cerr << "planted logical energy " << inst.planted_logical_energy << ", native energy "
                  << fcl::format_number(static_cast<double>(inst.planted_native_energy) / inst.params.ruggedness)
                  << ", loops " << inst.loops.size() << "\n";
    });

    // solve
    std::string solve_instance, solve_solver = "sa", solve_problem = "native", solve_options = "{}", solve_output = "-";
    std::uint64_t solve_seed = 0;
    double solve_budget = 1.0;
    unsigned solve_workers = 0;
    auto* solve_cmd = app.add_subcommand("solve", "sample an instance with one solver");
    solve_cmd->add_option("--instance", solve_instance, "instance file")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--solver", solve_solver, "sa, qmc, svmc, hfs or exact")->capture_default_str();
    solve_cmd->add_option("--problem", solve_problem, "native or logical")->capture_default_str();
    solve_cmd->add_option("--options", solve_options, "solver options as a JSON object")->capture_default_str();
    solve_cmd->add_option("--seed", solve_seed, "solver seed")->capture_default_str();
    solve_cmd->add_option("--budget-scale", solve_budget, "scales the default read count")->capture_default_str();
    solve_cmd->add_option("--workers", solve_workers, "worker threads (0: FCL_WORKERS or hardware)")
        ->capture_default_str();
    solve_cmd->add_option("--output", solve_output, "sample CSV (- for stdout)")->capture_default_str();
    solve_cmd->callback([&] {
        const auto inst = fcl::read_instance(solve_instance);
        const auto kind = fcl::parse_problem_kind(solve_problem);
        const auto resolved =
            fcl::resolve_solver_options({solve_solver, fcl::parse_json(solve_options, "--options")}, solve_budget);
        std::optional<fcl::GroundStateSet> gs;
        if (solve_solver == "exact") gs = fcl::enumerate_ground_states(inst.logical, inst.logical_graph);
        const unsigned workers = solve_workers > 0 ? solve_workers : fcl::default_workers();
        const auto samples = fcl::run_solver(resolved, inst, kind, solve_seed, workers, gs ? &*gs : nullptr);
        const auto& problem = kind == fcl::ProblemKind::native ? inst.native_problem() : inst.logical;
        std::ostringstream csv;
        fcl::write_samples_csv(csv, samples, problem.scale());
        emit(solve_output, csv.str());
        const auto ground = kind == fcl::ProblemKind::native ? inst.planted_native_energy : inst.planted_logical_energy;
        const auto tts = fcl::estimate_tts(samples, ground);
        std::cerr << resolved.dump() << "\nground hits " << tts.hits << "/" << tts.reads << ", TTS "
                  << fcl::format_number(tts.tts) << " s [" << fcl::format_number(tts.ci_low) << ", "
                  << fcl::format_number(tts.ci_high) << "]\n";
    });

    // exact
    std::string exact_instance, exact_output = "-";
    std::uint64_t exact_cap = fcl::kDefaultGroundStateCap;
    auto* exact_cmd = app.add_subcommand("exact", "exact ground energy and ground-state enumeration");
    exact_cmd->add_option("--instance", exact_instance, "instance file")->required()->check(CLI::ExistingFile);
    exact_cmd->add_option("--cap", exact_cap, "ground-state enumeration cap")->capture_default_str();
    exact_cmd->add_option("--output", exact_output, "analysis JSON (- for stdout)")->capture_default_str();
    exact_cmd->callback([&] {
        const auto inst = fcl::read_instance(exact_instance);
        const auto gs = fcl::enumerate_ground_states(inst.logical, inst.logical_graph, exact_cap);
        nlohmann::json doc = {{"ground_states", fcl::to_json(gs)},
                              {"planted_logical_energy", inst.planted_logical_energy},
                              {"planted_is_ground", gs.ground_energy == inst.planted_logical_energy}};
        emit(exact_output, doc.dump(1) + "\n");
    });

    // valleys
    std::string valleys_instance, valleys_output = "-";
    std::uint64_t valleys_cap = fcl::kDefaultGroundStateCap;
    auto* valleys_cmd = app.add_subcommand("valleys", "valley decomposition and overlap statistics");
    valleys_cmd->add_option("--instance", valleys_instance, "instance file")->required()->check(CLI::ExistingFile);
    valleys_cmd->add_option("--cap", valleys_cap, "ground-state enumeration cap")->capture_default_str();
    valleys_cmd->add_option("--output", valleys_output, "analysis JSON (- for stdout)")->capture_default_str();
    valleys_cmd->callback([&] {
        const auto inst = fcl::read_instance(valleys_instance);
        const auto gs = fcl::enumerate_ground_states(inst.logical, inst.logical_graph, valleys_cap);
        emit(valleys_output, valley_document(inst, gs).dump(1) + "\n");
    });

    // mine
    std::vector<std::string> mine_instances;
    fcl::MiningCriteria mine_criteria;
    std::string mine_output = "-";
    auto* mine_cmd = app.add_subcommand("mine", "filter instances by ground-state structure");
    mine_cmd->add_option("--instance", mine_instances, "instance files")->required()->check(CLI::ExistingFile);
    mine_cmd->add_option("--cap", mine_criteria.ground_state_cap, "ground-state cap")->capture_default_str();
    mine_cmd->add_option("--min-valleys", mine_criteria.min_valleys, "minimum valley count")->capture_default_str();
    mine_cmd->add_option("--max-overlap", mine_criteria.max_mean_overlap, "reject at or above this mean overlap")
        ->capture_default_str();
    mine_cmd->add_option("--output", mine_output, "result JSON (- for stdout)")->capture_default_str();
    mine_cmd->callback([&] {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& path : mine_instances) {
            nlohmann::json entry = {{"instance", path}};
            try {
                const auto r = fcl::mine_filter(fcl::read_instance(path), mine_criteria);
                entry["accept"] = r.accept;
                entry["reasons"] = r.reasons;
                entry["ground_state_count"] = r.ground_states.count;
                if (r.valleys) entry["num_valleys"] = r.valleys->num_valleys();
                if (r.overlap) entry["mean_overlap"] = r.overlap->mean_overlap;
            } catch (const fcl::Error& e) {
                entry["error"] = e.what();
                exit_code = kExitPartial;
            }
            out.push_back(entry);
        }
        emit(mine_output, out.dump(1) + "\n");
    });

    // bench
    std::string bench_manifest, bench_output_dir;
    double bench_budget = 0.0;
    unsigned bench_workers = 0;
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark manifest");
    bench_cmd->add_option("--manifest", bench_manifest, "manifest JSON")->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--budget-scale", bench_budget, "overrides the manifest budget_scale");
    bench_cmd->add_option("--workers", bench_workers, "overrides the manifest worker count");
    bench_cmd->add_option("--output-dir", bench_output_dir, "overrides the manifest output_dir");
    bench_cmd->callback([&] {
        auto doc = fcl::parse_json(fcl::read_text_file(bench_manifest), bench_manifest);
        if (bench_budget > 0.0) doc["budget_scale"] = bench_budget;
        if (!bench_output_dir.empty()) doc["output_dir"] = std::filesystem::absolute(bench_output_dir).string();
        auto manifest = fcl::parse_manifest(doc, std::filesystem::path(bench_manifest).parent_path());
        if (bench_workers > 0) manifest.workers = bench_workers;
        const auto report = fcl::run_benchmark(manifest);
        std::cerr << report.rows.size() << " rows, " << report.failures << " failures -> " << manifest.output_dir
                  << "\n";
        exit_code = report.exit_code;
    });

    // decorrelate
    std::vector<std::string> dec_instances;
    GenerateArgs dec_gen;
    int dec_count = 0;
    fcl::DecorrelationOptions dec_options;
    std::uint64_t dec_seed = 0;
    std::string dec_output = "-";
    unsigned dec_workers = 0;
    auto* dec_cmd = app.add_subcommand("decorrelate", "PT temperature-index autocorrelation times");
    dec_cmd->add_option("--instance", dec_instances, "instance files")->check(CLI::ExistingFile);
    dec_cmd->add_option("--generate", dec_count, "generate this many instances instead")->capture_default_str();
    add_generate_flags(dec_cmd, dec_gen);
    dec_cmd->add_option("--replicas", dec_options.replicas, "starting replica count (calibration adapts it)")
        ->capture_default_str();
    bool fixed_replicas = false;
    dec_cmd->add_flag("--fixed-replicas", fixed_replicas, "keep the replica count fixed during calibration");
    dec_cmd->add_option("--sweeps", dec_options.sweeps, "long-run length in sweeps")->capture_default_str();
    dec_cmd->add_option("--burst-sweeps", dec_options.ladder.burst_sweeps, "calibration burst length")
        ->capture_default_str();
    dec_cmd->add_option("--max-iterations", dec_options.ladder.max_iterations, "calibration iterations")
        ->capture_default_str();
    dec_cmd->add_option("--pt-seed", dec_seed, "PT seed")->capture_default_str();
    dec_cmd->add_option("--workers", dec_workers, "worker threads")->capture_default_str();
    dec_cmd->add_option("--output", dec_output, "CSV (- for stdout)")->capture_default_str();
    dec_cmd->callback([&] {
        dec_options.ladder.adapt_replica_count = !fixed_replicas;
        std::vector<std::string> ids;
        std::vector<std::optional<fcl::FclInstance>> instances;
        for (const auto& path : dec_instances) {
            ids.push_back(std::filesystem::path(path).stem().string());
            instances.push_back(fcl::read_instance(path));
        }
        for (int k = 0; k < dec_count; ++k) {
            GenerateArgs g = dec_gen;
            g.seed = fcl::derive_seed(dec_gen.seed, static_cast<std::uint64_t>(k));
            ids.push_back("gen-" + std::to_string(k));
            instances.push_back(generate(g));
        }
        std::vector<std::string> lines(instances.size());
        fcl::parallel_for(instances.size(), dec_workers > 0 ? dec_workers : fcl::default_workers(), [&](std::size_t i) {
            const auto& inst = *instances[i];
            std::string line = fcl::csv_field(ids[i]) + ',' + std::to_string(inst.params.seed) + ',' +
                               fcl::format_number(inst.params.alpha) + ',' + std::to_string(inst.params.rho) + ',' +
                               std::to_string(inst.params.ruggedness) + ',' + std::to_string(inst.params.size) + ',';
            try {
                const auto r = fcl::measure_decorrelation(inst.native_problem(), dec_options, fcl::derive_seed(dec_seed, i));
                line += fcl::format_number(r.autocorrelation.tau) + ',' +
                        (r.autocorrelation.stationary ? "1" : "0") + ',' + (r.ladder.warning ? "1" : "0") + ",ok";
            } catch (const fcl::Error& e) {
                line += "nan,0,1," + fcl::csv_field(std::string("failed: ") + e.what());
                exit_code = kExitPartial;
            }
            lines[i] = line + '\n';
        });
        std::string csv = "instance_id,seed,alpha,rho,R,size,tau,stationary,ladder_warning,status\n";
        for (const auto& l : lines) csv += l;
        emit(dec_output, csv);
    });

    // report
    std::string report_dir;
    auto* report_cmd = app.add_subcommand("report", "print the aggregate of a benchmark output directory");
    report_cmd->add_option("--input-dir", report_dir, "benchmark output directory")->required()
        ->check(CLI::ExistingDirectory);
    report_cmd->callback([&] {
        const auto path = (std::filesystem::path(report_dir) / "aggregate.json").string();
        const auto agg = fcl::parse_json(fcl::read_text_file(path), path);
        std::cout << "solver,size,alpha,rho,R,metric,instances,median,ci_low,ci_high\n";
        for (const auto& g : agg.at("groups"))
            std::cout << g.at("solver").get<std::string>() << ',' << g.at("size") << ','
                      << fcl::format_number(g.at("alpha").get<double>()) << ',' << g.at("rho") << ',' << g.at("R")
                      << ',' << g.at("metric").get<std::string>() << ',' << g.at("instances") << ','
                      << g.at("median").get<std::string>() << ',' << g.at("ci_low").get<std::string>() << ','
                      << g.at("ci_high").get<std::string>() << '\n';
        if (!agg.at("relative_work").empty()) {
            std::cout << "\nsolver,size,alpha,rho,R,relative_work\n";
            for (const auto& r : agg.at("relative_work"))
                std::cout << r.at("solver").get<std::string>() << ',' << r.at("size") << ','
                          << fcl::format_number(r.at("alpha").get<double>()) << ',' << r.at("rho") << ','
                          << r.at("R") << ',' << r.at("relative_work").get<std::string>() << '\n';
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    } catch (const fcl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return exit_code.load();
}
