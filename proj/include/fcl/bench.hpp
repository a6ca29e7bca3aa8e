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

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "fcl/decorrelation.hpp"
#include "fcl/error.hpp"
#include "fcl/exact.hpp"
#include "fcl/generator.hpp"
#include "fcl/io.hpp"
#include "fcl/metrics.hpp"
#include "fcl/parallel.hpp"
#include "fcl/random.hpp"
#include "fcl/solvers/hfs.hpp"
#include "fcl/solvers/qmc.hpp"
#include "fcl/solvers/sa.hpp"
#include "fcl/solvers/svmc.hpp"
#include "fcl/topology.hpp"
#include "fcl/valleys.hpp"

namespace fcl {

// Default batch sizes for sampling metrics, before --budget-scale.
inline constexpr int kDefaultReadsSa = 100000;
inline constexpr int kDefaultReadsQmc = 5000;
inline constexpr int kDefaultReadsHfs = 5000;
inline constexpr int kDefaultReadsSvmc = 5000;
inline constexpr int kDefaultReadsExact = 10000;
inline constexpr int kDefaultBootstrapResamples = 1000;

enum class ProblemKind { native, logical };

inline std::string to_string(ProblemKind k) { return k == ProblemKind::native ? "native" : "logical"; }

inline ProblemKind parse_problem_kind(const std::string& s) {
    if (s == "native") return ProblemKind::native;
    if (s == "logical") return ProblemKind::logical;
    throw InvalidParameter("problem must be \"native\" or \"logical\", got \"" + s + "\"");
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

// ---------------------------------------------------------------------------
// Solvers

struct SolverSpec {
    std::string name;
    nlohmann::json options = nlohmann::json::object();
};

namespace detail {

class Options {
  public:
    Options(const nlohmann::json& j, std::string context) : j_(j), context_(std::move(context)) {
        if (!j_.is_object()) throw InvalidParameter(context_ + ": options must be an object");
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        used_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return fallback;
        try {
            return it->get<T>();
        } catch (const nlohmann::json::exception&) {
            throw InvalidParameter(context_ + ": option \"" + key + "\" has the wrong type");
        }
    }

    void reject_unknown() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw InvalidParameter(context_ + ": unknown option \"" + it.key() + "\"");
    }

  private:
    const nlohmann::json& j_;
    std::string context_;
    std::set<std::string> used_;
};

inline int scaled_reads(int base, double budget_scale) {
    return std::max(1, static_cast<int>(std::lround(base * budget_scale)));
}

} // namespace detail

// Uniform draws from an enumerated ground-state set; stands in for an ideal
// zero-temperature sampler. Native problems receive lifted states.
inline SampleSet exact_sampler(const FclInstance& instance, ProblemKind kind, const GroundStateSet& ground_states,
                               int num_reads, std::uint64_t seed) {
    require(!ground_states.cap_exceeded && !ground_states.states.empty(),
            "exact sampler needs a complete ground-state enumeration");
    const IsingProblem& problem = kind == ProblemKind::native ? instance.native_problem() : instance.logical;
    const auto n = static_cast<double>(problem.num_vertices());
    return run_reads(problem, "exact", {{"solver", "exact"}, {"num_reads", num_reads}, {"seed", seed}}, num_reads, seed, 1,
                     [&](std::size_t, Rng& rng) {
                         const auto& s = ground_states.states[uniform_index(rng, ground_states.states.size())];
                         SpinState state = kind == ProblemKind::native
                                               ? lift_to_native(instance.clusters(), problem.num_vertices(), s)
                                               : s;
                         return ReadResult{std::move(state), n};
                     });
}

// Fully resolved solver options (defaults filled in), as recorded in reports.
inline nlohmann::json resolve_solver_options(const SolverSpec& spec, double budget_scale) {
    detail::Options o(spec.options, "solver " + spec.name);
    nlohmann::json r;
    if (spec.name == "sa") {
        r = {{"num_reads", o.get("num_reads", detail::scaled_reads(kDefaultReadsSa, budget_scale))},
             {"sweeps", o.get("sweeps", 100000)},
             {"beta_start", o.get("beta_start", 0.01)},
             {"beta_end", o.get("beta_end", 3.0)}};
    } else if (spec.name == "qmc") {
        r = {{"num_reads", o.get("num_reads", detail::scaled_reads(kDefaultReadsQmc, budget_scale))},
             {"sweeps", o.get("sweeps", 10000)},
             {"beta", o.get("beta", 30.0)},
             {"slices", o.get("slices", 64)},
             {"readout", o.get<std::string>("readout", "min-energy")}};
    } else if (spec.name == "svmc") {
        r = {{"num_reads", o.get("num_reads", detail::scaled_reads(kDefaultReadsSvmc, budget_scale))},
             {"sweeps", o.get("sweeps", 100000)},
             {"beta", o.get("beta", 30.0)}};
    } else if (spec.name == "hfs") {
        r = {{"num_reads", o.get("num_reads", detail::scaled_reads(kDefaultReadsHfs, budget_scale))},
             {"patience", o.get("patience", 0)}};
    } else if (spec.name == "exact") {
        r = {{"num_reads", o.get("num_reads", detail::scaled_reads(kDefaultReadsExact, budget_scale))}};
    } else {
        throw InvalidParameter("unknown solver \"" + spec.name + "\" (expected sa, qmc, svmc, hfs or exact)");
    }
    o.reject_unknown();
    r["solver"] = spec.name;
    return r;
}

inline std::string config_hash(const nlohmann::json& resolved) { return hex64(fnv1a(resolved.dump())); }

// Runs one solver on one instance. `resolved` must come from
// resolve_solver_options; ground states are needed only by "exact".
inline SampleSet run_solver(const nlohmann::json& resolved, const FclInstance& instance, ProblemKind kind,
                            std::uint64_t seed, unsigned workers, const GroundStateSet* ground_states = nullptr) {
    const std::string name = resolved.at("solver");
    const IsingProblem& problem = kind == ProblemKind::native ? instance.native_problem() : instance.logical;
    const int reads = resolved.at("num_reads");
    if (name == "sa") {
        SaConfig c;
        c.schedule = AnnealSchedule::linear_beta(resolved.at("beta_start"), resolved.at("beta_end"), resolved.at("sweeps"));
        c.num_reads = reads;
        c.seed = seed;
        c.workers = workers;
        return simulated_annealing(problem, c);
    }
    if (name == "qmc") {
        QmcConfig c;
        c.schedule = AnnealSchedule::transverse_field(resolved.at("sweeps"));
        c.beta = resolved.at("beta");
        c.slices = resolved.at("slices");
        const std::string readout = resolved.at("readout");
        require(readout == "min-energy" || readout == "random-slice", "QMC readout must be min-energy or random-slice");
        c.readout = readout == "min-energy" ? QmcReadout::min_energy : QmcReadout::random_slice;
        c.num_reads = reads;
        c.seed = seed;
        c.workers = workers;
        return qmc_discrete(problem, c);
    }
    if (name == "svmc") {
        SvmcConfig c;
        c.schedule = AnnealSchedule::transverse_field(resolved.at("sweeps"));
        c.beta = resolved.at("beta");
        c.num_reads = reads;
        c.seed = seed;
        c.workers = workers;
        return svmc(problem, c);
    }
    if (name == "hfs") {
        require(kind == ProblemKind::native, "hfs runs on native problems only");
        HfsConfig c;
        c.patience = resolved.at("patience");
        c.num_reads = reads;
        c.seed = seed;
        c.workers = workers;
        return hfs_solve(problem, instance.params.size, instance.native.vertex_qubit, c);
    }
    if (name == "exact") {
        require(ground_states != nullptr, "exact sampler needs ground states");
        return exact_sampler(instance, kind, *ground_states, reads, seed);
    }
    throw InvalidParameter("unknown solver \"" + name + "\"");
}

// ---------------------------------------------------------------------------
// Manifest

struct GenerateBlock {
    std::vector<int> sizes{4};
    std::vector<double> alphas{0.65};
    std::vector<int> rhos{3};
    std::vector<int> ruggedness{3};
    int instances = 1;
    double qubit_loss = 0.0;    // yield defect rates
    double coupler_loss = 0.0;
};

struct RunManifest {
    std::string experiment_id = "experiment";
    std::uint64_t seed = 0;
    std::vector<GenerateBlock> generate;
    std::vector<std::string> instance_files;
    std::vector<SolverSpec> solvers;
    std::vector<std::string> metrics{"tts"};
    ProblemKind problem = ProblemKind::native;
    std::string output_dir = "fcl-out";
    unsigned workers = 0;  // 0 = default_workers()
    double budget_scale = 1.0;
    int bootstrap_resamples = kDefaultBootstrapResamples;
    std::uint64_t ground_state_cap = kDefaultGroundStateCap;
};

inline const std::set<std::string>& known_metrics() {
    static const std::set<std::string> m{"tts", "ttav", "kld", "l1"};
    return m;
}

// Relative instance files and output paths resolve against base_dir.
inline RunManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
    detail::Options o(j, "manifest");
    RunManifest m;
    m.experiment_id = o.get("experiment_id", m.experiment_id);
    m.seed = o.get<std::uint64_t>("seed", 0);
    m.problem = parse_problem_kind(o.get<std::string>("problem", "native"));
    m.output_dir = o.get("output_dir", m.output_dir);
    m.workers = o.get<unsigned>("workers", 0);
    m.budget_scale = o.get("budget_scale", 1.0);
    m.bootstrap_resamples = o.get("bootstrap_resamples", m.bootstrap_resamples);
    m.ground_state_cap = o.get<std::uint64_t>("ground_state_cap", m.ground_state_cap);
    m.metrics = o.get("metrics", m.metrics);
    for (const auto& name : o.get("instance_files", std::vector<std::string>{})) {
        std::filesystem::path p(name);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        m.instance_files.push_back(p.string());
    }
    if (std::filesystem::path(m.output_dir).is_relative() && !base_dir.empty())
        m.output_dir = (base_dir / m.output_dir).string();
    for (const auto& g : o.get("generate", nlohmann::json::array())) {
        detail::Options go(g, "generate block");
        GenerateBlock b;
        b.sizes = go.get("size", b.sizes);
        b.alphas = go.get("alpha", b.alphas);
        b.rhos = go.get("rho", b.rhos);
        b.ruggedness = go.get("ruggedness", b.ruggedness);
        b.instances = go.get("instances", b.instances);
        b.qubit_loss = go.get("qubit_loss", b.qubit_loss);
        b.coupler_loss = go.get("coupler_loss", b.coupler_loss);
        go.reject_unknown();
        require(b.instances >= 0, "generate block: instances must be nonnegative");
        require(b.qubit_loss >= 0.0 && b.qubit_loss < 1.0 && b.coupler_loss >= 0.0 && b.coupler_loss < 1.0,
                "generate block: loss rates must lie in [0, 1)");
        m.generate.push_back(std::move(b));
    }
    for (const auto& s : o.get("solvers", nlohmann::json::array())) {
        SolverSpec spec;
        if (s.is_string()) {
            spec.name = s.get<std::string>();
        } else {
            if (!s.is_object() || !s.contains("name") || !s["name"].is_string())
                throw InvalidParameter("manifest: each solver needs a \"name\"");
            spec.name = s["name"];
            spec.options = s;
            spec.options.erase("name");
        }
        m.solvers.push_back(std::move(spec));
    }
    o.reject_unknown();
    require(m.budget_scale > 0.0, "budget_scale must be positive");
    require(m.bootstrap_resamples >= 1, "bootstrap_resamples must be positive");
    for (const auto& metric : m.metrics)
        require(known_metrics().count(metric) == 1, "unknown metric \"" + metric + "\"");
    for (const auto& spec : m.solvers) resolve_solver_options(spec, m.budget_scale);  // validates
    for (const auto& f : m.instance_files)
        require(std::filesystem::exists(f), "instance file does not exist: " + f);
    return m;
}

// Manifest with every default written out.
inline nlohmann::json manifest_to_json(const RunManifest& m) {
    nlohmann::json gen = nlohmann::json::array();
    for (const auto& b : m.generate)
        gen.push_back({{"size", b.sizes},
                       {"alpha", b.alphas},
                       {"rho", b.rhos},
                       {"ruggedness", b.ruggedness},
                       {"instances", b.instances},
                       {"qubit_loss", b.qubit_loss},
                       {"coupler_loss", b.coupler_loss}});
    nlohmann::json solvers = nlohmann::json::array();
    for (const auto& s : m.solvers) {
        auto r = resolve_solver_options(s, m.budget_scale);
        r.erase("solver");
        r["name"] = s.name;
        solvers.push_back(r);
    }
    return {{"experiment_id", m.experiment_id},
            {"seed", m.seed},
            {"problem", to_string(m.problem)},
            {"generate", gen},
            {"instance_files", m.instance_files},
            {"solvers", solvers},
            {"metrics", m.metrics},
            {"output_dir", m.output_dir},
            {"workers", m.workers},
            {"budget_scale", m.budget_scale},
            {"bootstrap_resamples", m.bootstrap_resamples},
            {"ground_state_cap", m.ground_state_cap}};
}

// ---------------------------------------------------------------------------
// Statistics

inline double median(std::vector<double> v) {
    require(!v.empty(), "median of an empty set");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    const double a = v[n / 2 - 1], b = v[n / 2];
    return std::isinf(b) ? b : 0.5 * (a + b);
}

struct MedianCi {
    double median = 0.0;
    double low = 0.0;
    double high = 0.0;
};

// Percentile bootstrap interval for the median.
inline MedianCi bootstrap_median(const std::vector<double>& v, int resamples, std::uint64_t seed,
                                 double confidence = 0.95) {
    MedianCi r;
    r.median = median(v);
    Rng rng(seed);
    std::vector<double> medians(static_cast<std::size_t>(resamples));
    std::vector<double> draw(v.size());
    for (auto& m : medians) {
        for (auto& x : draw) x = v[uniform_index(rng, v.size())];
        m = median(draw);
    }
    std::sort(medians.begin(), medians.end());
    const double tail = 0.5 * (1.0 - confidence);
    auto at = [&](double q) {
        const auto k = static_cast<std::size_t>(std::clamp(std::floor(q * (resamples - 1) + 0.5), 0.0,
                                                           static_cast<double>(resamples - 1)));
        return medians[k];
    };
    r.low = at(tail);
    r.high = at(1.0 - tail);
    return r;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "spearman needs two equal-length series");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

// ---------------------------------------------------------------------------
// Benchmark

struct MetricRow {
    std::string instance_id;
    std::uint64_t seed = 0;
    FclParams params;
    std::string solver;
    std::string config_hash;
    std::string metric;
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::string status = "ok";
};

struct CurveRow {
    std::string instance_id;
    std::string solver;
    std::string curve;  // coverage or l1
    double x = 0.0;     // anneal time
    double y = 0.0;
    std::size_t samples = 0;
};

struct BenchInstance {
    std::string id;
    std::uint64_t seed = 0;
    std::optional<FclInstance> instance;
    std::string error;
    std::optional<GroundStateSet> ground_states;
    std::optional<ValleyDecomposition> valleys;
};

struct BenchReport {
    std::vector<MetricRow> rows;
    std::vector<CurveRow> curves;
    nlohmann::json aggregate;
    std::size_t failures = 0;
    int exit_code = 0;
};

inline const char* kMetricsCsvHeader =
    "experiment_id,instance_id,seed,alpha,rho,R,size,solver,config_hash,metric,value,ci_low,ci_high,status\n";

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string metrics_csv(const std::string& experiment_id, const std::vector<MetricRow>& rows) {
    std::string out = kMetricsCsvHeader;
    for (const auto& r : rows) {
        out += csv_field(experiment_id) + ',' + csv_field(r.instance_id) + ',' + std::to_string(r.seed) + ',' +
               format_number(r.params.alpha) + ',' + std::to_string(r.params.rho) + ',' +
               std::to_string(r.params.ruggedness) + ',' + std::to_string(r.params.size) + ',' + csv_field(r.solver) +
               ',' + r.config_hash + ',' + r.metric + ',' + format_number(r.value) + ',' + format_number(r.ci_low) +
               ',' + format_number(r.ci_high) + ',' + csv_field(r.status) + '\n';
    }
    return out;
}

inline std::string curves_csv(const std::vector<CurveRow>& rows) {
    std::string out = "instance_id,solver,curve,samples,anneal_time,value\n";
    for (const auto& r : rows)
        out += csv_field(r.instance_id) + ',' + csv_field(r.solver) + ',' + r.curve + ',' + std::to_string(r.samples) +
               ',' + format_number(r.x) + ',' + format_number(r.y) + '\n';
    return out;
}

namespace detail {

inline std::string instance_label(const FclParams& p, std::size_t k) {
    return "s" + std::to_string(p.size) + "-a" + format_number(p.alpha) + "-rho" + std::to_string(p.rho) + "-R" +
           std::to_string(p.ruggedness) + "-" + std::to_string(k);
}

inline std::vector<BenchInstance> collect_instances(const RunManifest& m, unsigned workers) {
    struct Pending {
        FclParams params;
        std::size_t block = 0;
        double qubit_loss = 0.0, coupler_loss = 0.0;
        std::string file;
    };
    std::vector<Pending> pending;
    for (std::size_t b = 0; b < m.generate.size(); ++b) {
        const auto& g = m.generate[b];
        std::size_t flat = 0;
        for (int size : g.sizes)
            for (double alpha : g.alphas)
                for (int rho : g.rhos)
                    for (int R : g.ruggedness)
                        for (int k = 0; k < g.instances; ++k) {
                            Pending p;
                            p.params = {alpha, rho, R, size, derive_seed(m.seed, b, flat++)};
                            p.block = b;
                            p.qubit_loss = g.qubit_loss;
                            p.coupler_loss = g.coupler_loss;
                            pending.push_back(p);
                        }
    }
    for (const auto& f : m.instance_files) {
        Pending p;
        p.file = f;
        pending.push_back(p);
    }
    std::vector<BenchInstance> out(pending.size());
    // per-(block, parameter point) counters keep labels stable
    std::map<std::string, std::size_t> counters;
    for (std::size_t i = 0; i < pending.size(); ++i) {
        if (!pending[i].file.empty()) {
            out[i].id = std::filesystem::path(pending[i].file).stem().string();
        } else {
            const auto key = std::to_string(pending[i].block) + ":" + instance_label(pending[i].params, 0);
            out[i].id = "g" + std::to_string(pending[i].block) + "-" + instance_label(pending[i].params, counters[key]++);
        }
        out[i].seed = pending[i].params.seed;
    }
    parallel_for(pending.size(), workers, [&](std::size_t i) {
        const auto& p = pending[i];
        try {
            if (!p.file.empty()) {
                out[i].instance = read_instance(p.file);
                out[i].seed = out[i].instance->params.seed;
            } else {
                ChimeraGraph working = build_chimera(p.params.size);
                if (p.qubit_loss > 0.0 || p.coupler_loss > 0.0) {
                    const auto d = sample_yield(working, p.qubit_loss, p.coupler_loss, derive_seed(p.params.seed, 0x79));
                    working = apply_yield(working, d.missing_qubits, d.missing_couplers);
                }
                out[i].instance = generate_instance(p.params, working);
            }
        } catch (const Error& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

} // namespace detail

// Executes generate -> solve -> analyze -> metrics for every (instance,
// solver) job and writes metrics.csv, curves.csv, relative_work.csv,
// aggregate.json and manifest.json into output_dir. Wall-clock timings go to
// run.log only, so the CSV files are reproducible byte for byte.
inline BenchReport run_benchmark(const RunManifest& m, bool write_files = true) {
    const unsigned workers = m.workers > 0 ? m.workers : default_workers();
    const auto wall_start = std::chrono::steady_clock::now();
    std::ostringstream log;
    BenchReport report;

    auto instances = detail::collect_instances(m, workers);
    const bool need_ground_states =
        std::any_of(m.metrics.begin(), m.metrics.end(), [](const std::string& x) { return x != "tts"; }) ||
        std::any_of(m.solvers.begin(), m.solvers.end(), [](const SolverSpec& s) { return s.name == "exact"; });
    if (need_ground_states) {
        parallel_for(instances.size(), workers, [&](std::size_t i) {
            auto& bi = instances[i];
            if (!bi.instance) return;
            try {
                bi.ground_states = enumerate_ground_states(bi.instance->logical, bi.instance->logical_graph,
                                                           m.ground_state_cap);
                if (!bi.ground_states->cap_exceeded) bi.valleys.emplace(*bi.ground_states);
            } catch (const Error& e) {
                bi.error = std::string("ground-state enumeration: ") + e.what();
            }
        });
    }

    std::vector<nlohmann::json> resolved;
    for (const auto& s : m.solvers) resolved.push_back(resolve_solver_options(s, m.budget_scale));

    struct JobOutput {
        std::vector<MetricRow> rows;
        std::vector<CurveRow> curves;
        double wall = 0.0;
    };
    const std::size_t jobs = instances.size() * m.solvers.size();
    std::vector<JobOutput> outputs(jobs);
    parallel_for(jobs, workers, [&](std::size_t job) {
        const std::size_t i = job / m.solvers.size(), s = job % m.solvers.size();
        const BenchInstance& bi = instances[i];
        JobOutput& out = outputs[job];
        const std::string solver = m.solvers[s].name;
        const std::string hash = config_hash(resolved[s]);
        auto row = [&](const std::string& metric, double value, double lo, double hi, std::string status) {
            MetricRow r;
            r.instance_id = bi.id;
            r.seed = bi.seed;
            if (bi.instance) r.params = bi.instance->params;
            r.solver = solver;
            r.config_hash = hash;
            r.metric = metric;
            r.value = value;
            r.ci_low = lo;
            r.ci_high = hi;
            r.status = std::move(status);
            out.rows.push_back(std::move(r));
        };
        auto fail_all = [&](const std::string& why) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            for (const auto& metric : m.metrics) row(metric, nan, nan, nan, "failed: " + why);
        };
        if (!bi.instance) {
            fail_all(bi.error);
            return;
        }
        if (!bi.error.empty() && solver == "exact") {
            fail_all(bi.error);
            return;
        }
        const FclInstance& inst = *bi.instance;
        const auto start = std::chrono::steady_clock::now();
        SampleSet samples;
        try {
            const GroundStateSet* gs =
                bi.ground_states && !bi.ground_states->cap_exceeded ? &*bi.ground_states : nullptr;
            if (solver == "exact" && gs == nullptr) throw ResourceLimit("ground-state cap exceeded");
            samples = run_solver(resolved[s], inst, m.problem, derive_seed(bi.seed, 0x501e, s), 1, gs);
        } catch (const Error& e) {
            fail_all(e.what());
            return;
        }
        out.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const ScaledEnergy ground =
            m.problem == ProblemKind::native ? inst.planted_native_energy : inst.planted_logical_energy;
        for (const auto& metric : m.metrics) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            try {
                if (metric == "tts") {
                    const auto t = estimate_tts(samples, ground);
                    row("tts", t.tts, t.ci_low, t.ci_high, t.lower_bound_only ? "lower-bound" : "ok");
                    row("p_ground", t.p_hat, nan, nan, "ok");
                    row("time_per_anneal", t.time_per_anneal, nan, nan, "ok");
                    continue;
                }
                if (!bi.error.empty()) throw Error(bi.error);
                if (!bi.valleys) {
                    row(metric, nan, nan, nan, "skipped: ground-state cap exceeded");
                    continue;
                }
                if (metric == "ttav") {
                    const auto t = ttav(samples, inst, *bi.valleys, derive_seed(bi.seed, 0x77a, s));
                    row("ttav_empirical", t.empirical, nan, nan, std::isinf(t.empirical) ? "incomplete" : "ok");
                    row("ttav_expected", t.expected, nan, nan,
                        std::isinf(t.expected) ? "incomplete" : t.simulated ? "simulated" : "ok");
                    for (const auto& [x, y] : t.coverage) out.curves.push_back({bi.id, solver, "coverage", x, y, 0});
                } else if (metric == "kld") {
                    try {
                        row("kld", kld_valleys(samples, inst, *bi.valleys), nan, nan, "ok");
                    } catch (const UndefinedKld&) {
                        row("kld", nan, nan, nan, "undefined: no ground-state samples");
                    }
                } else if (metric == "l1") {
                    const auto curve = l1_marginal_error(samples, inst, *bi.ground_states);
                    row("l1", curve.empty() ? nan : curve.back().error, nan, nan, "ok");
                    for (const auto& p : curve) out.curves.push_back({bi.id, solver, "l1", p.anneal_time, p.error, p.samples});
                }
            } catch (const Error& e) {
                row(metric, nan, nan, nan, std::string("failed: ") + e.what());
            }
        }
    });

    for (std::size_t job = 0; job < jobs; ++job) {
        auto& o = outputs[job];
        log << instances[job / m.solvers.size()].id << ' ' << m.solvers[job % m.solvers.size()].name
            << " wall_seconds=" << o.wall << '\n';
        for (auto& r : o.rows) {
            if (r.status.rfind("failed", 0) == 0) ++report.failures;
            report.rows.push_back(std::move(r));
        }
        for (auto& c : o.curves) report.curves.push_back(std::move(c));
    }
    if (!instances.empty() && m.solvers.empty())
        for (const auto& bi : instances)
            if (!bi.instance) ++report.failures;

    // Aggregate: medians with bootstrap intervals per parameter point.
    using Key = std::tuple<std::string, int, double, int, int, std::string>;  // solver, s, alpha, rho, R, metric
    std::map<Key, std::vector<double>> groups;
    for (const auto& r : report.rows) {
        if (r.status != "ok" && r.status != "lower-bound" && r.status != "simulated" && r.status != "incomplete") continue;
        groups[{r.solver, r.params.size, r.params.alpha, r.params.rho, r.params.ruggedness, r.metric}].push_back(r.value);
    }
    nlohmann::json agg = nlohmann::json::array();
    std::map<Key, MedianCi> medians;
    for (const auto& [key, values] : groups) {
        const auto& [solver, size, alpha, rho, R, metric] = key;
        const std::uint64_t seed = derive_seed(m.seed, fnv1a(solver + "|" + metric + "|" + std::to_string(size) + "|" +
                                                             format_number(alpha) + "|" + std::to_string(rho) + "|" +
                                                             std::to_string(R)));
        const auto ci = bootstrap_median(values, m.bootstrap_resamples, seed);
        medians[key] = ci;
        agg.push_back({{"solver", solver},
                       {"size", size},
                       {"alpha", alpha},
                       {"rho", rho},
                       {"R", R},
                       {"metric", metric},
                       {"instances", values.size()},
                       {"median", format_number(ci.median)},
                       {"ci_low", format_number(ci.low)},
                       {"ci_high", format_number(ci.high)}});
    }

    // Relative work: median TTS over the median TTS at the smallest R of the
    // same (solver, s, alpha, rho) series.
    std::string relative = "solver,size,alpha,rho,R,relative_work,ci_low,ci_high\n";
    nlohmann::json rel_json = nlohmann::json::array();
    std::map<std::tuple<std::string, int, double, int>, double> baseline;
    for (const auto& [key, ci] : medians) {
        const auto& [solver, size, alpha, rho, R, metric] = key;
        if (metric != "tts") continue;
        const auto series = std::make_tuple(solver, size, alpha, rho);
        if (!baseline.count(series)) baseline[series] = ci.median;  // map order: smallest R first
        const double b = baseline[series];
        relative += csv_field(solver) + ',' + std::to_string(size) + ',' + format_number(alpha) + ',' +
                    std::to_string(rho) + ',' + std::to_string(R) + ',' + format_number(ci.median / b) + ',' +
                    format_number(ci.low / b) + ',' + format_number(ci.high / b) + '\n';
        rel_json.push_back({{"solver", solver}, {"size", size}, {"alpha", alpha}, {"rho", rho}, {"R", R},
                            {"relative_work", format_number(ci.median / b)}});
    }

    report.aggregate = {{"experiment_id", m.experiment_id},
                        {"rows", report.rows.size()},
                        {"failures", report.failures},
                        {"groups", agg},
                        {"relative_work", rel_json}};
    report.exit_code = report.failures > 0 ? 2 : 0;

    if (write_files) {
        std::filesystem::create_directories(m.output_dir);
        const std::filesystem::path dir(m.output_dir);
        write_text_file((dir / "metrics.csv").string(), metrics_csv(m.experiment_id, report.rows));
        write_text_file((dir / "curves.csv").string(), curves_csv(report.curves));
        write_text_file((dir / "relative_work.csv").string(), relative);
        write_text_file((dir / "aggregate.json").string(), report.aggregate.dump(1) + "\n");
        write_text_file((dir / "manifest.json").string(), manifest_to_json(m).dump(1) + "\n");
        log << "total_wall_seconds="
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count() << '\n';
        write_text_file((dir / "run.log").string(), log.str());
    }
    return report;
}

} // namespace fcl
