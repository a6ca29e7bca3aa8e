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

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fcl/ising.hpp"
#include "fcl/parallel.hpp"
#include "fcl/random.hpp"

namespace fcl {

// Anneal time is charged per elementary operation (one single-spin update,
// one DP table entry) rather than read from a wall clock, so repeated runs
// report identical times. Wall-clock time is kept alongside for logging.
inline constexpr double kSecondsPerUpdate = 1e-9;

struct SampleRecord {
    SpinState state;
    ScaledEnergy energy = 0;
    double anneal_time = 0.0;  // cumulative, seconds
};

struct SampleSet {
    std::string solver_id;
    nlohmann::json config;
    std::vector<SampleRecord> records;
    double wall_seconds = 0.0;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }

    double total_anneal_time() const { return records.empty() ? 0.0 : records.back().anneal_time; }
    double mean_anneal_time() const {
        return records.empty() ? 0.0 : total_anneal_time() / static_cast<double>(records.size());
    }
};

struct ReadResult {
    SpinState state;
    double work = 0.0;  // elementary operations
};

// Executes independent reads. Read r draws from the stream derived from
// (seed, r), so the output does not depend on the worker count.
template <typename ReadFn>
SampleSet run_reads(const IsingProblem& problem, std::string solver_id, nlohmann::json config, int num_reads,
                    std::uint64_t seed, unsigned workers, ReadFn&& read) {
    require(num_reads >= 0, "num_reads must be nonnegative");
    const auto start = std::chrono::steady_clock::now();
    std::vector<ReadResult> results(static_cast<std::size_t>(num_reads));
    parallel_for(results.size(), workers, [&](std::size_t r) {
        Rng rng = make_rng(seed, r);
        results[r] = read(r, rng);
    });
    SampleSet set;
    set.solver_id = std::move(solver_id);
    set.config = std::move(config);
    set.records.reserve(results.size());
    double work = 0.0;  // integral, so exact in a double
    for (auto& r : results) {
        work += r.work;
        const ScaledEnergy e = energy(problem, r.state);
        set.records.push_back({std::move(r.state), e, work * kSecondsPerUpdate});
    }
    set.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return set;
}

} // namespace fcl
