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

#include <cstdint>
#include <utility>

#include "fcl/solvers/kernel.hpp"
#include "fcl/solvers/sample_set.hpp"
#include "fcl/solvers/schedule.hpp"

namespace fcl {

// Single-spin Metropolis chain with index-order sweeps.
class MetropolisChain {
  public:
    MetropolisChain(const CouplingTable& table, SpinState initial) : table_(&table), state_(std::move(initial)) {}

    // Returns the energy change (Ising units) of the sweep.
    double sweep(double beta, Rng& rng) {
        Spin* s = state_.data();
        double change = 0.0;
        for (int v = 0; v < table_->num_vertices(); ++v) {
            const double delta = -2.0 * s[v] * table_->local_field(v, s);
            if (metropolis_accept(delta, beta, rng)) {
                s[v] = static_cast<Spin>(-s[v]);
                change += delta;
            }
        }
        return change;
    }

    const SpinState& state() const { return state_; }
    SpinState& state() { return state_; }

  private:
    const CouplingTable* table_;
    SpinState state_;
};

struct SaConfig {
    AnnealSchedule schedule = AnnealSchedule::linear_beta(0.01, 3.0, 100000);
    int num_reads = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

inline nlohmann::json to_json(const SaConfig& c) {
    return {{"solver", "sa"},
            {"beta_start", c.schedule.beta_start},
            {"beta_end", c.schedule.beta_end},
            {"sweeps", c.schedule.sweeps},
            {"num_reads", c.num_reads},
            {"seed", c.seed}};
}

// Each read starts from a uniform random state and sweeps through the
// linear-beta schedule.
inline SampleSet simulated_annealing(const IsingProblem& problem, const SaConfig& config) {
    config.schedule.validate();
    require(config.schedule.kind == ScheduleKind::linear_beta, "simulated annealing needs a linear-beta schedule");
    const CouplingTable table(problem);
    const auto n = static_cast<std::size_t>(problem.num_vertices());
    return run_reads(problem, "sa", to_json(config), config.num_reads, config.seed, config.workers,
                     [&](std::size_t, Rng& rng) {
                         MetropolisChain chain(table, random_state(n, rng));
                         for (int k = 0; k < config.schedule.sweeps; ++k) chain.sweep(config.schedule.beta(k), rng);
                         return ReadResult{std::move(chain.state()),
                                           static_cast<double>(config.schedule.sweeps) * static_cast<double>(n)};
                     });
}

} // namespace fcl
