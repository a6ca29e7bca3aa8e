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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "fcl/solvers/kernel.hpp"
#include "fcl/solvers/sample_set.hpp"
#include "fcl/solvers/schedule.hpp"

namespace fcl {

// Spin-vector Monte Carlo: planar rotors with angles in [0, pi] and mean-field
// energy -A sum sin(theta) + B (sum h cos(theta) + sum J cos cos). Proposals
// resample an angle uniformly.
class RotorChain {
  public:
    explicit RotorChain(const CouplingTable& table)
        : table_(&table),
          theta_(static_cast<std::size_t>(table.num_vertices()), std::numbers::pi / 2),
          cosine_(static_cast<std::size_t>(table.num_vertices()), 0.0),
          sine_(static_cast<std::size_t>(table.num_vertices()), 1.0) {}

    void sweep(double a, double b, double beta, Rng& rng) {
        for (int v = 0; v < table_->num_vertices(); ++v) {
            const auto i = static_cast<std::size_t>(v);
            const double proposal = std::numbers::pi * uniform01(rng);
            const double c = std::cos(proposal);
            const double s = std::sin(proposal);
            const double field = table_->field(v) + table_->local_field_real(v, cosine_.data());
            const double delta = -a * (s - sine_[i]) + b * (c - cosine_[i]) * field;
            if (metropolis_accept(delta, beta, rng)) {
                theta_[i] = proposal;
                cosine_[i] = c;
                sine_[i] = s;
            }
        }
    }

    const std::vector<double>& angles() const { return theta_; }

    // sign(cos theta); exact zeros broken uniformly.
    SpinState classical_state(Rng& rng) const {
        SpinState out(theta_.size());
        for (std::size_t i = 0; i < theta_.size(); ++i) {
            if (cosine_[i] > 0.0) out[i] = 1;
            else if (cosine_[i] < 0.0) out[i] = -1;
            else out[i] = (rng() & 1u) ? Spin{1} : Spin{-1};
        }
        return out;
    }

  private:
    const CouplingTable* table_;
    std::vector<double> theta_;
    std::vector<double> cosine_;
    std::vector<double> sine_;
};

struct SvmcConfig {
    AnnealSchedule schedule = AnnealSchedule::transverse_field(100000);
    double beta = 30.0;
    int num_reads = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

inline nlohmann::json to_json(const SvmcConfig& c) {
    return {{"solver", "svmc"}, {"beta", c.beta}, {"sweeps", c.schedule.sweeps}, {"num_reads", c.num_reads},
            {"seed", c.seed}};
}

inline SampleSet svmc(const IsingProblem& problem, const SvmcConfig& config) {
    config.schedule.validate();
    require(config.schedule.kind == ScheduleKind::transverse_field, "SVMC needs a transverse-field schedule");
    require(config.beta > 0.0, "SVMC beta must be positive");
    const CouplingTable table(problem);
    const auto n = static_cast<double>(problem.num_vertices());
    return run_reads(problem, "svmc", to_json(config), config.num_reads, config.seed, config.workers,
                     [&](std::size_t, Rng& rng) {
                         RotorChain chain(table);
                         for (int k = 0; k < config.schedule.sweeps; ++k)
                             chain.sweep(config.schedule.a(k), config.schedule.b(k), config.beta, rng);
                         return ReadResult{chain.classical_state(rng), static_cast<double>(config.schedule.sweeps) * n};
                     });
}

} // namespace fcl
