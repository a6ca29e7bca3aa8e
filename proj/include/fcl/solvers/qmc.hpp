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
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "fcl/solvers/kernel.hpp"
#include "fcl/solvers/sample_set.hpp"
#include "fcl/solvers/schedule.hpp"

namespace fcl {

// Transverse-field floor used when A(lambda) reaches 0, where the
// inter-slice coupling would diverge.
inline constexpr double kMinTransverseField = 1e-3;

// Ferromagnetic coupling between neighbouring Trotter slices,
// K = 1/2 ln coth(beta A / P).
inline double trotter_coupling(double beta, double a, int slices) {
    const double x = beta * std::max(a, kMinTransverseField) / static_cast<double>(slices);
    return 0.5 * std::log(1.0 / std::tanh(x));
}

// Discrete-time path integral with P cyclic slices, sampled by single
// (spin, slice) Metropolis updates at unit temperature on
//   E_eff = (beta/P) B sum_k E(s^k) - K sum_{i,k} s_i^k s_i^{k+1}.
class PathIntegralChain {
  public:
    PathIntegralChain(const CouplingTable& table, int slices, Rng& rng)
        : table_(&table), n_(table.num_vertices()), slices_(slices),
          spins_(static_cast<std::size_t>(n_) * static_cast<std::size_t>(slices)) {
        require(slices >= 1, "at least one Trotter slice is required");
        for (int k = 0; k < slices_; ++k) {
            SpinState s(static_cast<std::size_t>(n_));
            randomize(s, rng);
            std::copy(s.begin(), s.end(), spins_.begin() + static_cast<std::ptrdiff_t>(k) * n_);
        }
    }

    void sweep(double a, double b, double beta, Rng& rng) {
        const double classical_beta = (beta / slices_) * b;
        const double k_coupling = slices_ > 1 ? trotter_coupling(beta, a, slices_) : 0.0;
        for (int k = 0; k < slices_; ++k) {
            Spin* s = slice_ptr(k);
            const Spin* up = slice_ptr((k + 1) % slices_);
            const Spin* down = slice_ptr((k + slices_ - 1) % slices_);
            for (int v = 0; v < n_; ++v) {
                double delta = classical_beta * (-2.0 * s[v] * table_->local_field(v, s));
                if (slices_ > 1) delta += 2.0 * k_coupling * s[v] * (up[v] + down[v]);
                if (metropolis_accept(delta, 1.0, rng)) s[v] = static_cast<Spin>(-s[v]);
            }
        }
    }

    int slices() const { return slices_; }
    std::span<const Spin> slice(int k) const {
        return {spins_.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }

  private:
    Spin* slice_ptr(int k) { return spins_.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(n_); }

    const CouplingTable* table_;
    int n_;
    int slices_;
    std::vector<Spin> spins_;
};

enum class QmcReadout { min_energy, random_slice };

struct QmcConfig {
    AnnealSchedule schedule = AnnealSchedule::transverse_field(10000);
    double beta = 30.0;
    int slices = 64;
    QmcReadout readout = QmcReadout::min_energy;
    int num_reads = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

inline nlohmann::json to_json(const QmcConfig& c) {
    return {{"solver", "qmc"},
            {"beta", c.beta},
            {"slices", c.slices},
            {"sweeps", c.schedule.sweeps},
            {"readout", c.readout == QmcReadout::min_energy ? "min-energy" : "random-slice"},
            {"num_reads", c.num_reads},
            {"seed", c.seed}};
}

// Min-energy slice readout for optimization, uniform slice for sampling.
inline SampleSet qmc_discrete(const IsingProblem& problem, const QmcConfig& config) {
    config.schedule.validate();
    require(config.schedule.kind == ScheduleKind::transverse_field, "QMC needs a transverse-field schedule");
    require(config.beta > 0.0, "QMC beta must be positive");
    require(config.slices >= 1, "QMC needs at least one slice");
    const CouplingTable table(problem);
    const auto n = static_cast<double>(problem.num_vertices());
    return run_reads(problem, "qmc", to_json(config), config.num_reads, config.seed, config.workers,
                     [&](std::size_t, Rng& rng) {
                         PathIntegralChain chain(table, config.slices, rng);
                         for (int k = 0; k < config.schedule.sweeps; ++k)
                             chain.sweep(config.schedule.a(k), config.schedule.b(k), config.beta, rng);
                         int chosen = 0;
                         if (config.readout == QmcReadout::random_slice) {
                             chosen = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(config.slices)));
                         } else {
                             ScaledEnergy best = std::numeric_limits<ScaledEnergy>::max();
                             for (int k = 0; k < config.slices; ++k) {
                                 const ScaledEnergy e = energy(problem, chain.slice(k));
                                 if (e < best) {
                                     best = e;
                                     chosen = k;
                                 }
                             }
                         }
                         auto s = chain.slice(chosen);
                         return ReadResult{SpinState(s.begin(), s.end()),
                                           static_cast<double>(config.schedule.sweeps) * config.slices * n};
                     });
}

} // namespace fcl
