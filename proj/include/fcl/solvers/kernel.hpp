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
#include <vector>

#include "fcl/ising.hpp"
#include "fcl/random.hpp"

namespace fcl {

// Floating-point CSR copy of a problem in Ising units, for the MCMC kernels.
class CouplingTable {
  public:
    explicit CouplingTable(const IsingProblem& problem) : n_(problem.num_vertices()) {
        const double inv = 1.0 / static_cast<double>(problem.scale());
        offsets_.reserve(static_cast<std::size_t>(n_) + 1);
        offsets_.push_back(0);
        fields_.reserve(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v) {
            fields_.push_back(static_cast<double>(problem.field(v)) * inv);
            for (const Neighbor& nb : problem.neighbors(v)) {
                if (nb.coupling == 0) continue;
                neighbor_.push_back(nb.vertex);
                weight_.push_back(static_cast<double>(nb.coupling) * inv);
            }
            offsets_.push_back(neighbor_.size());
        }
    }

    int num_vertices() const { return n_; }

    // h_v + sum_j J_vj s_j
    double local_field(int v, const Spin* s) const {
        double f = fields_[static_cast<std::size_t>(v)];
        const std::size_t end = offsets_[static_cast<std::size_t>(v) + 1];
        for (std::size_t k = offsets_[static_cast<std::size_t>(v)]; k < end; ++k) f += weight_[k] * s[neighbor_[k]];
        return f;
    }

    // Same as local_field over a real-valued spin vector (used by SVMC).
    double local_field_real(int v, const double* m) const {
        double f = 0.0;
        const std::size_t end = offsets_[static_cast<std::size_t>(v) + 1];
        for (std::size_t k = offsets_[static_cast<std::size_t>(v)]; k < end; ++k) f += weight_[k] * m[neighbor_[k]];
        return f;
    }

    double field(int v) const { return fields_[static_cast<std::size_t>(v)]; }

    double energy(const Spin* s) const {
        double e = 0.0;
        for (int v = 0; v < n_; ++v) {
            e += fields_[static_cast<std::size_t>(v)] * s[v];
            const std::size_t end = offsets_[static_cast<std::size_t>(v) + 1];
            for (std::size_t k = offsets_[static_cast<std::size_t>(v)]; k < end; ++k)
                if (neighbor_[k] > v) e += weight_[k] * s[v] * s[neighbor_[k]];
        }
        return e;
    }

  private:
    int n_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<int> neighbor_;
    std::vector<double> weight_;
    std::vector<double> fields_;
};

// Metropolis rule on x = beta * delta. Moves with x = 0 are accepted with
// probability 1/2: always accepting them lets index-order sweeps lock into
// period-2 orbits (e.g. a K44 cell with both shores balanced, where every
// spin sees zero field). Detailed balance is unaffected. Draws randomness
// only when x >= 0, so the rule depends on beta and delta only via x.
inline bool metropolis_accept(double delta, double beta, Rng& rng) {
    const double x = beta * delta;
    if (x < 0.0) return true;
    if (x == 0.0) return (rng() >> 63) != 0;
    return uniform01(rng) < std::exp(-x);
}

inline void randomize(SpinState& state, Rng& rng) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (i % 64 == 0) bits = rng();
        state[i] = (bits >> (i % 64)) & 1u ? Spin{1} : Spin{-1};
    }
}

inline SpinState random_state(std::size_t n, Rng& rng) {
    SpinState s(n);
    randomize(s, rng);
    return s;
}

} // namespace fcl
