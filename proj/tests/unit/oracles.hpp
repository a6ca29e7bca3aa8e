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

// Independent reference implementations used only by the tests. They are
// deliberately naive: literal sums, exhaustive loops, pairwise comparisons.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "fcl/ising.hpp"
#include "fcl/random.hpp"
#include "fcl/topology.hpp"

namespace oracle {

using fcl::Spin;
using fcl::SpinState;

// Term-by-term energy over an explicit (u, v, J) list.
inline std::int64_t naive_energy(int n, const std::vector<std::int64_t>& h,
                                 const std::vector<std::tuple<int, int, std::int64_t>>& couplings,
                                 const SpinState& s) {
    std::int64_t e = 0;
    for (int i = 0; i < n; ++i) e += (h.empty() ? 0 : h[static_cast<std::size_t>(i)]) * s[static_cast<std::size_t>(i)];
    for (auto [u, v, j] : couplings) e += j * s[static_cast<std::size_t>(u)] * s[static_cast<std::size_t>(v)];
    return e;
}

inline SpinState state_from_mask(int n, std::uint64_t mask) {
    SpinState s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? Spin{-1} : Spin{1};
    return s;
}

struct Enumeration {
    std::int64_t ground = 0;
    std::vector<SpinState> states;  // sorted
};

// Plain loop over all 2^n masks with a full energy evaluation each time.
inline Enumeration enumerate(const fcl::IsingProblem& p) {
    const int n = p.num_vertices();
    std::vector<std::tuple<int, int, std::int64_t>> cs;
    for (const auto& e : p.edges()) cs.emplace_back(e.u, e.v, e.coupling);
    Enumeration out;
    out.ground = INT64_MAX;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        const SpinState s = state_from_mask(n, m);
        const auto e = naive_energy(n, p.fields(), cs, s);
        if (e < out.ground) {
            out.ground = e;
            out.states.clear();
        }
        if (e == out.ground) out.states.push_back(s);
    }
    std::sort(out.states.begin(), out.states.end());
    return out;
}

inline int hamming(const SpinState& a, const SpinState& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

// Valleys by pairwise comparison: i ~ j when they differ in one spin or one
// is the negation of the other; components found by repeated relabeling.
// Returns a canonical partition: sorted list of sorted member-index lists.
inline std::vector<std::vector<int>> valleys(const std::vector<SpinState>& states) {
    const std::size_t n = states.size();
    std::vector<int> label(n);
    std::iota(label.begin(), label.end(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const int d = hamming(states[i], states[j]);
                const bool linked = d == 1 || d == static_cast<int>(states[i].size());
                if (linked && label[j] < label[i]) {
                    label[i] = label[j];
                    changed = true;
                }
            }
    }
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[label[i]].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> out;
    for (auto& [_, g] : groups) out.push_back(g);
    std::sort(out.begin(), out.end());
    return out;
}

// Mean |q| over all ordered pairs including self-pairs, by double loop.
inline double mean_overlap(const std::vector<SpinState>& states) {
    double total = 0.0;
    for (const auto& a : states)
        for (const auto& b : states) {
            long dot = 0;
            for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
            total += std::abs(static_cast<double>(dot)) / static_cast<double>(a.size());
        }
    return total / static_cast<double>(states.size() * states.size());
}

// Random lattice problem with integer couplings in [-range, range] on every
// grid edge of a rows x cols lattice.
struct LatticeProblem {
    fcl::LogicalGraph graph;
    fcl::IsingProblem problem;
};

inline LatticeProblem random_lattice(int rows, int cols, int range, fcl::Rng& rng, bool fields = false) {
    LatticeProblem out;
    out.graph = fcl::full_lattice(rows, cols);
    std::vector<fcl::Edge> edges;
    auto draw = [&] { return static_cast<std::int64_t>(fcl::uniform_index(rng, 2 * range + 1)) - range; };
    for (auto [i, j] : out.graph.couplers) edges.push_back({i, j, draw()});
    std::vector<std::int64_t> h;
    if (fields)
        for (std::size_t v = 0; v < out.graph.num_spins(); ++v) h.push_back(draw());
    out.problem = fcl::IsingProblem(static_cast<int>(out.graph.num_spins()), h, edges);
    return out;
}

} // namespace oracle
