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
#include <bit>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fcl/error.hpp"
#include "fcl/ising.hpp"
#include "fcl/topology.hpp"

namespace fcl {

struct GroundStateSet {
    ScaledEnergy ground_energy = 0;
    std::uint64_t count = 0;    // exact when !cap_exceeded, otherwise cap + 1
    bool cap_exceeded = false;
    std::vector<SpinState> states;  // sorted; empty when cap_exceeded

    friend bool operator==(const GroundStateSet&, const GroundStateSet&) = default;
};

inline constexpr int kDefaultMaxWidth = 16;
inline constexpr std::uint64_t kDefaultGroundStateCap = 1000;
inline constexpr int kBruteForceMaxVertices = 24;

namespace detail {

// Site-by-site transfer-matrix sweep over a lattice. The frontier holds the
// most recent spin at each position of the short lattice dimension (bit set
// means spin -1). Absent sites are pinned to +1 and carry no interactions.
class LatticeSweep {
  public:
    static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

    LatticeSweep(const IsingProblem& problem, const LogicalGraph& graph, int max_width) {
        require(problem.num_vertices() == static_cast<int>(graph.num_spins()),
                "problem vertex count does not match logical graph");
        transpose_ = graph.rows > graph.cols;
        width_ = transpose_ ? graph.cols : graph.rows;
        lines_ = transpose_ ? graph.rows : graph.cols;
        if (width_ > max_width)
            throw ResourceLimit("lattice width " + std::to_string(width_) + " exceeds limit " +
                                std::to_string(max_width));
        require(width_ <= 24, "lattice width above 24 is not supported");
        sites_.resize(static_cast<std::size_t>(width_ * lines_));
        for (std::size_t v = 0; v < graph.num_spins(); ++v) {
            const CellCoord c = graph.spins[v];
            require(c.row >= 0 && c.col >= 0 && c.row < graph.rows && c.col < graph.cols, "spin outside lattice");
            site_at(line_of(c), pos_of(c)).spin = static_cast<int>(v);
            site_at(line_of(c), pos_of(c)).field = problem.field(static_cast<int>(v));
        }
        std::size_t used = 0;
        for (const Edge& e : problem.edges()) {
            const CellCoord a = graph.spins[static_cast<std::size_t>(e.u)];
            const CellCoord b = graph.spins[static_cast<std::size_t>(e.v)];
            const int la = line_of(a), pa = pos_of(a), lb = line_of(b), pb = pos_of(b);
            if (la == lb && pb == pa + 1) site_at(lb, pb).along_line += e.coupling;
            else if (la == lb && pa == pb + 1) site_at(la, pa).along_line += e.coupling;
            else if (pa == pb && lb == la + 1) site_at(lb, pb).across_lines += e.coupling;
            else if (pa == pb && la == lb + 1) site_at(la, pa).across_lines += e.coupling;
            else continue;
            ++used;
        }
        require(used == problem.edges().size(), "problem has couplings between non-adjacent lattice sites");
    }

    int width() const { return width_; }
    std::size_t num_sites() const { return sites_.size(); }
    std::size_t frontier_states() const { return std::size_t{1} << width_; }

    // f_{k+1} from f_k; counts optional (saturating at count_limit).
    void step(std::size_t k, const std::vector<std::int64_t>& f, std::vector<std::int64_t>& next,
              const std::vector<std::uint64_t>* counts, std::vector<std::uint64_t>* next_counts,
              std::uint64_t count_limit) const {
        const Site& site = sites_[k];
        const int p = static_cast<int>(k % static_cast<std::size_t>(width_));
        const std::size_t bit = std::size_t{1} << p;
        const std::size_t states = frontier_states();
        for (std::size_t g = 0; g < states; ++g) {
            std::int64_t best = kInf;
            std::uint64_t ways = 0;
            const int sigma = (g & bit) ? 1 : 0;
            if (site.spin < 0 && sigma == 1) {
                next[g] = kInf;
                if (next_counts) (*next_counts)[g] = 0;
                continue;
            }
            for (int b = 0; b < 2; ++b) {
                const std::size_t prev = b ? (g | bit) : (g & ~bit);
                const std::int64_t base = f[prev];
                if (base >= kInf) continue;
                const std::int64_t value = base + local(site, p, g, sigma, b);
                if (value < best) {
                    best = value;
                    ways = counts ? (*counts)[prev] : 0;
                } else if (value == best && counts) {
                    ways = std::min(count_limit, ways + (*counts)[prev]);
                }
            }
            next[g] = best;
            if (next_counts) (*next_counts)[g] = ways;
        }
    }

    std::int64_t local(std::size_t k, std::size_t g, int sigma, int old_bit) const {
        return local(sites_[k], static_cast<int>(k % static_cast<std::size_t>(width_)), g, sigma, old_bit);
    }

    int spin_of_site(std::size_t k) const { return sites_[k].spin; }
    int position_of_site(std::size_t k) const { return static_cast<int>(k % static_cast<std::size_t>(width_)); }

  private:
    struct Site {
        int spin = -1;
        std::int64_t field = 0;
        std::int64_t along_line = 0;    // coupling to position p - 1 in the same line
        std::int64_t across_lines = 0;  // coupling to position p in the previous line
    };

    static int spin_value(int bit) { return bit ? -1 : 1; }

    std::int64_t local(const Site& site, int p, std::size_t g, int sigma, int old_bit) const {
        const int s = spin_value(sigma);
        std::int64_t e = site.field * s;
        if (p > 0 && site.along_line != 0) e += site.along_line * s * spin_value(static_cast<int>((g >> (p - 1)) & 1));
        if (site.across_lines != 0) e += site.across_lines * s * spin_value(old_bit);
        return e;
    }

    int line_of(CellCoord c) const { return transpose_ ? c.row : c.col; }
    int pos_of(CellCoord c) const { return transpose_ ? c.col : c.row; }
    Site& site_at(int line, int pos) { return sites_[static_cast<std::size_t>(line * width_ + pos)]; }

    bool transpose_ = false;
    int width_ = 0;
    int lines_ = 0;
    std::vector<Site> sites_;
};

} // namespace detail

// Exact minimum energy of a logical lattice problem, O(sites * 2^width).
inline ScaledEnergy dp_ground_energy(const IsingProblem& problem, const LogicalGraph& graph,
                                     int max_width = kDefaultMaxWidth) {
    detail::LatticeSweep sweep(problem, graph, max_width);
    std::vector<std::int64_t> f(sweep.frontier_states(), detail::LatticeSweep::kInf);
    std::vector<std::int64_t> next(f.size());
    f[0] = 0;
    for (std::size_t k = 0; k < sweep.num_sites(); ++k) {
        sweep.step(k, f, next, nullptr, nullptr, 0);
        f.swap(next);
    }
    return *std::min_element(f.begin(), f.end());
}

// All ground states when there are at most `cap` of them, found by walking
// optimal transitions backwards from the final frontier.
inline GroundStateSet enumerate_ground_states(const IsingProblem& problem, const LogicalGraph& graph,
                                              std::uint64_t cap = kDefaultGroundStateCap,
                                              int max_width = kDefaultMaxWidth) {
    detail::LatticeSweep sweep(problem, graph, max_width);
    const std::size_t states = sweep.frontier_states();
    const std::size_t sites = sweep.num_sites();
    const std::uint64_t limit = cap + 1;
    std::vector<std::vector<std::int64_t>> f(sites + 1, std::vector<std::int64_t>(states, detail::LatticeSweep::kInf));
    std::vector<std::uint64_t> counts(states, 0), next_counts(states, 0);
    f[0][0] = 0;
    counts[0] = 1;
    for (std::size_t k = 0; k < sites; ++k) {
        sweep.step(k, f[k], f[k + 1], &counts, &next_counts, limit);
        counts.swap(next_counts);
    }
    GroundStateSet out;
    const auto& last = f[sites];
    out.ground_energy = *std::min_element(last.begin(), last.end());
    std::uint64_t total = 0;
    for (std::size_t g = 0; g < states; ++g)
        if (last[g] == out.ground_energy) total = std::min(limit, total + counts[g]);
    out.count = total;
    if (total > cap) {
        out.cap_exceeded = true;
        return out;
    }

    SpinState current(static_cast<std::size_t>(problem.num_vertices()), Spin{1});
    auto walk = [&](auto&& self, std::size_t k, std::size_t g) -> void {
        if (k == 0) {
            out.states.push_back(current);
            return;
        }
        const std::size_t site = k - 1;
        const int p = sweep.position_of_site(site);
        const std::size_t bit = std::size_t{1} << p;
        const int sigma = (g & bit) ? 1 : 0;
        const int spin = sweep.spin_of_site(site);
        if (spin >= 0) current[static_cast<std::size_t>(spin)] = sigma ? Spin{-1} : Spin{1};
        for (int b = 0; b < 2; ++b) {
            const std::size_t prev = b ? (g | bit) : (g & ~bit);
            const std::int64_t base = f[site][prev];
            if (base >= detail::LatticeSweep::kInf) continue;
            if (base + sweep.local(site, g, sigma, b) == f[k][g]) self(self, site, prev);
        }
    };
    for (std::size_t g = 0; g < states; ++g)
        if (last[g] == out.ground_energy) walk(walk, sites, g);
    std::sort(out.states.begin(), out.states.end());
    return out;
}

// Exhaustive Gray-code enumeration; the reference oracle for small problems.
inline GroundStateSet brute_force(const IsingProblem& problem,
                                  std::uint64_t cap = std::numeric_limits<std::uint64_t>::max() - 1) {
    const int n = problem.num_vertices();
    if (n > kBruteForceMaxVertices)
        throw ResourceLimit("brute force limited to " + std::to_string(kBruteForceMaxVertices) + " vertices, got " +
                            std::to_string(n));
    SpinState state(static_cast<std::size_t>(n), Spin{1});
    ScaledEnergy e = energy(problem, state);
    GroundStateSet out;
    out.ground_energy = e;
    std::vector<std::uint32_t> masks{0};
    std::uint64_t count = 1;
    std::uint32_t mask = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        const int v = std::countr_zero(i);
        e += energy_delta(problem, state, v);
        state[static_cast<std::size_t>(v)] = static_cast<Spin>(-state[static_cast<std::size_t>(v)]);
        mask ^= (1u << v);
        if (e < out.ground_energy) {
            out.ground_energy = e;
            masks.assign(1, mask);
            count = 1;
        } else if (e == out.ground_energy) {
            ++count;
            if (masks.size() <= cap) masks.push_back(mask);
        }
    }
    out.count = std::min(count, cap + 1);
    if (count > cap) {
        out.cap_exceeded = true;
        return out;
    }
    for (std::uint32_t m : masks) {
        SpinState s(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) s[static_cast<std::size_t>(v)] = (m >> v) & 1u ? Spin{-1} : Spin{1};
        out.states.push_back(std::move(s));
    }
    std::sort(out.states.begin(), out.states.end());
    return out;
}

} // namespace fcl
