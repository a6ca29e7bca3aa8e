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

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fcl/ising.hpp"
#include "fcl/solvers/kernel.hpp"
#include "fcl/solvers/sample_set.hpp"
#include "fcl/topology.hpp"

namespace fcl {

// Hamze-de Freitas-Selby style local search on Chimera. Each cell is split
// into its two 4-qubit shores; a random maximal induced tree of the shore
// graph is optimized exactly (16 states per shore) with every other qubit held
// fixed. Reads stop after `patience` consecutive tree updates without an
// energy decrease.
class ShoreTreeOptimizer {
  public:
    ShoreTreeOptimizer(const IsingProblem& problem, int size, std::span<const QubitId> vertex_qubit)
        : problem_(&problem), size_(size) {
        require(size >= 1, "chimera size must be >= 1");
        require(vertex_qubit.size() == static_cast<std::size_t>(problem.num_vertices()),
                "vertex-to-qubit map does not match the problem");
        const int shores = 2 * size * size;
        slots_.assign(static_cast<std::size_t>(shores), {-1, -1, -1, -1});
        for (std::size_t v = 0; v < vertex_qubit.size(); ++v) {
            const QubitId q = vertex_qubit[v];
            require(q >= 0 && q < 8 * size * size, "qubit id out of range for chimera size");
            auto& slot = slots_[static_cast<std::size_t>(q / 4)][static_cast<std::size_t>(q % 4)];
            require(slot < 0, "two vertices map to the same qubit");
            slot = static_cast<int>(v);
        }
        shore_of_.resize(vertex_qubit.size());
        slot_of_.resize(vertex_qubit.size());
        for (std::size_t v = 0; v < vertex_qubit.size(); ++v) {
            shore_of_[v] = vertex_qubit[v] / 4;
            slot_of_[v] = vertex_qubit[v] % 4;
        }
        shore_adj_.resize(static_cast<std::size_t>(shores));
        for (const Edge& e : problem.edges()) {
            const QubitId qa = vertex_qubit[static_cast<std::size_t>(e.u)];
            const QubitId qb = vertex_qubit[static_cast<std::size_t>(e.v)];
            if (!is_chimera_adjacent(size, qa, qb))
                throw InvalidParameter("edge " + std::to_string(qa) + "-" + std::to_string(qb) +
                                       " is not a chimera coupler");
            if (e.coupling == 0) continue;
            int sa = qa / 4, sb = qb / 4;
            int a = qa % 4, b = qb % 4;
            if (sa > sb) {
                std::swap(sa, sb);
                std::swap(a, b);
            }
            PairTable& table = pair_table(sa, sb);
            for (int x = 0; x < 16; ++x)
                for (int y = 0; y < 16; ++y)
                    table.energy[static_cast<std::size_t>(16 * x + y)] += e.coupling * spin_bit(x, a) * spin_bit(y, b);
        }
        for (std::size_t s = 0; s < slots_.size(); ++s)
            if (slots_[s][0] >= 0 || slots_[s][1] >= 0 || slots_[s][2] >= 0 || slots_[s][3] >= 0)
                live_shores_.push_back(static_cast<int>(s));
    }

    int num_cells() const { return size_ * size_; }

    // One conditioned tree update. Returns elementary operations performed.
    double update(SpinState& state, Rng& rng) {
        build_tree(rng);
        return optimize_tree(state);
    }

    // Optimizes the given shores (which must induce a tree) exactly.
    double optimize_shores(SpinState& state, const std::vector<int>& shores) {
        tree_order_ = shores;
        in_tree_.assign(slots_.size(), 0);
        for (int s : shores) in_tree_[static_cast<std::size_t>(s)] = 1;
        order_tree();
        return optimize_tree(state);
    }

    const std::vector<int>& last_tree() const { return tree_order_; }

  private:
    struct PairTable {
        int other = -1;
        std::array<std::int64_t, 256> energy{};  // [16 * state(low shore) + state(high shore)]
    };

    static int spin_bit(int state, int slot) { return (state >> slot) & 1 ? -1 : 1; }

    PairTable& pair_table(int low, int high) {
        auto& list = shore_adj_[static_cast<std::size_t>(low)];
        for (auto& t : list)
            if (t.other == high) return t;
        list.push_back({high, {}});
        auto& back_list = shore_adj_[static_cast<std::size_t>(high)];
        back_list.push_back({low, {}});
        return list.back();
    }

    // Coupling table between two adjacent shores plus whether `from` indexes
    // its rows.
    std::pair<const PairTable*, bool> pair_between(int from, int to) const {
        const int low = std::min(from, to);
        const int high = std::max(from, to);
        for (const auto& t : shore_adj_[static_cast<std::size_t>(low)])
            if (t.other == high) return {&t, from == low};
        return {nullptr, true};
    }

    // Grows a random induced tree: a shore may join only while exactly one of
    // its neighbours is already in the tree.
    void build_tree(Rng& rng) {
        in_tree_.assign(slots_.size(), 0);
        tree_order_.clear();
        if (live_shores_.empty()) return;
        const int root = live_shores_[uniform_index(rng, live_shores_.size())];
        in_tree_[static_cast<std::size_t>(root)] = 1;
        tree_order_.push_back(root);
        std::vector<int> candidates;
        auto push_neighbours = [&](int s) {
            for (const auto& t : shore_adj_[static_cast<std::size_t>(s)])
                if (!in_tree_[static_cast<std::size_t>(t.other)]) candidates.push_back(t.other);
        };
        push_neighbours(root);
        while (!candidates.empty()) {
            const std::size_t pick = uniform_index(rng, candidates.size());
            const int s = candidates[pick];
            candidates[pick] = candidates.back();
            candidates.pop_back();
            if (in_tree_[static_cast<std::size_t>(s)]) continue;
            int links = 0;
            for (const auto& t : shore_adj_[static_cast<std::size_t>(s)]) links += in_tree_[static_cast<std::size_t>(t.other)];
            if (links != 1) continue;
            in_tree_[static_cast<std::size_t>(s)] = 1;
            tree_order_.push_back(s);
            push_neighbours(s);
        }
        order_tree();
    }

    // Recomputes parents with tree_order_[0] as root, in BFS order.
    void order_tree() {
        parent_.assign(slots_.size(), -1);
        if (tree_order_.empty()) return;
        std::vector<int> bfs{tree_order_.front()};
        std::vector<std::uint8_t> seen(slots_.size(), 0);
        seen[static_cast<std::size_t>(bfs[0])] = 1;
        for (std::size_t i = 0; i < bfs.size(); ++i) {
            for (const auto& t : shore_adj_[static_cast<std::size_t>(bfs[i])]) {
                if (!in_tree_[static_cast<std::size_t>(t.other)] || seen[static_cast<std::size_t>(t.other)]) continue;
                seen[static_cast<std::size_t>(t.other)] = 1;
                parent_[static_cast<std::size_t>(t.other)] = bfs[i];
                bfs.push_back(t.other);
            }
        }
        require(bfs.size() == tree_order_.size(), "shores do not form a connected induced tree");
        tree_order_ = std::move(bfs);
    }

    double optimize_tree(SpinState& state) {
        const std::size_t m = tree_order_.size();
        if (m == 0) return 0.0;
        double work = 0.0;
        // unary[i][x]: fields plus couplings to qubits outside the tree
        std::vector<std::array<std::int64_t, 16>> cost(m);
        std::vector<std::array<std::uint8_t, 16>> choice(m);
        std::vector<int> index(slots_.size(), -1);
        for (std::size_t i = 0; i < m; ++i) index[static_cast<std::size_t>(tree_order_[i])] = static_cast<int>(i);
        for (std::size_t i = 0; i < m; ++i) {
            const int s = tree_order_[i];
            std::array<std::int64_t, 4> local{};
            for (int slot = 0; slot < 4; ++slot) {
                const int v = slots_[static_cast<std::size_t>(s)][static_cast<std::size_t>(slot)];
                if (v < 0) continue;
                std::int64_t f = problem_->field(v);
                for (const Neighbor& nb : problem_->neighbors(v)) {
                    ++work;
                    if (!in_tree_[static_cast<std::size_t>(shore_of_[static_cast<std::size_t>(nb.vertex)])])
                        f += nb.coupling * state[static_cast<std::size_t>(nb.vertex)];
                }
                local[static_cast<std::size_t>(slot)] = f;
            }
            for (int x = 0; x < 16; ++x) {
                std::int64_t e = 0;
                for (int slot = 0; slot < 4; ++slot) e += local[static_cast<std::size_t>(slot)] * spin_bit(x, slot);
                cost[i][static_cast<std::size_t>(x)] = e;
            }
            work += 64;
        }
        // leaves to root
        for (std::size_t i = m; i-- > 1;) {
            const int s = tree_order_[i];
            const int p = parent_[static_cast<std::size_t>(s)];
            auto& parent_cost = cost[static_cast<std::size_t>(index[static_cast<std::size_t>(p)])];
            const auto [table, child_rows] = pair_between(s, p);
            for (int y = 0; y < 16; ++y) {
                std::int64_t best = std::numeric_limits<std::int64_t>::max();
                int arg = 0;
                for (int x = 0; x < 16; ++x) {
                    const std::size_t cell = child_rows ? static_cast<std::size_t>(16 * x + y) : static_cast<std::size_t>(16 * y + x);
                    const std::int64_t e = cost[i][static_cast<std::size_t>(x)] + (table ? table->energy[cell] : 0);
                    if (e < best) {
                        best = e;
                        arg = x;
                    }
                }
                choice[i][static_cast<std::size_t>(y)] = static_cast<std::uint8_t>(arg);
                parent_cost[static_cast<std::size_t>(y)] += best;
            }
            work += 256;
        }
        std::vector<int> assigned(m, 0);
        int best_root = 0;
        for (int x = 1; x < 16; ++x)
            if (cost[0][static_cast<std::size_t>(x)] < cost[0][static_cast<std::size_t>(best_root)]) best_root = x;
        assigned[0] = best_root;
        for (std::size_t i = 1; i < m; ++i) {
            const int p = parent_[static_cast<std::size_t>(tree_order_[i])];
            assigned[i] = choice[i][static_cast<std::size_t>(assigned[static_cast<std::size_t>(index[static_cast<std::size_t>(p)])])];
        }
        for (std::size_t i = 0; i < m; ++i) {
            const auto& slot = slots_[static_cast<std::size_t>(tree_order_[i])];
            for (int k = 0; k < 4; ++k)
                if (slot[static_cast<std::size_t>(k)] >= 0)
                    state[static_cast<std::size_t>(slot[static_cast<std::size_t>(k)])] = static_cast<Spin>(spin_bit(assigned[i], k));
        }
        return work;
    }

    const IsingProblem* problem_;
    int size_;
    std::vector<std::array<int, 4>> slots_;  // shore -> vertex per offset, -1 if absent
    std::vector<int> shore_of_;
    std::vector<int> slot_of_;
    std::vector<std::vector<PairTable>> shore_adj_;
    std::vector<int> live_shores_;
    std::vector<std::uint8_t> in_tree_;
    std::vector<int> tree_order_;
    std::vector<int> parent_;
};

struct HfsConfig {
    int num_reads = 1;
    int patience = 0;  // tree updates without improvement before stopping; 0 = number of cells
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

inline nlohmann::json to_json(const HfsConfig& c) {
    return {{"solver", "hfs"}, {"patience", c.patience}, {"num_reads", c.num_reads}, {"seed", c.seed}};
}

inline SampleSet hfs_solve(const IsingProblem& problem, int size, std::span<const QubitId> vertex_qubit,
                           const HfsConfig& config) {
    const ShoreTreeOptimizer prototype(problem, size, vertex_qubit);
    const int patience = config.patience > 0 ? config.patience : prototype.num_cells();
    const auto n = static_cast<std::size_t>(problem.num_vertices());
    return run_reads(problem, "hfs", to_json(config), config.num_reads, config.seed, config.workers,
                     [&](std::size_t, Rng& rng) {
                         ShoreTreeOptimizer optimizer = prototype;
                         SpinState state = random_state(n, rng);
                         ScaledEnergy current = energy(problem, state);
                         double work = 0.0;
                         for (int stale = 0; stale < patience;) {
                             work += optimizer.update(state, rng);
                             const ScaledEnergy e = energy(problem, state);
                             work += static_cast<double>(problem.edges().size());
                             stale = e < current ? 0 : stale + 1;
                             current = e;
                         }
                         return ReadResult{std::move(state), work};
                     });
}

} // namespace fcl
