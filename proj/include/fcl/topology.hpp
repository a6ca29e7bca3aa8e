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
#include <array>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fcl/error.hpp"
#include "fcl/random.hpp"

namespace fcl {

using QubitId = std::int32_t;

// Position of a qubit in a C_s Chimera graph. Shore 0 couples vertically
// (north/south), shore 1 horizontally (east/west).
struct ChimeraCoord {
    int row = 0;
    int col = 0;
    int shore = 0;
    int offset = 0;

    friend bool operator==(const ChimeraCoord&, const ChimeraCoord&) = default;
};

constexpr QubitId qubit_id(int size, const ChimeraCoord& c) {
    return c.offset + 4 * c.shore + 8 * (c.col + size * c.row);
}

constexpr ChimeraCoord qubit_coord(int size, QubitId q) {
    const int cell = q / 8;
    return {cell / size, cell % size, (q % 8) / 4, q % 4};
}

constexpr int cell_of(QubitId q) { return q / 8; }

struct Coupler {
    QubitId a = 0;
    QubitId b = 0;

    constexpr Coupler() = default;
    constexpr Coupler(QubitId x, QubitId y) : a(std::min(x, y)), b(std::max(x, y)) {}

    friend constexpr auto operator<=>(const Coupler&, const Coupler&) = default;
};

// True iff (a, b) is an edge of the full C_size graph.
constexpr bool is_chimera_adjacent(int size, QubitId a, QubitId b) {
    const QubitId n = 8 * size * size;
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) return false;
    const ChimeraCoord x = qubit_coord(size, a);
    const ChimeraCoord y = qubit_coord(size, b);
    if (x.row == y.row && x.col == y.col) return x.shore != y.shore;
    if (x.shore != y.shore || x.offset != y.offset) return false;
    if (x.shore == 0) return x.col == y.col && (x.row - y.row == 1 || y.row - x.row == 1);
    return x.row == y.row && (x.col - y.col == 1 || y.col - x.col == 1);
}

// A (possibly depleted) Chimera working graph. Immutable once built.
class ChimeraGraph {
  public:
    ChimeraGraph() = default;

    // Validates both invariants: couplers join present qubits and are legal
    // Chimera adjacencies.
    ChimeraGraph(int size, std::vector<QubitId> qubits, std::vector<Coupler> couplers)
        : size_(size), qubits_(std::move(qubits)), couplers_(std::move(couplers)) {
        require(size >= 1, "chimera size must be >= 1");
        present_.assign(static_cast<std::size_t>(8 * size * size), 0);
        std::sort(qubits_.begin(), qubits_.end());
        qubits_.erase(std::unique(qubits_.begin(), qubits_.end()), qubits_.end());
        for (QubitId q : qubits_) {
            require(q >= 0 && q < 8 * size * size, "qubit id out of range: " + std::to_string(q));
            present_[static_cast<std::size_t>(q)] = 1;
        }
        std::sort(couplers_.begin(), couplers_.end());
        couplers_.erase(std::unique(couplers_.begin(), couplers_.end()), couplers_.end());
        for (const Coupler& c : couplers_) {
            require(is_chimera_adjacent(size, c.a, c.b),
                    "not a chimera coupler: " + std::to_string(c.a) + "-" + std::to_string(c.b));
            require(has_qubit(c.a) && has_qubit(c.b), "coupler joins a missing qubit");
        }
    }

    int size() const { return size_; }
    int num_slots() const { return 8 * size_ * size_; }
    std::size_t num_qubits() const { return qubits_.size(); }
    std::size_t num_couplers() const { return couplers_.size(); }
    const std::vector<QubitId>& qubits() const { return qubits_; }
    const std::vector<Coupler>& couplers() const { return couplers_; }

    bool has_qubit(QubitId q) const {
        return q >= 0 && q < num_slots() && present_[static_cast<std::size_t>(q)] != 0;
    }
    bool has_coupler(QubitId a, QubitId b) const {
        return std::binary_search(couplers_.begin(), couplers_.end(), Coupler(a, b));
    }

    friend bool operator==(const ChimeraGraph& x, const ChimeraGraph& y) {
        return x.size_ == y.size_ && x.qubits_ == y.qubits_ && x.couplers_ == y.couplers_;
    }

  private:
    int size_ = 0;
    std::vector<QubitId> qubits_;
    std::vector<Coupler> couplers_;
    std::vector<std::uint8_t> present_;
};

inline ChimeraGraph build_chimera(int size) {
    require(size >= 1, "chimera size must be >= 1");
    std::vector<QubitId> qubits(static_cast<std::size_t>(8 * size * size));
    for (std::size_t q = 0; q < qubits.size(); ++q) qubits[q] = static_cast<QubitId>(q);
    std::vector<Coupler> couplers;
    couplers.reserve(static_cast<std::size_t>(16 * size * size + 8 * size * (size - 1)));
    for (int row = 0; row < size; ++row) {
        for (int col = 0; col < size; ++col) {
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j)
                    couplers.emplace_back(qubit_id(size, {row, col, 0, i}), qubit_id(size, {row, col, 1, j}));
                if (row + 1 < size)
                    couplers.emplace_back(qubit_id(size, {row, col, 0, i}), qubit_id(size, {row + 1, col, 0, i}));
                if (col + 1 < size)
                    couplers.emplace_back(qubit_id(size, {row, col, 1, i}), qubit_id(size, {row, col + 1, 1, i}));
            }
        }
    }
    return ChimeraGraph(size, std::move(qubits), std::move(couplers));
}

// Removes the listed qubits (with their incident couplers) and couplers.
// Every listed element must exist in the input graph.
inline ChimeraGraph apply_yield(const ChimeraGraph& graph, std::span<const QubitId> missing_qubits,
                                std::span<const Coupler> missing_couplers) {
    std::vector<std::uint8_t> drop_qubit(static_cast<std::size_t>(graph.num_slots()), 0);
    for (QubitId q : missing_qubits) {
        require(graph.has_qubit(q), "cannot remove absent qubit " + std::to_string(q));
        drop_qubit[static_cast<std::size_t>(q)] = 1;
    }
    std::vector<Coupler> drop_couplers(missing_couplers.begin(), missing_couplers.end());
    for (Coupler& c : drop_couplers) {
        c = Coupler(c.a, c.b);
        require(graph.has_coupler(c.a, c.b),
                "cannot remove absent coupler " + std::to_string(c.a) + "-" + std::to_string(c.b));
    }
    std::sort(drop_couplers.begin(), drop_couplers.end());

    std::vector<QubitId> qubits;
    for (QubitId q : graph.qubits())
        if (!drop_qubit[static_cast<std::size_t>(q)]) qubits.push_back(q);
    std::vector<Coupler> couplers;
    for (const Coupler& c : graph.couplers()) {
        if (drop_qubit[static_cast<std::size_t>(c.a)] || drop_qubit[static_cast<std::size_t>(c.b)]) continue;
        if (std::binary_search(drop_couplers.begin(), drop_couplers.end(), c)) continue;
        couplers.push_back(c);
    }
    return ChimeraGraph(graph.size(), std::move(qubits), std::move(couplers));
}

struct YieldDefects {
    std::vector<QubitId> missing_qubits;
    std::vector<Coupler> missing_couplers;
};

// Draws independent qubit and coupler failures at the given rates. Couplers
// incident to a failed qubit are not listed (apply_yield drops them anyway).
inline YieldDefects sample_yield(const ChimeraGraph& graph, double qubit_rate, double coupler_rate,
                                 std::uint64_t seed) {
    require(qubit_rate >= 0.0 && qubit_rate <= 1.0 && coupler_rate >= 0.0 && coupler_rate <= 1.0,
            "yield rates must lie in [0, 1]");
    Rng rng(derive_seed(seed, 0x79656c64));
    YieldDefects defects;
    std::vector<std::uint8_t> dead(static_cast<std::size_t>(graph.num_slots()), 0);
    for (QubitId q : graph.qubits()) {
        if (uniform01(rng) < qubit_rate) {
            defects.missing_qubits.push_back(q);
            dead[static_cast<std::size_t>(q)] = 1;
        }
    }
    for (const Coupler& c : graph.couplers()) {
        const bool draw = uniform01(rng) < coupler_rate;
        if (draw && !dead[static_cast<std::size_t>(c.a)] && !dead[static_cast<std::size_t>(c.b)])
            defects.missing_couplers.push_back(c);
    }
    return defects;
}

struct CellCoord {
    int row = 0;
    int col = 0;

    friend auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

// Lattice of complete unit cells. Spin indices follow row-major cell order;
// couplers are index pairs (i < j) sorted lexicographically.
struct LogicalGraph {
    int rows = 0;
    int cols = 0;
    std::vector<CellCoord> spins;
    std::vector<std::pair<int, int>> couplers;
    // Qubit id -> logical spin index, -1 for qubits outside complete cells.
    std::vector<int> cell_map;

    std::size_t num_spins() const { return spins.size(); }

    int spin_at(CellCoord c) const {
        auto it = std::lower_bound(spins.begin(), spins.end(), c);
        return (it != spins.end() && *it == c) ? static_cast<int>(it - spins.begin()) : -1;
    }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(spins.size());
        for (auto [i, j] : couplers) {
            adj[static_cast<std::size_t>(i)].push_back(j);
            adj[static_cast<std::size_t>(j)].push_back(i);
        }
        return adj;
    }

    friend bool operator==(const LogicalGraph&, const LogicalGraph&) = default;
};

// Builds a logical lattice directly from row-major sorted cell coordinates and
// lattice-adjacent couplers; used for logical-only problems with no hardware graph.
inline LogicalGraph make_lattice(int rows, int cols, std::vector<CellCoord> spins,
                                 std::vector<std::pair<int, int>> couplers) {
    LogicalGraph g;
    g.rows = rows;
    g.cols = cols;
    require(std::is_sorted(spins.begin(), spins.end()) &&
                std::adjacent_find(spins.begin(), spins.end()) == spins.end(),
            "logical spins must be sorted row-major and distinct");
    g.spins = std::move(spins);
    for (auto& [i, j] : couplers) {
        if (i > j) std::swap(i, j);
        require(i >= 0 && static_cast<std::size_t>(j) < g.spins.size() && i != j, "bad logical coupler");
        const CellCoord a = g.spins[static_cast<std::size_t>(i)];
        const CellCoord b = g.spins[static_cast<std::size_t>(j)];
        require(std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1, "logical coupler is not a lattice edge");
    }
    std::sort(couplers.begin(), couplers.end());
    couplers.erase(std::unique(couplers.begin(), couplers.end()), couplers.end());
    g.couplers = std::move(couplers);
    return g;
}

inline LogicalGraph full_lattice(int rows, int cols) {
    std::vector<CellCoord> spins;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) spins.push_back({r, c});
    std::vector<std::pair<int, int>> couplers;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int i = r * cols + c;
            if (c + 1 < cols) couplers.emplace_back(i, i + 1);
            if (r + 1 < rows) couplers.emplace_back(i, i + cols);
        }
    }
    return make_lattice(rows, cols, std::move(spins), std::move(couplers));
}

// A cell is a logical spin iff all 8 qubits and 16 intra-cell couplers are
// present; two logical spins are joined iff all 4 connecting couplers are.
inline LogicalGraph extract_logical(const ChimeraGraph& graph) {
    const int s = graph.size();
    LogicalGraph g;
    g.rows = s;
    g.cols = s;
    g.cell_map.assign(static_cast<std::size_t>(graph.num_slots()), -1);
    auto complete = [&](int row, int col) {
        for (int u = 0; u < 2; ++u)
            for (int k = 0; k < 4; ++k)
                if (!graph.has_qubit(qubit_id(s, {row, col, u, k}))) return false;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (!graph.has_coupler(qubit_id(s, {row, col, 0, i}), qubit_id(s, {row, col, 1, j}))) return false;
        return true;
    };
    for (int row = 0; row < s; ++row) {
        for (int col = 0; col < s; ++col) {
            if (!complete(row, col)) continue;
            const int index = static_cast<int>(g.spins.size());
            g.spins.push_back({row, col});
            for (int q = 0; q < 8; ++q) g.cell_map[static_cast<std::size_t>(8 * (col + s * row) + q)] = index;
        }
    }
    auto bundle = [&](CellCoord a, CellCoord b, int shore) {
        for (int k = 0; k < 4; ++k)
            if (!graph.has_coupler(qubit_id(s, {a.row, a.col, shore, k}), qubit_id(s, {b.row, b.col, shore, k})))
                return false;
        return true;
    };
    for (std::size_t i = 0; i < g.spins.size(); ++i) {
        const CellCoord c = g.spins[i];
        const int south = g.spin_at({c.row + 1, c.col});
        const int east = g.spin_at({c.row, c.col + 1});
        if (east >= 0 && bundle(c, {c.row, c.col + 1}, 1)) g.couplers.emplace_back(static_cast<int>(i), east);
        if (south >= 0 && bundle(c, {c.row + 1, c.col}, 0)) g.couplers.emplace_back(static_cast<int>(i), south);
    }
    std::sort(g.couplers.begin(), g.couplers.end());
    return g;
}

} // namespace fcl
