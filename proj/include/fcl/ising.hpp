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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fcl/error.hpp"

namespace fcl {

using Spin = std::int8_t;
using SpinState = std::vector<Spin>;

// Energies are exact integers in units of 1/scale.
using ScaledEnergy = std::int64_t;

struct Edge {
    int u = 0;
    int v = 0;
    std::int64_t coupling = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    int vertex;
    std::int64_t coupling;
};

// Fields h and couplings J on vertices 0..n-1, stored as integers over a
// common positive denominator. Immutable after construction.
class IsingProblem {
  public:
    IsingProblem() = default;

    IsingProblem(int num_vertices, std::vector<std::int64_t> fields, std::vector<Edge> edges,
                 std::int64_t scale = 1)
        : n_(num_vertices), scale_(scale), fields_(std::move(fields)), edges_(std::move(edges)) {
        require(n_ >= 0, "vertex count must be nonnegative");
        require(scale_ >= 1, "scale denominator must be positive");
        if (fields_.empty()) fields_.assign(static_cast<std::size_t>(n_), 0);
        require(fields_.size() == static_cast<std::size_t>(n_), "field vector length must equal vertex count");
        for (Edge& e : edges_) {
            require(e.u >= 0 && e.v >= 0 && e.u < n_ && e.v < n_, "edge endpoint out of range");
            require(e.u != e.v, "self-loop edges are not allowed");
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges_.begin(), edges_.end(),
                  [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
        for (std::size_t i = 1; i < edges_.size(); ++i)
            require(edges_[i - 1].u != edges_[i].u || edges_[i - 1].v != edges_[i].v, "duplicate edge");

        offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (const Edge& e : edges_) {
            ++offsets_[static_cast<std::size_t>(e.u) + 1];
            ++offsets_[static_cast<std::size_t>(e.v) + 1];
        }
        for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
        adjacency_.resize(2 * edges_.size());
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (const Edge& e : edges_) {
            adjacency_[fill[static_cast<std::size_t>(e.u)]++] = {e.v, e.coupling};
            adjacency_[fill[static_cast<std::size_t>(e.v)]++] = {e.u, e.coupling};
        }
    }

    int num_vertices() const { return n_; }
    std::int64_t scale() const { return scale_; }
    const std::vector<std::int64_t>& fields() const { return fields_; }
    std::int64_t field(int v) const { return fields_[static_cast<std::size_t>(v)]; }
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const Neighbor> neighbors(int v) const {
        const auto b = offsets_[static_cast<std::size_t>(v)];
        const auto e = offsets_[static_cast<std::size_t>(v) + 1];
        return {adjacency_.data() + b, e - b};
    }

    // Coupling between u and v, 0 when there is no edge.
    std::int64_t coupling(int u, int v) const {
        for (const Neighbor& nb : neighbors(u))
            if (nb.vertex == v) return nb.coupling;
        return 0;
    }

    bool has_fields() const {
        return std::any_of(fields_.begin(), fields_.end(), [](std::int64_t h) { return h != 0; });
    }

    friend bool operator==(const IsingProblem& a, const IsingProblem& b) {
        return a.n_ == b.n_ && a.scale_ == b.scale_ && a.fields_ == b.fields_ && a.edges_ == b.edges_;
    }

  private:
    int n_ = 0;
    std::int64_t scale_ = 1;
    std::vector<std::int64_t> fields_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adjacency_;
};

inline void check_state(const IsingProblem& problem, std::span<const Spin> state) {
    require(state.size() == static_cast<std::size_t>(problem.num_vertices()),
            "state length " + std::to_string(state.size()) + " does not match vertex count " +
                std::to_string(problem.num_vertices()));
}

// sum_i h_i s_i + sum_(i,j) J_ij s_i s_j, in units of 1/scale.
inline ScaledEnergy energy(const IsingProblem& problem, std::span<const Spin> state) {
    check_state(problem, state);
    ScaledEnergy e = 0;
    for (int v = 0; v < problem.num_vertices(); ++v) e += problem.field(v) * state[static_cast<std::size_t>(v)];
    for (const Edge& edge : problem.edges())
        e += edge.coupling * state[static_cast<std::size_t>(edge.u)] * state[static_cast<std::size_t>(edge.v)];
    return e;
}

inline double to_ising_units(const IsingProblem& problem, ScaledEnergy e) {
    return static_cast<double>(e) / static_cast<double>(problem.scale());
}

// energy(state with v flipped) - energy(state), O(degree).
inline ScaledEnergy energy_delta(const IsingProblem& problem, std::span<const Spin> state, int vertex) {
    check_state(problem, state);
    require(vertex >= 0 && vertex < problem.num_vertices(), "unknown vertex " + std::to_string(vertex));
    ScaledEnergy local = problem.field(vertex);
    for (const Neighbor& nb : problem.neighbors(vertex)) local += nb.coupling * state[static_cast<std::size_t>(nb.vertex)];
    return -2 * state[static_cast<std::size_t>(vertex)] * local;
}

inline SpinState negate(std::span<const Spin> state) {
    SpinState out(state.begin(), state.end());
    for (Spin& s : out) s = static_cast<Spin>(-s);
    return out;
}

// Native vertex indices of the eight qubits of each logical spin's cell, in
// ascending qubit order.
struct ClusterMap {
    std::vector<std::array<int, 8>> members;

    std::size_t num_clusters() const { return members.size(); }
    friend bool operator==(const ClusterMap&, const ClusterMap&) = default;
};

struct Projection {
    SpinState logical;
    std::vector<std::uint8_t> unanimous;

    bool all_unanimous() const {
        return std::all_of(unanimous.begin(), unanimous.end(), [](std::uint8_t u) { return u != 0; });
    }
};

// Majority vote per cluster; a 4-4 tie takes the sign of the lowest qubit.
inline Projection project_to_logical(const ClusterMap& clusters, std::span<const Spin> native_state) {
    Projection p;
    p.logical.resize(clusters.num_clusters());
    p.unanimous.resize(clusters.num_clusters());
    for (std::size_t c = 0; c < clusters.num_clusters(); ++c) {
        int sum = 0;
        for (int v : clusters.members[c]) sum += native_state[static_cast<std::size_t>(v)];
        Spin s = sum > 0 ? Spin{1} : sum < 0 ? Spin{-1} : native_state[static_cast<std::size_t>(clusters.members[c][0])];
        p.logical[c] = s;
        p.unanimous[c] = (sum == 8 || sum == -8) ? 1 : 0;
    }
    return p;
}

// Inverse of projection for unanimous states: every qubit takes its cluster's
// spin. Vertices outside clusters are set to +1.
inline SpinState lift_to_native(const ClusterMap& clusters, int native_vertices, std::span<const Spin> logical) {
    require(logical.size() == clusters.num_clusters(), "logical state length does not match cluster count");
    SpinState native(static_cast<std::size_t>(native_vertices), Spin{1});
    for (std::size_t c = 0; c < clusters.num_clusters(); ++c)
        for (int v : clusters.members[c]) native[static_cast<std::size_t>(v)] = logical[c];
    return native;
}

} // namespace fcl
