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
#include <cstdlib>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fcl/error.hpp"
#include "fcl/ising.hpp"
#include "fcl/random.hpp"
#include "fcl/topology.hpp"

namespace fcl {

struct FclParams {
    double alpha = 0.65;  // loops per logical spin
    int rho = 3;          // bound on |J_L|
    int ruggedness = 3;   // R >= rho; inter-cell couplings are J_L / R
    int size = 4;         // Chimera size s
    std::uint64_t seed = 0;

    friend bool operator==(const FclParams&, const FclParams&) = default;
};

inline void validate(const FclParams& p) {
    require(p.alpha > 0.0 && std::isfinite(p.alpha), "alpha must be positive");
    require(p.rho >= 1, "rho must be >= 1");
    require(p.ruggedness >= p.rho, "ruggedness R must be >= rho");
    require(p.size >= 1, "size must be >= 1");
}

// A cycle of logical spins; consecutive entries (and last -> first) are
// joined by logical couplers. The frustrated edge carries +1, all others -1.
struct FrustratedLoop {
    std::vector<int> vertices;
    std::pair<int, int> frustrated_edge;

    friend bool operator==(const FrustratedLoop&, const FrustratedLoop&) = default;
};

struct LoopProblem {
    IsingProblem problem;  // on the logical graph, one edge per logical coupler
    std::vector<FrustratedLoop> loops;
    SpinState planted;
};

// Loops per clause before generate_loops gives up.
inline constexpr int kLoopRetryBudget = 10000;
// Whole-instance regenerations before generate_instance gives up.
inline constexpr int kInstanceRetryBudget = 1000;

inline std::size_t loop_count(double alpha, std::size_t spins) {
    return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(spins) + 0.5));
}

inline bool is_connected(std::size_t n, const std::vector<std::vector<int>>& adj) {
    if (n == 0) return true;
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

namespace detail {

// Random walk from a uniform start with uniform neighbour steps until the
// first revisit; returns the closed cycle, or empty if shorter than 4.
inline std::vector<int> random_loop(const std::vector<std::vector<int>>& adj, Rng& rng) {
    const std::size_t n = adj.size();
    std::vector<int> path;
    std::vector<int> position(n, -1);
    int v = static_cast<int>(uniform_index(rng, n));
    for (;;) {
        position[static_cast<std::size_t>(v)] = static_cast<int>(path.size());
        path.push_back(v);
        const auto& nbrs = adj[static_cast<std::size_t>(v)];
        if (nbrs.empty()) return {};
        const int next = nbrs[uniform_index(rng, nbrs.size())];
        const int seen_at = position[static_cast<std::size_t>(next)];
        if (seen_at >= 0) {
            if (path.size() - static_cast<std::size_t>(seen_at) < 4) return {};
            return {path.begin() + seen_at, path.end()};
        }
        v = next;
    }
}

} // namespace detail

// Places round(alpha * N) frustrated loops with accumulated |J| <= rho. The
// planted state is all +1 in this gauge.
inline LoopProblem generate_loops(const LogicalGraph& graph, double alpha, int rho, Rng& rng) {
    require(graph.num_spins() > 0, "logical graph is empty");
    require(alpha > 0.0, "alpha must be positive");
    require(rho >= 1, "rho must be >= 1");
    const auto adj = graph.adjacency();
    require(is_connected(graph.num_spins(), adj), "logical graph is disconnected");

    // coupler index for each (spin, neighbour slot)
    std::vector<std::vector<int>> edge_id(graph.num_spins());
    for (std::size_t i = 0; i < graph.num_spins(); ++i) edge_id[i].resize(adj[i].size());
    for (std::size_t e = 0; e < graph.couplers.size(); ++e) {
        auto [a, b] = graph.couplers[e];
        for (std::size_t k = 0; k < adj[static_cast<std::size_t>(a)].size(); ++k)
            if (adj[static_cast<std::size_t>(a)][k] == b) edge_id[static_cast<std::size_t>(a)][k] = static_cast<int>(e);
        for (std::size_t k = 0; k < adj[static_cast<std::size_t>(b)].size(); ++k)
            if (adj[static_cast<std::size_t>(b)][k] == a) edge_id[static_cast<std::size_t>(b)][k] = static_cast<int>(e);
    }
    auto coupler_index = [&](int a, int b) {
        const auto& nbrs = adj[static_cast<std::size_t>(a)];
        for (std::size_t k = 0; k < nbrs.size(); ++k)
            if (nbrs[k] == b) return edge_id[static_cast<std::size_t>(a)][k];
        throw InvalidParameter("loop step is not a logical coupler");
    };

    std::vector<std::int64_t> couplings(graph.couplers.size(), 0);
    LoopProblem out;
    const std::size_t target = loop_count(alpha, graph.num_spins());
    std::vector<int> loop_edges;
    std::vector<std::int64_t> contribution;
    for (std::size_t placed = 0; placed < target; ++placed) {
        bool accepted = false;
        for (int attempt = 0; attempt < kLoopRetryBudget && !accepted; ++attempt) {
            std::vector<int> cycle = detail::random_loop(adj, rng);
            if (cycle.empty()) continue;
            const std::size_t len = cycle.size();
            loop_edges.resize(len);
            for (std::size_t k = 0; k < len; ++k) loop_edges[k] = coupler_index(cycle[k], cycle[(k + 1) % len]);
            const std::size_t frustrated = uniform_index(rng, len);
            contribution.assign(len, -1);
            contribution[frustrated] = 1;
            bool in_range = true;
            for (std::size_t k = 0; k < len && in_range; ++k)
                in_range = std::llabs(couplings[static_cast<std::size_t>(loop_edges[k])] + contribution[k]) <= rho;
            if (!in_range) continue;
            for (std::size_t k = 0; k < len; ++k) couplings[static_cast<std::size_t>(loop_edges[k])] += contribution[k];
            FrustratedLoop loop;
            loop.frustrated_edge = {cycle[frustrated], cycle[(frustrated + 1) % len]};
            loop.vertices = std::move(cycle);
            out.loops.push_back(std::move(loop));
            accepted = true;
        }
        if (!accepted)
            throw GenerationFailure("could not place loop " + std::to_string(placed + 1) + " of " +
                                    std::to_string(target) + " within range " + std::to_string(rho));
    }
    std::vector<Edge> edges;
    edges.reserve(graph.couplers.size());
    for (std::size_t e = 0; e < graph.couplers.size(); ++e)
        edges.push_back({graph.couplers[e].first, graph.couplers[e].second, couplings[e]});
    out.problem = IsingProblem(static_cast<int>(graph.num_spins()), {}, std::move(edges), 1);
    out.planted.assign(graph.num_spins(), Spin{1});
    return out;
}

inline std::int64_t planted_loop_energy(const std::vector<FrustratedLoop>& loops) {
    std::int64_t e = 0;
    for (const auto& loop : loops) e -= static_cast<std::int64_t>(loop.vertices.size()) - 2;
    return e;
}

struct NativeEmbedding {
    IsingProblem problem;              // scale = R
    ClusterMap clusters;               // logical spin -> native vertices
    std::vector<QubitId> vertex_qubit; // native vertex -> qubit id
};

// Intra-cell couplers of complete cells get -1; the four couplers of a logical
// coupler each carry J_L / R; every other coupler of the working graph is 0.
inline NativeEmbedding build_native(const IsingProblem& logical, const LogicalGraph& graph,
                                    const ChimeraGraph& working_graph, int ruggedness) {
    require(ruggedness >= 1, "ruggedness must be >= 1");
    require(logical.num_vertices() == static_cast<int>(graph.num_spins()), "logical problem does not match graph");
    for (const Edge& e : logical.edges())
        require(std::llabs(e.coupling) <= ruggedness,
                "ruggedness " + std::to_string(ruggedness) + " is below max |J_L| = " + std::to_string(e.coupling));
    require(!logical.has_fields(), "logical problem must have zero fields");

    NativeEmbedding out;
    out.vertex_qubit = working_graph.qubits();
    std::vector<int> vertex_of(static_cast<std::size_t>(working_graph.num_slots()), -1);
    for (std::size_t v = 0; v < out.vertex_qubit.size(); ++v)
        vertex_of[static_cast<std::size_t>(out.vertex_qubit[v])] = static_cast<int>(v);

    out.clusters.members.resize(graph.num_spins());
    std::vector<int> filled(graph.num_spins(), 0);
    for (QubitId q : out.vertex_qubit) {
        const int c = graph.cell_map[static_cast<std::size_t>(q)];
        if (c >= 0) out.clusters.members[static_cast<std::size_t>(c)][static_cast<std::size_t>(filled[static_cast<std::size_t>(c)]++)] =
            vertex_of[static_cast<std::size_t>(q)];
    }

    std::vector<Edge> edges;
    edges.reserve(working_graph.num_couplers());
    for (const Coupler& c : working_graph.couplers()) {
        const int ca = graph.cell_map[static_cast<std::size_t>(c.a)];
        const int cb = graph.cell_map[static_cast<std::size_t>(c.b)];
        std::int64_t j = 0;
        if (ca >= 0 && cb >= 0) j = (ca == cb) ? -ruggedness : logical.coupling(ca, cb);
        edges.push_back({vertex_of[static_cast<std::size_t>(c.a)], vertex_of[static_cast<std::size_t>(c.b)], j});
    }
    out.problem = IsingProblem(static_cast<int>(out.vertex_qubit.size()), {}, std::move(edges), ruggedness);
    return out;
}

struct FclInstance {
    FclParams params;
    std::uint64_t accepted_seed = 0;  // sub-seed of the accepted generation attempt
    ChimeraGraph working_graph;
    LogicalGraph logical_graph;
    IsingProblem logical;
    NativeEmbedding native;
    std::vector<FrustratedLoop> loops;
    SpinState planted_state;
    std::int64_t planted_logical_energy = 0;
    ScaledEnergy planted_native_energy = 0;  // units of 1/R

    const IsingProblem& native_problem() const { return native.problem; }
    const ClusterMap& clusters() const { return native.clusters; }

    friend bool operator==(const FclInstance& a, const FclInstance& b) {
        return a.params == b.params && a.accepted_seed == b.accepted_seed && a.working_graph == b.working_graph &&
               a.logical_graph == b.logical_graph && a.logical == b.logical && a.native.problem == b.native.problem &&
               a.native.clusters == b.native.clusters && a.native.vertex_qubit == b.native.vertex_qubit &&
               a.loops == b.loops && a.planted_state == b.planted_state &&
               a.planted_logical_energy == b.planted_logical_energy &&
               a.planted_native_energy == b.planted_native_energy;
    }
};

// True iff the nonzero couplings form a connected graph touching every spin.
inline bool support_spans(const IsingProblem& logical) {
    const auto n = static_cast<std::size_t>(logical.num_vertices());
    std::vector<std::vector<int>> adj(n);
    for (const Edge& e : logical.edges()) {
        if (e.coupling == 0) continue;
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    return is_connected(n, adj);
}

// True iff the nonzero couplings form a single connected component. Spins no
// loop touched stay free and are not counted as components.
inline bool support_connected(const IsingProblem& logical) {
    const auto n = static_cast<std::size_t>(logical.num_vertices());
    std::vector<int> local(n, -1);
    int covered = 0;
    for (const Edge& e : logical.edges()) {
        if (e.coupling == 0) continue;
        for (int v : {e.u, e.v})
            if (local[static_cast<std::size_t>(v)] < 0) local[static_cast<std::size_t>(v)] = covered++;
    }
    if (covered == 0) return false;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(covered));
    for (const Edge& e : logical.edges()) {
        if (e.coupling == 0) continue;
        const int a = local[static_cast<std::size_t>(e.u)];
        const int b = local[static_cast<std::size_t>(e.v)];
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    return is_connected(static_cast<std::size_t>(covered), adj);
}

// Assembles an instance from an already generated logical problem; shared
// by generation and file loading so native couplings are always derived.
inline FclInstance assemble_instance(const FclParams& params, std::uint64_t accepted_seed, ChimeraGraph working_graph,
                                     IsingProblem logical, std::vector<FrustratedLoop> loops, SpinState planted) {
    validate(params);
    require(working_graph.size() == params.size, "working graph size does not match params.size");
    FclInstance inst;
    inst.params = params;
    inst.accepted_seed = accepted_seed;
    inst.logical_graph = extract_logical(working_graph);
    inst.working_graph = std::move(working_graph);
    for (const Edge& e : logical.edges())
        require(std::llabs(e.coupling) <= params.rho,
                "logical coupling " + std::to_string(e.coupling) + " exceeds rho " + std::to_string(params.rho));
    inst.native = build_native(logical, inst.logical_graph, inst.working_graph, params.ruggedness);
    inst.logical = std::move(logical);
    inst.loops = std::move(loops);
    inst.planted_state = std::move(planted);
    inst.planted_logical_energy = planted_loop_energy(inst.loops);
    inst.planted_native_energy = -16 * static_cast<std::int64_t>(params.ruggedness) *
                                     static_cast<std::int64_t>(inst.logical_graph.num_spins()) +
                                 4 * inst.planted_logical_energy;
    return inst;
}

// Full pipeline: logical extraction, loop placement, native embedding.
// Attempts whose coupling support splits into several components are
// regenerated from a derived sub-seed.
inline FclInstance generate_instance(const FclParams& params, const ChimeraGraph& working_graph) {
    validate(params);
    require(working_graph.size() == params.size, "working graph size does not match params.size");
    const LogicalGraph graph = extract_logical(working_graph);
    require(graph.num_spins() > 0, "working graph has no complete cells");
    if (!is_connected(graph.num_spins(), graph.adjacency()))
        throw GenerationFailure("logical graph of the working graph is disconnected");
    std::string last_failure = "coupling support was disconnected";
    for (int attempt = 0; attempt < kInstanceRetryBudget; ++attempt) {
        const std::uint64_t sub_seed = derive_seed(params.seed, static_cast<std::uint64_t>(attempt));
        Rng rng(sub_seed);
        LoopProblem lp;
        try {
            lp = generate_loops(graph, params.alpha, params.rho, rng);
        } catch (const GenerationFailure& e) {
            last_failure = e.what();
            continue;
        }
        if (!support_connected(lp.problem)) continue;
        return assemble_instance(params, sub_seed, working_graph, std::move(lp.problem), std::move(lp.loops),
                                 std::move(lp.planted));
    }
    throw GenerationFailure("instance rejected " + std::to_string(kInstanceRetryBudget) + " times: " + last_failure);
}

} // namespace fcl
