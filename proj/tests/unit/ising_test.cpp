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

#include <gtest/gtest.h>

#include "fcl/error.hpp"
#include "fcl/generator.hpp"
#include "fcl/ising.hpp"
#include "oracles.hpp"

using namespace fcl;

namespace {

struct RandomProblem {
    IsingProblem problem;
    std::vector<std::int64_t> h;
    std::vector<std::tuple<int, int, std::int64_t>> couplings;
};

RandomProblem random_problem(int n, double density, bool fields, Rng& rng) {
    RandomProblem r;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform01(rng) < density) {
                const auto J = static_cast<std::int64_t>(uniform_index(rng, 9)) - 4;
                edges.push_back({j, i, J});  // reversed endpoints on purpose
                r.couplings.emplace_back(i, j, J);
            }
    for (int i = 0; i < n; ++i) r.h.push_back(fields ? static_cast<std::int64_t>(uniform_index(rng, 5)) - 2 : 0);
    r.problem = IsingProblem(n, r.h, edges);
    return r;
}

SpinState random_spins(std::size_t n, Rng& rng) {
    SpinState s(n);
    for (auto& x : s) x = uniform_index(rng, 2) ? Spin{1} : Spin{-1};
    return s;
}

} // namespace

TEST(Ising, SatisfiedFerromagnet) {
    std::vector<Edge> edges;
    for (int i = 0; i < 5; ++i) edges.push_back({i, i + 1, -1});
    const IsingProblem p(6, {}, edges);
    EXPECT_EQ(energy(p, SpinState(6, 1)), -5);
}

TEST(Ising, SingleField) {
    const IsingProblem p(1, {1}, {});
    EXPECT_EQ(energy(p, SpinState{-1}), -1);
}

TEST(Ising, EnergyMatchesNaiveSum) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto r = random_problem(16, 0.4, true, rng);
        const auto s = random_spins(16, rng);
        EXPECT_EQ(energy(r.problem, s), oracle::naive_energy(16, r.h, r.couplings, s));
    }
}

TEST(Ising, DimensionMismatchThrows) {
    const IsingProblem p(3, {}, {{0, 1, -1}});
    EXPECT_THROW(energy(p, SpinState(2, 1)), InvalidParameter);
    EXPECT_THROW(energy_delta(p, SpinState(3, 1), 3), InvalidParameter);
    EXPECT_THROW(energy_delta(p, SpinState(3, 1), -1), InvalidParameter);
}

TEST(Ising, ProblemValidation) {
    EXPECT_THROW(IsingProblem(2, {}, {{0, 0, 1}}), InvalidParameter);
    EXPECT_THROW(IsingProblem(2, {}, {{0, 2, 1}}), InvalidParameter);
    EXPECT_THROW(IsingProblem(2, {}, {{0, 1, 1}, {1, 0, 1}}), InvalidParameter);
    EXPECT_THROW(IsingProblem(2, {1}, {}), InvalidParameter);
    EXPECT_THROW(IsingProblem(2, {}, {}, 0), InvalidParameter);
}

TEST(Ising, DeltaExamples) {
    const IsingProblem isolated(2, {}, {});
    EXPECT_EQ(energy_delta(isolated, SpinState{1, 1}, 0), 0);
    const IsingProblem field(1, {1}, {});
    EXPECT_EQ(energy_delta(field, SpinState{1}, 0), -2);
}

TEST(Ising, DeltaMatchesRecomputation) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto r = random_problem(12, 0.5, true, rng);
        auto s = random_spins(12, rng);
        for (int v = 0; v < 12; ++v) {
            const auto before = energy(r.problem, s);
            const auto d = energy_delta(r.problem, s, v);
            s[static_cast<std::size_t>(v)] = static_cast<Spin>(-s[static_cast<std::size_t>(v)]);
            EXPECT_EQ(before + d, energy(r.problem, s));
        }
    }
}

TEST(Ising, GlobalFlipInvarianceWithoutFields) {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const auto r = random_problem(14, 0.5, false, rng);
        const auto s = random_spins(14, rng);
        EXPECT_EQ(energy(r.problem, s), energy(r.problem, negate(s)));
    }
}

TEST(Ising, ScaledUnits) {
    const IsingProblem p(2, {}, {{0, 1, -3}}, 4);
    EXPECT_EQ(energy(p, SpinState{1, 1}), -3);
    EXPECT_DOUBLE_EQ(to_ising_units(p, -3), -0.75);
}

TEST(Ising, ProjectionAllUp) {
    ClusterMap cm;
    cm.members.push_back({0, 1, 2, 3, 4, 5, 6, 7});
    cm.members.push_back({8, 9, 10, 11, 12, 13, 14, 15});
    const auto p = project_to_logical(cm, SpinState(16, 1));
    EXPECT_EQ(p.logical, (SpinState{1, 1}));
    EXPECT_TRUE(p.all_unanimous());
}

TEST(Ising, ProjectionMajorityAndTie) {
    ClusterMap cm;
    cm.members.push_back({0, 1, 2, 3, 4, 5, 6, 7});
    SpinState s{1, 1, 1, 1, 1, -1, -1, -1};  // 5 up, 3 down
    auto p = project_to_logical(cm, s);
    EXPECT_EQ(p.logical[0], 1);
    EXPECT_FALSE(p.unanimous[0]);
    s = {-1, 1, 1, 1, 1, -1, -1, -1};  // 4-4 tie, first qubit down
    EXPECT_EQ(project_to_logical(cm, s).logical[0], -1);
    s = {1, -1, -1, -1, -1, 1, 1, 1};
    EXPECT_EQ(project_to_logical(cm, s).logical[0], 1);
}

TEST(Ising, NativeGroundStatesOfTwoCellInstanceAreUnanimous) {
    // 2-cell instance (C_2 with only the top row of cells complete would need a
    // yield mask; build a 1x2 logical lattice from C_2 by removing the bottom row).
    const auto full = build_chimera(2);
    std::vector<QubitId> missing;
    for (int q = 16; q < 32; ++q) missing.push_back(q);
    const auto working = apply_yield(full, missing, {});
    for (int R : {1, 2, 3}) {
        for (std::int64_t J : {-1, 0, 1}) {
            if (std::llabs(J) > R) continue;
            const auto graph = extract_logical(working);
            ASSERT_EQ(graph.num_spins(), 2u);
            const IsingProblem logical(2, {}, {{0, 1, J}});
            const auto native = build_native(logical, graph, working, R);
            ASSERT_EQ(native.problem.num_vertices(), 16);
            const auto gs = oracle::enumerate(native.problem);
            for (const auto& s : gs.states) EXPECT_TRUE(project_to_logical(native.clusters, s).all_unanimous());
        }
    }
}

TEST(Ising, LiftIsInverseOfProjection) {
    ClusterMap cm;
    cm.members.push_back({0, 2, 4, 6, 8, 10, 12, 14});
    cm.members.push_back({1, 3, 5, 7, 9, 11, 13, 15});
    const SpinState logical{1, -1};
    const auto native = lift_to_native(cm, 17, logical);
    EXPECT_EQ(native[16], 1);
    const auto p = project_to_logical(cm, native);
    EXPECT_EQ(p.logical, logical);
    EXPECT_TRUE(p.all_unanimous());
}
