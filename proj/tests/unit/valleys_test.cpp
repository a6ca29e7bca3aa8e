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
#include "fcl/exact.hpp"
#include "fcl/generator.hpp"
#include "fcl/valleys.hpp"
#include "oracles.hpp"

using namespace fcl;

namespace {

GroundStateSet set_of(std::vector<SpinState> states) {
    std::sort(states.begin(), states.end());
    GroundStateSet g;
    g.count = states.size();
    g.states = std::move(states);
    return g;
}

// Partition as canonical sorted member lists, for comparison with the oracle.
std::vector<std::vector<int>> partition(const ValleyDecomposition& d) {
    std::vector<std::vector<int>> out;
    for (std::size_t v = 0; v < d.num_valleys(); ++v) {
        auto m = d.members(v);
        std::sort(m.begin(), m.end());
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(Valleys, FerromagnetPairIsOneValley) {
    const auto d = decompose_valleys(set_of({SpinState(5, 1), SpinState(5, -1)}));
    EXPECT_EQ(d.num_valleys(), 1u);
    EXPECT_EQ(d.sizes(), std::vector<std::size_t>{2});
}

TEST(Valleys, AdjacentPairWithNegationsIsOneValley) {
    const SpinState u{1, 1, -1, 1};
    SpinState w = u;
    w[2] = 1;
    const auto d = decompose_valleys(set_of({u, w, negate(u), negate(w)}));
    EXPECT_EQ(d.num_valleys(), 1u);
    EXPECT_EQ(d.sizes(), std::vector<std::size_t>{4});
}

TEST(Valleys, DistantStatesAreSeparateValleys) {
    const SpinState a{1, 1, 1, 1, 1, 1};
    const SpinState b{1, 1, 1, -1, -1, -1};
    const auto d = decompose_valleys(set_of({a, b, negate(a), negate(b)}));
    EXPECT_EQ(d.num_valleys(), 2u);
    EXPECT_EQ(d.assign(a), d.assign(negate(a)));
    EXPECT_NE(d.assign(a), d.assign(b));
}

TEST(Valleys, CappedSetRejected) {
    GroundStateSet g;
    g.cap_exceeded = true;
    EXPECT_THROW(decompose_valleys(g), InvalidParameter);
    EXPECT_THROW(overlap_stats(g), InvalidParameter);
    EXPECT_THROW(overlap_stats(std::vector<SpinState>{}), InvalidParameter);
}

TEST(Valleys, RandomLatticesMatchPairwiseOracle) {
    Rng rng(31);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        const auto lp = oracle::random_lattice(4, 4, 1, rng);
        const auto gs = enumerate_ground_states(lp.problem, lp.graph, 400);
        if (gs.cap_exceeded) continue;
        const auto d = decompose_valleys(gs);
        EXPECT_EQ(partition(d), oracle::valleys(gs.states));
        std::size_t total = 0;
        for (auto s : d.sizes()) total += s;
        EXPECT_EQ(total, gs.states.size());
        ++checked;
    }
    EXPECT_GT(checked, 20);
}

TEST(Valleys, AssignmentProperties) {
    const auto inst = generate_instance({0.65, 3, 3, 4, 5}, build_chimera(4));
    const auto gs = enumerate_ground_states(inst.logical, inst.logical_graph);
    ASSERT_FALSE(gs.cap_exceeded);
    const auto d = decompose_valleys(gs);
    EXPECT_TRUE(d.assign(inst.planted_state).has_value());
    for (std::size_t i = 0; i < gs.states.size(); ++i) {
        EXPECT_EQ(d.assign(gs.states[i]), d.valley_of_state(i));
        EXPECT_EQ(d.assign(gs.states[i]), d.assign(negate(gs.states[i])));
    }
    // an excited state: flip one spin of the planted state
    SpinState excited = inst.planted_state;
    for (std::size_t v = 0; v < excited.size(); ++v) {
        excited[v] = static_cast<Spin>(-excited[v]);
        if (energy(inst.logical, excited) > gs.ground_energy) {
            EXPECT_FALSE(d.assign(excited).has_value());
            break;
        }
        excited[v] = static_cast<Spin>(-excited[v]);
    }
    EXPECT_FALSE(d.assign(SpinState(3, 1)).has_value());
}

TEST(Valleys, OverlapOfAntipodalPairIsOne) {
    const auto o = overlap_stats(std::vector<SpinState>{SpinState(7, 1), SpinState(7, -1)});
    EXPECT_DOUBLE_EQ(o.mean_overlap, 1.0);
    EXPECT_EQ(o.histogram[7], 4u);
}

TEST(Valleys, OverlapOfOrthogonalStatesIsHalf) {
    const SpinState a{1, 1, 1, 1};
    const SpinState b{1, 1, -1, -1};
    const auto o = overlap_stats(std::vector<SpinState>{a, b, negate(a), negate(b)});
    EXPECT_DOUBLE_EQ(o.mean_overlap, 0.5);
    EXPECT_EQ(o.histogram[0], 8u);
    EXPECT_EQ(o.histogram[4], 8u);
}

TEST(Valleys, OverlapMatchesDoubleLoop) {
    Rng rng(32);
    for (int t = 0; t < 20; ++t) {
        const auto lp = oracle::random_lattice(4, 4, 1, rng);
        const auto gs = enumerate_ground_states(lp.problem, lp.graph, 400);
        if (gs.cap_exceeded) continue;
        EXPECT_NEAR(overlap_stats(gs).mean_overlap, oracle::mean_overlap(gs.states), 1e-12);
        // free spin appended: every state appears with both values of the new spin
        std::vector<SpinState> extended;
        for (const auto& s : gs.states)
            for (Spin x : {Spin{-1}, Spin{1}}) {
                auto e = s;
                e.push_back(x);
                extended.push_back(e);
            }
        EXPECT_NEAR(overlap_stats(extended).mean_overlap, oracle::mean_overlap(extended), 1e-12);
    }
}

TEST(Valleys, MiningRules) {
    MiningCriteria c;
    // ferromagnet-like: uniform -1 couplings on a 3x3 lattice, one valley
    const auto working = build_chimera(3);
    const auto graph = extract_logical(working);
    std::vector<Edge> edges;
    for (auto [i, j] : graph.couplers) edges.push_back({i, j, -1});
    std::vector<FrustratedLoop> loops;
    const auto ferro = assemble_instance({0.5, 3, 3, 3, 0}, 0, working, IsingProblem(9, {}, edges), loops,
                                         SpinState(9, 1));
    auto r = mine_filter(ferro, c);
    EXPECT_FALSE(r.accept);
    // two ground states, one valley, overlap 1: both rules fire
    EXPECT_EQ(r.reasons, (std::vector<std::string>{"too-few-valleys", "high-overlap"}));

    // all-zero couplings on 4x4: 2^16 ground states
    std::vector<Edge> zero;
    const auto w4 = build_chimera(4);
    for (auto [i, j] : extract_logical(w4).couplers) zero.push_back({i, j, 0});
    const auto flat = assemble_instance({0.5, 3, 3, 4, 0}, 0, w4, IsingProblem(16, {}, zero), {}, SpinState(16, 1));
    r = mine_filter(flat, c);
    EXPECT_FALSE(r.accept);
    EXPECT_EQ(r.reasons, std::vector<std::string>{"cap"});
}

TEST(Valleys, MiningAcceptsSomeFclInstances) {
    const auto working = build_chimera(6);
    int accepted = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto inst = generate_instance({0.85, 6, 6, 6, seed}, working);
        const auto r = mine_filter(inst);
        ++total;
        if (r.accept) {
            ++accepted;
            EXPECT_GE(r.valleys->num_valleys(), 4u);
            EXPECT_LT(r.overlap->mean_overlap, 0.7);
        }
        for (const auto& reason : r.reasons) EXPECT_TRUE(reason == "cap" || reason == "too-few-valleys" || reason == "high-overlap");
    }
    EXPECT_LT(accepted, total);
}
