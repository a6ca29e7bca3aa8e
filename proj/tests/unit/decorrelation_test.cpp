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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fcl/decorrelation.hpp"
#include "fcl/generator.hpp"

using namespace fcl;

namespace {

std::vector<double> ar1(double phi, std::size_t n, Rng& rng) {
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> x(n);
    double v = noise(rng) / std::sqrt(1 - phi * phi);
    for (auto& xi : x) xi = v = phi * v + noise(rng);
    return x;
}

} // namespace

TEST(Autocorrelation, WhiteNoise) {
    Rng rng(1);
    std::vector<double> x(100000);
    for (auto& v : x) v = static_cast<double>(uniform_index(rng, 32));
    EXPECT_NEAR(integrated_autocorrelation(x), 0.5, 0.05);
}

TEST(Autocorrelation, Ar1ClosedForm) {
    Rng rng(2);
    for (double phi : {0.5, 0.9}) {
        const double closed = 0.5 * (1 + phi) / (1 - phi);
        const auto x = ar1(phi, 100000, rng);
        EXPECT_NEAR(integrated_autocorrelation(x) / closed, 1.0, 0.1) << "phi " << phi;
    }
}

TEST(Autocorrelation, ConstantSeriesIsDegenerate) {
    const std::vector<double> flat(2000, 3.0);
    EXPECT_THROW(integrated_autocorrelation(flat), DegenerateSeries);
    EXPECT_THROW(detail::autocorrelation(flat), DegenerateSeries);
}

TEST(Autocorrelation, DirectSumOracle) {
    Rng rng(3);
    const auto x = ar1(0.7, 3000, rng);
    const auto rho = detail::autocorrelation(x);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double c0 = 0;
    for (double v : x) c0 += (v - mean) * (v - mean);
    for (std::size_t t : {0u, 1u, 5u, 40u}) {
        double c = 0;
        for (std::size_t i = 0; i + t < x.size(); ++i) c += (x[i] - mean) * (x[i + t] - mean);
        EXPECT_NEAR(rho[t], c / c0, 1e-9);
    }
}

TEST(ParallelTempering, InfiniteTemperatureReplicaIsUniform) {
    // single replica at beta = 0 on a 3-spin chain: energies of uniform states
    const IsingProblem p(3, {}, {{0, 1, -1}, {1, 2, 2}});
    Rng rng(4);
    const auto trace = run_pt(p, {0.0}, 40000, rng, true);
    const auto& e = trace.energy_series[0];
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
    double var = 0;
    for (double v : e) var += (v - mean) * (v - mean);
    var /= static_cast<double>(e.size());
    EXPECT_NEAR(mean, 0.0, 0.05);
    EXPECT_NEAR(var, 1.0 + 4.0, 0.1);  // sum of J^2
    EXPECT_NEAR(integrated_autocorrelation(e), 0.5, 0.05);
}

TEST(ParallelTempering, EqualBetasAlwaysExchange) {
    const IsingProblem p(4, {}, {{0, 1, -1}, {1, 2, 1}, {2, 3, -1}});
    Rng rng(5);
    const auto trace = run_pt(p, {0.7, 0.7}, 2000, rng);
    EXPECT_EQ(trace.accepts[0], trace.attempts[0]);
    const IsingProblem zero(4, {}, {{0, 1, 0}, {1, 2, 0}});
    const auto t2 = run_pt(zero, {0.0, 1.0, 5.0}, 500, rng);
    for (double r : t2.exchange_rates()) EXPECT_DOUBLE_EQ(r, 1.0);
}

TEST(ParallelTempering, SlotsFormPermutation) {
    const auto inst = generate_instance({0.65, 3, 3, 2, 1}, build_chimera(2));
    Rng rng(6);
    const auto betas = geometric_ladder(8, 3.0);
    const auto trace = run_pt(inst.native_problem(), betas, 500, rng);
    for (int t = 0; t < trace.sweeps; ++t) {
        std::vector<int> seen;
        for (const auto& chain : trace.slot_series) seen.push_back(chain[static_cast<std::size_t>(t)]);
        std::sort(seen.begin(), seen.end());
        for (int i = 0; i < 8; ++i) ASSERT_EQ(seen[static_cast<std::size_t>(i)], i);
    }
}

TEST(ParallelTempering, TwoSpinBoltzmannMagnetization) {
    // h = (1/2, -1), J = -1/2 in units of 1/2
    const IsingProblem p(2, {1, -2}, {{0, 1, -1}}, 2);
    const std::vector<double> betas{0.0, 0.5, 1.0, 2.0};
    Rng rng(7);
    ParallelTempering pt(p, betas, rng);
    std::vector<std::uint64_t> att(3), acc(3);
    std::vector<double> m(betas.size(), 0.0);
    const int samples = 40000, thin = 5;
    for (int k = 0; k < samples * thin; ++k) {
        pt.sweep(rng, att, acc);
        if (k % thin) continue;
        for (std::size_t i = 0; i < betas.size(); ++i) m[i] += pt.state_at_slot(i)[0];
    }
    for (std::size_t i = 0; i < betas.size(); ++i) {
        double z = 0, num = 0;
        for (int a : {1, -1})
            for (int b : {1, -1}) {
                const double e = 0.5 * a - 1.0 * b - 0.5 * a * b;
                const double w = std::exp(-betas[i] * e);
                z += w;
                num += a * w;
            }
        const double exact = num / z;
        const double sigma = std::sqrt((1 - exact * exact) / samples);
        EXPECT_NEAR(m[i] / samples, exact, 3 * sigma) << "beta " << betas[i];
    }
}

TEST(ParallelTempering, RejectsBadLadder) {
    const IsingProblem p(2, {}, {{0, 1, -1}});
    Rng rng(1);
    EXPECT_THROW(ParallelTempering(p, {1.0, 0.5}, rng), InvalidParameter);
    EXPECT_THROW(ParallelTempering(p, {-1.0, 0.5}, rng), InvalidParameter);
    EXPECT_THROW(calibrate_ladder(p, 2, rng), InvalidParameter);
}

TEST(Ladder, GeometricStart) {
    const auto b = geometric_ladder(5, 30.0);
    EXPECT_EQ(b.size(), 5u);
    EXPECT_EQ(b.front(), 0.0);
    EXPECT_EQ(b.back(), 30.0);
    EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
    EXPECT_NEAR(b[2] / b[1], b[3] / b[2], 1e-9);
}

TEST(Ladder, EqualizeBalancesCost) {
    // three gaps with rates 0.1, 0.9, 0.9: the first gap is far more costly
    const std::vector<double> betas{0.0, 1.0, 2.0, 3.0};
    const auto out = detail::equalize(betas, {0.1, 0.9, 0.9}, 4);
    EXPECT_EQ(out.front(), 0.0);
    EXPECT_EQ(out.back(), 3.0);
    EXPECT_LT(out[1], 1.0);
    EXPECT_LT(out[2], 1.0);
    EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));
}

TEST(Ladder, ZeroCouplingsTerminateImmediately) {
    const IsingProblem p(6, {}, {{0, 1, 0}, {2, 3, 0}});
    Rng rng(8);
    LadderOptions o;
    o.burst_sweeps = 200;
    const auto ladder = calibrate_ladder(p, 6, rng, o);
    EXPECT_EQ(ladder.iterations, 1);
    for (double r : ladder.exchange_rates) EXPECT_DOUBLE_EQ(r, 1.0);
    EXPECT_TRUE(ladder.warning);
}

// On a 2-spin ferromagnet the exchange rate between beta = 0 and any beta b is
// 1 - p_b (1 - e^{-2b}) / 2 >= 1/2, and pairs of cold replicas always swap, so
// the [1/3, 1/2] band cannot be reached with endpoints 0 and 30. Calibration
// must report that rather than claim convergence.
TEST(Ladder, TwoSpinFerromagnetCannotReachBand) {
    const IsingProblem p(2, {}, {{0, 1, -1}});
    Rng rng(9);
    LadderOptions o;
    o.burst_sweeps = 4000;
    o.max_iterations = 10;
    const auto ladder = calibrate_ladder(p, 3, rng, o);
    EXPECT_TRUE(ladder.warning);
    EXPECT_FALSE(ladder.in_band);
    EXPECT_LE(ladder.iterations, 10);
    for (double r : ladder.exchange_rates) EXPECT_GT(r, 0.47);
    EXPECT_EQ(ladder.betas.front(), 0.0);
    EXPECT_EQ(ladder.betas.back(), 30.0);
}

TEST(Ladder, FclInstanceCalibratesIntoBand) {
    const auto inst = generate_instance({0.65, 3, 3, 3, 2}, build_chimera(3));
    Rng rng(10);
    LadderOptions o;
    o.adapt_replica_count = false;
    const auto fixed = calibrate_ladder(inst.native_problem(), 32, rng, o);
    EXPECT_EQ(fixed.betas.size(), 32u);
    // 32 replicas are too many for 72 spins: every gap swaps too often
    for (double r : fixed.exchange_rates) EXPECT_GT(r, 0.5);
    EXPECT_TRUE(fixed.warning);
    const auto ladder = calibrate_ladder(inst.native_problem(), 32, rng);
    EXPECT_TRUE(ladder.in_band);
    EXPECT_LT(ladder.betas.size(), 32u);
    EXPECT_TRUE(std::is_sorted(ladder.betas.begin(), ladder.betas.end()));
    for (double r : ladder.exchange_rates) {
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, 1.0);
    }
    EXPECT_EQ(ladder.in_band, !ladder.warning);
}

TEST(Decorrelation, TauInvariantUnderRelabeling) {
    const auto inst = generate_instance({0.65, 3, 3, 2, 3}, build_chimera(2));
    Rng rng(11);
    auto trace = run_pt(inst.native_problem(), geometric_ladder(6, 3.0), 5000, rng);
    const auto a = autocorrelation_time(trace);
    std::reverse(trace.slot_series.begin(), trace.slot_series.end());
    const auto b = autocorrelation_time(trace);
    EXPECT_NEAR(a.tau, b.tau, 1e-9 * a.tau);
    EXPECT_EQ(a.chain_taus.size(), 6u);
    EXPECT_GT(a.tau, 0.0);
    trace.sweeps = 999;
    EXPECT_THROW(autocorrelation_time(trace), InvalidParameter);
}

// A replica that never leaves its slot after burn-in has infinite tau.
TEST(Decorrelation, StuckChainGivesInfiniteTau) {
    PtTrace trace;
    trace.sweeps = 2000;
    Rng rng(3);
    std::vector<std::uint16_t> moving(2000), stuck(2000, 1);
    for (auto& s : moving) s = static_cast<std::uint16_t>(uniform_index(rng, 2));
    stuck[10] = 0;  // only moves during burn-in
    trace.slot_series = {moving, stuck};
    const auto r = autocorrelation_time(trace);
    EXPECT_TRUE(std::isinf(r.tau));
    ASSERT_EQ(r.chain_taus.size(), 2u);
    EXPECT_TRUE(std::isfinite(r.chain_taus[0]));
    EXPECT_TRUE(std::isinf(r.chain_taus[1]));
    EXPECT_FALSE(r.stationary);
}

TEST(Decorrelation, MeasurementIsDeterministic) {
    const auto inst = generate_instance({0.65, 3, 3, 2, 4}, build_chimera(2));
    DecorrelationOptions o;
    o.replicas = 8;
    o.sweeps = 3000;
    o.ladder.burst_sweeps = 300;
    o.ladder.max_iterations = 4;
    const auto a = measure_decorrelation(inst.native_problem(), o, 42);
    const auto b = measure_decorrelation(inst.native_problem(), o, 42);
    EXPECT_EQ(a.ladder.betas, b.ladder.betas);
    EXPECT_EQ(a.autocorrelation.tau, b.autocorrelation.tau);
    EXPECT_EQ(a.autocorrelation.chain_taus, b.autocorrelation.chain_taus);
}
