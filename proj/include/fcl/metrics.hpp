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
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/distributions/beta.hpp>

#include "fcl/error.hpp"
#include "fcl/exact.hpp"
#include "fcl/generator.hpp"
#include "fcl/random.hpp"
#include "fcl/solvers/sample_set.hpp"
#include "fcl/valleys.hpp"

namespace fcl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Time to solution

struct TtsEstimate {
    std::uint64_t reads = 0;
    std::uint64_t hits = 0;
    double time_per_anneal = 0.0;
    double p_hat = 0.0;
    double tts = kInfinity;  // infinite when no read hit the ground state
    double ci_low = 0.0;
    double ci_high = kInfinity;
    bool lower_bound_only = false;
};

// TTS = t / p from hit counts, with a central interval taken from the Jeffreys
// Beta(hits + 1/2, misses + 1/2) posterior of p.
inline TtsEstimate tts_from_counts(std::uint64_t hits, std::uint64_t reads, double time_per_anneal,
                                   double confidence = 0.95) {
    require(reads > 0, "TTS needs at least one read");
    require(hits <= reads, "hits exceed reads");
    require(confidence > 0.0 && confidence < 1.0, "confidence must lie in (0, 1)");
    TtsEstimate t;
    t.reads = reads;
    t.hits = hits;
    t.time_per_anneal = time_per_anneal;
    t.p_hat = static_cast<double>(hits) / static_cast<double>(reads);
    const boost::math::beta_distribution<double> posterior(static_cast<double>(hits) + 0.5,
                                                           static_cast<double>(reads - hits) + 0.5);
    const double tail = 0.5 * (1.0 - confidence);
    const double p_low = boost::math::quantile(posterior, tail);
    const double p_high = boost::math::quantile(posterior, 1.0 - tail);
    t.ci_low = time_per_anneal / p_high;
    if (hits == 0) {
        t.lower_bound_only = true;
        return t;
    }
    t.tts = time_per_anneal / t.p_hat;
    t.ci_high = p_low > 0.0 ? time_per_anneal / p_low : kInfinity;
    return t;
}

inline TtsEstimate estimate_tts(const SampleSet& samples, ScaledEnergy ground_energy, double confidence = 0.95) {
    require(!samples.empty(), "TTS needs a nonempty sample set");
    std::uint64_t hits = 0;
    for (const auto& r : samples.records) {
        require(r.energy >= ground_energy, "sample energy below the stated ground energy");
        hits += r.energy == ground_energy ? 1 : 0;
    }
    return tts_from_counts(hits, samples.size(), samples.mean_anneal_time(), confidence);
}

// ---------------------------------------------------------------------------
// Coupon collection over valleys

// Expected number of draws until every outcome with probability p_v has been
// seen at least once, by inclusion-exclusion over nonempty subsets:
//   E = sum_S (-1)^{|S|+1} / sum_{v in S} p_v.
// Probabilities may sum to less than one (the remainder is a miss).
template <typename T>
T expected_collection_draws(std::span<const T> p) {
    const std::size_t n = p.size();
    require(n <= 30, "inclusion-exclusion over more than 30 outcomes is not supported");
    if (n == 0) return T(0);
    for (const T& x : p)
        if (!(x > T(0))) throw InvalidParameter("every outcome needs positive probability");
    const std::size_t subsets = std::size_t{1} << n;
    std::vector<T> sums(subsets, T(0));
    T total(0);
    for (std::size_t s = 1; s < subsets; ++s) {
        const auto low = static_cast<std::size_t>(std::countr_zero(s));
        sums[s] = sums[s & (s - 1)] + p[low];
        const T term = T(1) / sums[s];
        if (std::popcount(s) % 2 == 1) total += term;
        else total -= term;
    }
    return total;
}

// Monte Carlo estimate of the same expectation; draws are simulated with a
// geometric skip over misses.
inline double simulate_collection_draws(std::span<const double> p, std::size_t trials, std::uint64_t seed) {
    require(!p.empty(), "no outcomes to collect");
    double mass = 0.0;
    for (double x : p) {
        require(x > 0.0, "every outcome needs positive probability");
        mass += x;
    }
    require(mass <= 1.0 + 1e-12, "probabilities sum above one");
    mass = std::min(mass, 1.0);
    std::vector<double> cumulative(p.size());
    std::partial_sum(p.begin(), p.end(), cumulative.begin());
    Rng rng(derive_seed(seed, 0x636f75706f6e));
    const double log_miss = std::log1p(-mass);
    long double total = 0.0L;
    std::vector<std::uint8_t> seen(p.size());
    for (std::size_t t = 0; t < trials; ++t) {
        std::fill(seen.begin(), seen.end(), 0);
        std::size_t remaining = p.size();
        double draws = 0.0;
        while (remaining > 0) {
            if (mass >= 1.0) {
                draws += 1.0;
            } else {
                const double u = 1.0 - uniform01(rng);  // (0, 1]
                draws += std::max(1.0, std::ceil(std::log(u) / log_miss));
            }
            const double x = uniform01(rng) * mass;
            auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
            const auto v = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                                             static_cast<std::ptrdiff_t>(p.size()) - 1));
            if (!seen[v]) {
                seen[v] = 1;
                --remaining;
            }
        }
        total += draws;
    }
    return static_cast<double>(total / static_cast<long double>(trials));
}

// ---------------------------------------------------------------------------
// Logical projection of samples

struct ProjectedSample {
    SpinState logical;
    bool unanimous = true;
};

// Native samples are majority-projected through the instance's clusters;
// samples whose length equals the logical spin count are taken as logical.
inline std::vector<ProjectedSample> project_samples(const SampleSet& samples, const FclInstance& instance) {
    std::vector<ProjectedSample> out;
    out.reserve(samples.size());
    const std::size_t logical_n = instance.logical_graph.num_spins();
    const auto native_n = static_cast<std::size_t>(instance.native_problem().num_vertices());
    for (const auto& r : samples.records) {
        if (r.state.size() == logical_n && logical_n != native_n) {
            out.push_back({r.state, true});
        } else {
            require(r.state.size() == native_n, "sample length matches neither native nor logical problem");
            Projection p = project_to_logical(instance.clusters(), r.state);
            out.push_back({std::move(p.logical), p.all_unanimous()});
        }
    }
    return out;
}

// Valley hit per sample (nullopt for non-ground or non-unanimous samples).
inline std::vector<std::optional<int>> valley_hits(const std::vector<ProjectedSample>& projected,
                                                   const ValleyDecomposition& valleys) {
    std::vector<std::optional<int>> hits;
    hits.reserve(projected.size());
    for (const auto& s : projected) hits.push_back(s.unanimous ? valleys.assign(s.logical) : std::nullopt);
    return hits;
}

// ---------------------------------------------------------------------------
// Time to all valleys

inline constexpr std::size_t kMaxInclusionExclusionValleys = 20;
inline constexpr std::size_t kCollectionSimulationTrials = 100000;

struct TtavResult {
    double empirical = kInfinity;  // cumulative anneal time when the last valley was first hit
    double expected = kInfinity;   // expected draws x mean anneal time
    double expected_draws = kInfinity;
    bool simulated = false;        // expected value from Monte Carlo (too many valleys)
    std::vector<std::pair<double, double>> coverage;  // (anneal time, fraction of valleys seen)
    std::vector<std::uint64_t> valley_counts;
};

inline TtavResult ttav_from_hits(const std::vector<std::optional<int>>& hits, std::span<const double> times,
                                 std::size_t num_valleys, double mean_anneal_time, std::uint64_t seed = 0) {
    require(hits.size() == times.size(), "hit and time series differ in length");
    require(num_valleys > 0, "decomposition has no valleys");
    TtavResult r;
    r.valley_counts.assign(num_valleys, 0);
    std::size_t seen = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (!hits[i]) continue;
        auto& c = r.valley_counts[static_cast<std::size_t>(*hits[i])];
        if (c++ == 0) {
            ++seen;
            r.coverage.emplace_back(times[i], static_cast<double>(seen) / static_cast<double>(num_valleys));
            if (seen == num_valleys) r.empirical = times[i];
        }
    }
    if (hits.empty() || seen < num_valleys) return r;
    std::vector<double> p;
    for (auto c : r.valley_counts) p.push_back(static_cast<double>(c) / static_cast<double>(hits.size()));
    if (num_valleys <= kMaxInclusionExclusionValleys) {
        std::vector<long double> pl(p.begin(), p.end());
        r.expected_draws = static_cast<double>(expected_collection_draws<long double>(pl));
    } else {
        r.simulated = true;
        r.expected_draws = simulate_collection_draws(p, kCollectionSimulationTrials, seed);
    }
    r.expected = r.expected_draws * mean_anneal_time;
    return r;
}

inline TtavResult ttav(const SampleSet& samples, const FclInstance& instance, const ValleyDecomposition& valleys,
                       std::uint64_t seed = 0) {
    const auto hits = valley_hits(project_samples(samples, instance), valleys);
    std::vector<double> times;
    times.reserve(samples.size());
    for (const auto& r : samples.records) times.push_back(r.anneal_time);
    return ttav_from_hits(hits, times, valleys.num_valleys(), samples.mean_anneal_time(), seed);
}

// ---------------------------------------------------------------------------
// Valley KL-divergence

// sum_v P(v) ln(P(v) / Phat(v)) with P from valley sizes and Phat from hit
// counts; infinite when a valley was never hit.
inline double kld_from_counts(std::span<const std::size_t> sizes, std::span<const std::uint64_t> counts) {
    require(sizes.size() == counts.size() && !sizes.empty(), "valley sizes and counts differ");
    double total_size = 0.0, total_hits = 0.0;
    for (std::size_t v = 0; v < sizes.size(); ++v) {
        total_size += static_cast<double>(sizes[v]);
        total_hits += static_cast<double>(counts[v]);
    }
    if (total_hits == 0.0) throw UndefinedKld("no ground-state samples; valley KL-divergence is undefined");
    double kld = 0.0;
    for (std::size_t v = 0; v < sizes.size(); ++v) {
        const double p = static_cast<double>(sizes[v]) / total_size;
        if (counts[v] == 0) return kInfinity;
        const double q = static_cast<double>(counts[v]) / total_hits;
        kld += p * std::log(p / q);
    }
    return std::max(0.0, kld);
}

inline double kld_valleys(const SampleSet& samples, const FclInstance& instance, const ValleyDecomposition& valleys) {
    const auto hits = valley_hits(project_samples(samples, instance), valleys);
    std::vector<std::uint64_t> counts(valleys.num_valleys(), 0);
    for (const auto& h : hits)
        if (h) ++counts[static_cast<std::size_t>(*h)];
    const auto sizes = valleys.sizes();
    return kld_from_counts(sizes, counts);
}

// ---------------------------------------------------------------------------
// L1 error of spin-spin marginals on logical couplers

struct L1Point {
    std::size_t samples = 0;
    double anneal_time = 0.0;
    double error = 0.0;
};

// Uniform average of s_i s_j over the ground states, one entry per logical coupler.
inline std::vector<double> exact_correlations(const LogicalGraph& graph, const std::vector<SpinState>& ground_states) {
    require(!ground_states.empty(), "no ground states");
    std::vector<double> out(graph.couplers.size(), 0.0);
    for (std::size_t e = 0; e < graph.couplers.size(); ++e) {
        auto [i, j] = graph.couplers[e];
        long sum = 0;
        for (const auto& s : ground_states) sum += s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
        out[e] = static_cast<double>(sum) / static_cast<double>(ground_states.size());
    }
    return out;
}

// 1, 2, 5, 10, 20, 50, ... up to and including n.
inline std::vector<std::size_t> log_checkpoints(std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t decade = 1; decade <= n; decade *= 10) {
        for (std::size_t m : {1u, 2u, 5u}) {
            if (decade * m <= n) out.push_back(decade * m);
        }
        if (decade > n / 10) break;
    }
    if (out.empty() || out.back() != n) out.push_back(n);
    return out;
}

// Mean |empirical - exact| over logical couplers, with empirical marginals
// from the majority projections of every sample so far.
inline std::vector<L1Point> l1_error_curve(const std::vector<SpinState>& logical_samples, std::span<const double> times,
                                           const LogicalGraph& graph, const std::vector<SpinState>& ground_states) {
    require(logical_samples.size() == times.size(), "sample and time series differ in length");
    require(!graph.couplers.empty(), "logical graph has no couplers");
    const auto exact = exact_correlations(graph, ground_states);
    std::vector<long> sums(graph.couplers.size(), 0);
    std::vector<L1Point> curve;
    if (logical_samples.empty()) return curve;
    const auto checkpoints = log_checkpoints(logical_samples.size());
    std::size_t next = 0;
    for (std::size_t k = 0; k < logical_samples.size(); ++k) {
        const auto& s = logical_samples[k];
        for (std::size_t e = 0; e < graph.couplers.size(); ++e) {
            auto [i, j] = graph.couplers[e];
            sums[e] += s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
        }
        if (k + 1 == checkpoints[next]) {
            double err = 0.0;
            for (std::size_t e = 0; e < sums.size(); ++e)
                err += std::abs(static_cast<double>(sums[e]) / static_cast<double>(k + 1) - exact[e]);
            curve.push_back({k + 1, times[k], err / static_cast<double>(sums.size())});
            ++next;
        }
    }
    return curve;
}

inline std::vector<L1Point> l1_marginal_error(const SampleSet& samples, const FclInstance& instance,
                                              const GroundStateSet& ground_states) {
    require(!ground_states.cap_exceeded, "L1 marginal error needs the complete ground-state set");
    auto projected = project_samples(samples, instance);
    std::vector<SpinState> logical;
    logical.reserve(projected.size());
    for (auto& p : projected) logical.push_back(std::move(p.logical));
    std::vector<double> times;
    times.reserve(samples.size());
    for (const auto& r : samples.records) times.push_back(r.anneal_time);
    return l1_error_curve(logical, times, instance.logical_graph, ground_states.states);
}

} // namespace fcl
