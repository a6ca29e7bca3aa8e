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
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <span>
#include <vector>

#include <fftw3.h>

#include "fcl/error.hpp"
#include "fcl/ising.hpp"
#include "fcl/random.hpp"
#include "fcl/solvers/kernel.hpp"
#include "fcl/solvers/sa.hpp"

namespace fcl {

inline constexpr double kLadderMaxBeta = 30.0;
inline constexpr int kDefaultReplicaCount = 32;

struct PtTrace {
    int sweeps = 0;
    // slot_series[r][t]: ladder position of replica r after sweep t
    std::vector<std::vector<std::uint16_t>> slot_series;
    // energy_series[i][t]: energy at ladder position i after sweep t (optional)
    std::vector<std::vector<double>> energy_series;
    std::vector<std::uint64_t> attempts;  // per adjacent pair
    std::vector<std::uint64_t> accepts;

    std::vector<double> exchange_rates() const {
        std::vector<double> out(attempts.size(), 0.0);
        for (std::size_t i = 0; i < attempts.size(); ++i)
            out[i] = attempts[i] ? static_cast<double>(accepts[i]) / static_cast<double>(attempts[i]) : 0.0;
        return out;
    }
};

// Replica-exchange Monte Carlo. Each sweep runs one Metropolis pass per
// replica at its inverse temperature (a replica at beta = 0 is replaced by a
// fresh uniform state instead), then proposes swaps of every adjacent pair
// with probability min(1, exp(dbeta * dE)).
class ParallelTempering {
  public:
    ParallelTempering(const IsingProblem& problem, std::vector<double> betas, Rng& rng)
        : table_(problem), betas_(std::move(betas)) {
        require(!betas_.empty(), "ladder needs at least one temperature");
        for (std::size_t i = 1; i < betas_.size(); ++i)
            require(betas_[i] >= betas_[i - 1], "ladder inverse temperatures must be nondecreasing");
        require(betas_.front() >= 0.0, "inverse temperatures must be nonnegative");
        const auto n = static_cast<std::size_t>(problem.num_vertices());
        for (std::size_t r = 0; r < betas_.size(); ++r) {
            chains_.emplace_back(table_, random_state(n, rng));
            energies_.push_back(table_.energy(chains_.back().state().data()));
        }
        replica_at_.resize(betas_.size());
        std::iota(replica_at_.begin(), replica_at_.end(), 0);
        slot_of_ = replica_at_;
    }

    std::size_t size() const { return betas_.size(); }
    const std::vector<double>& betas() const { return betas_; }
    const std::vector<int>& slot_of_replica() const { return slot_of_; }
    double energy_at_slot(std::size_t i) const { return energies_[static_cast<std::size_t>(replica_at_[i])]; }
    const SpinState& state_at_slot(std::size_t i) const { return chains_[static_cast<std::size_t>(replica_at_[i])].state(); }

    void sweep(Rng& rng, std::vector<std::uint64_t>& attempts, std::vector<std::uint64_t>& accepts) {
        // energies are tracked incrementally and recomputed now and then so
        // rounding cannot accumulate
        const bool resync = ++sweeps_ % kEnergyResyncInterval == 0;
        for (std::size_t i = 0; i < betas_.size(); ++i) {
            const auto r = static_cast<std::size_t>(replica_at_[i]);
            if (betas_[i] == 0.0) {
                randomize(chains_[r].state(), rng);
                energies_[r] = table_.energy(chains_[r].state().data());
            } else {
                energies_[r] += chains_[r].sweep(betas_[i], rng);
                if (resync) energies_[r] = table_.energy(chains_[r].state().data());
            }
        }
        for (std::size_t i = 0; i + 1 < betas_.size(); ++i) {
            const double log_ratio = (betas_[i + 1] - betas_[i]) * (energy_at_slot(i + 1) - energy_at_slot(i));
            ++attempts[i];
            if (log_ratio >= 0.0 || uniform01(rng) < std::exp(log_ratio)) {
                ++accepts[i];
                std::swap(replica_at_[i], replica_at_[i + 1]);
                slot_of_[static_cast<std::size_t>(replica_at_[i])] = static_cast<int>(i);
                slot_of_[static_cast<std::size_t>(replica_at_[i + 1])] = static_cast<int>(i + 1);
            }
        }
    }

  private:
    static constexpr std::uint64_t kEnergyResyncInterval = 1024;

    CouplingTable table_;
    std::uint64_t sweeps_ = 0;
    std::vector<double> betas_;
    std::vector<MetropolisChain> chains_;
    std::vector<double> energies_;
    std::vector<int> replica_at_;  // slot -> replica
    std::vector<int> slot_of_;     // replica -> slot
};

inline PtTrace run_pt(const IsingProblem& problem, const std::vector<double>& betas, int sweeps, Rng& rng,
                      bool record_energies = false) {
    require(sweeps >= 0, "sweep count must be nonnegative");
    ParallelTempering pt(problem, betas, rng);
    PtTrace trace;
    trace.sweeps = sweeps;
    trace.attempts.assign(betas.size() > 0 ? betas.size() - 1 : 0, 0);
    trace.accepts = trace.attempts;
    trace.slot_series.assign(betas.size(), std::vector<std::uint16_t>(static_cast<std::size_t>(sweeps)));
    if (record_energies) trace.energy_series.assign(betas.size(), std::vector<double>(static_cast<std::size_t>(sweeps)));
    for (int t = 0; t < sweeps; ++t) {
        pt.sweep(rng, trace.attempts, trace.accepts);
        for (std::size_t r = 0; r < betas.size(); ++r)
            trace.slot_series[r][static_cast<std::size_t>(t)] = static_cast<std::uint16_t>(pt.slot_of_replica()[r]);
        if (record_energies)
            for (std::size_t i = 0; i < betas.size(); ++i) trace.energy_series[i][static_cast<std::size_t>(t)] = pt.energy_at_slot(i);
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Ladder calibration

struct LadderOptions {
    double beta_max = kLadderMaxBeta;
    double target_rate = 0.40;
    double min_rate = 1.0 / 3.0;
    double max_rate = 0.5;
    int max_iterations = 20;
    int burst_sweeps = 2000;
    // Lets the refinement add or drop replicas so the equalized rate can reach
    // the target (replica_count is then only the starting size); off keeps
    // replica_count fixed.
    bool adapt_replica_count = true;
    int max_replicas = 128;
};

struct TemperatureLadder {
    std::vector<double> betas;
    std::vector<double> exchange_rates;
    int iterations = 0;
    bool in_band = false;  // every rate within [min_rate, max_rate]
    bool warning = true;   // calibration stopped without reaching the band
};

namespace detail {

inline double band_violation(const std::vector<double>& rates, const LadderOptions& o) {
    double worst = 0.0;
    for (double r : rates) worst = std::max({worst, o.min_rate - r, r - o.max_rate});
    return worst;
}

// Places `count` temperatures at equal steps of cumulative -ln(rate),
// interpolating beta linearly between the current ladder points.
inline std::vector<double> equalize(const std::vector<double>& betas, const std::vector<double>& rates, int count) {
    std::vector<double> cumulative{0.0};
    for (double r : rates) cumulative.push_back(cumulative.back() - std::log(std::clamp(r, 1e-4, 1.0)));
    const double total = cumulative.back();
    std::vector<double> out(static_cast<std::size_t>(count));
    out.front() = betas.front();
    out.back() = betas.back();
    for (int k = 1; k + 1 < count; ++k) {
        const double c = total * k / (count - 1);
        auto hi = std::upper_bound(cumulative.begin(), cumulative.end(), c);
        const auto j = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(hi - cumulative.begin(), 1,
                                                                            static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
        const double span = cumulative[j] - cumulative[j - 1];
        const double t = span > 0.0 ? (c - cumulative[j - 1]) / span : 0.0;
        out[static_cast<std::size_t>(k)] = betas[j - 1] + t * (betas[j] - betas[j - 1]);
    }
    // keep the ladder strictly increasing when a cost segment collapses
    for (std::size_t k = 1; k + 1 < out.size(); ++k) out[k] = std::max(out[k], out[k - 1] + 1e-9);
    return out;
}

} // namespace detail

// Initial ladder: beta = 0 followed by a geometric progression up to beta_max.
inline std::vector<double> geometric_ladder(int count, double beta_max, double beta_min = 0.05) {
    require(count >= 2, "ladder needs at least two temperatures");
    std::vector<double> betas{0.0};
    if (count == 2) {
        betas.push_back(beta_max);
        return betas;
    }
    const double ratio = std::pow(beta_max / beta_min, 1.0 / (count - 2));
    for (int i = 0; i < count - 1; ++i) betas.push_back(beta_min * std::pow(ratio, i));
    betas.back() = beta_max;
    return betas;
}

// Iteratively equalizes adjacent exchange rates between fixed endpoints
// beta = 0 and beta_max. Returns the best ladder seen; `warning` is set when
// no ladder reached the [min_rate, max_rate] band.
inline TemperatureLadder calibrate_ladder(const IsingProblem& problem, int replica_count, Rng& rng,
                                          const LadderOptions& options = {}) {
    require(replica_count >= 3, "ladder calibration needs at least 3 replicas");
    require(options.burst_sweeps > 0 && options.max_iterations > 0, "calibration budget must be positive");
    std::vector<double> betas = geometric_ladder(replica_count, options.beta_max);
    TemperatureLadder best;
    double best_violation = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= options.max_iterations; ++it) {
        const PtTrace trace = run_pt(problem, betas, options.burst_sweeps, rng);
        const auto rates = trace.exchange_rates();
        const double violation = detail::band_violation(rates, options);
        if (violation < best_violation) {
            best_violation = violation;
            best.betas = betas;
            best.exchange_rates = rates;
        }
        best.iterations = it;
        if (violation <= 0.0) break;
        const bool uninformative = std::all_of(rates.begin(), rates.end(), [](double r) { return r >= 1.0; });
        if (uninformative) break;
        int count = static_cast<int>(betas.size());
        if (options.adapt_replica_count) {
            double cost = 0.0;
            for (double r : rates) cost -= std::log(std::clamp(r, 1e-4, 1.0));
            count = 1 + static_cast<int>(std::lround(cost / -std::log(options.target_rate)));
            count = std::clamp(count, 3, options.max_replicas);
        }
        betas = detail::equalize(betas, rates, count);
    }
    best.in_band = best_violation <= 0.0;
    best.warning = !best.in_band;
    return best;
}

// ---------------------------------------------------------------------------
// Integrated autocorrelation time

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// Normalized autocorrelation rho(t), t = 0..n-1, via zero-padded FFT.
inline std::vector<double> autocorrelation(std::span<const double> x) {
    const std::size_t n = x.size();
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    std::size_t m = 1;
    while (m < 2 * n) m <<= 1;
    std::vector<double> buffer(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) buffer[i] = x[i] - mean;
    std::vector<std::complex<double>> spectrum(m / 2 + 1);
    fftw_plan forward, backward;
    {
        std::lock_guard lock(fftw_planner_mutex());
        forward = fftw_plan_dft_r2c_1d(static_cast<int>(m), buffer.data(),
                                       reinterpret_cast<fftw_complex*>(spectrum.data()), FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(static_cast<int>(m), reinterpret_cast<fftw_complex*>(spectrum.data()),
                                        buffer.data(), FFTW_ESTIMATE);
    }
    fftw_execute(forward);
    for (auto& c : spectrum) c = std::norm(c);
    fftw_execute(backward);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }
    std::vector<double> rho(n);
    const double c0 = buffer[0];
    if (!(c0 > 0.0)) throw DegenerateSeries("series has zero variance");
    for (std::size_t t = 0; t < n; ++t) rho[t] = buffer[t] / c0;
    return rho;
}

} // namespace detail

// tau = 1/2 + sum_{t>=1} rho(t), truncated by the initial monotone sequence
// rule on pair sums Gamma_k = rho(2k) + rho(2k+1).
inline double integrated_autocorrelation(std::span<const double> series) {
    require(series.size() >= 2, "autocorrelation needs at least two points");
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    if (*lo == *hi) throw DegenerateSeries("series is constant");
    const auto rho = detail::autocorrelation(series);
    double sum = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; 2 * k + 1 < rho.size(); ++k) {
        double gamma = rho[2 * k] + rho[2 * k + 1];
        if (gamma <= 0.0) break;
        gamma = std::min(gamma, previous);
        sum += gamma;
        previous = gamma;
    }
    return sum - 0.5;
}

struct AutocorrelationResult {
    double tau = 0.0;                 // mean over chains, sweeps
    std::vector<double> chain_taus;
    double first_half_tau = 0.0;
    double second_half_tau = 0.0;
    bool stationary = false;          // halves agree within 20%
};

inline constexpr double kBurnInFraction = 0.1;

// A chain that never changes slot inside the window has not decorrelated
// within the run; its tau (and hence the mean) is infinite.
inline double mean_chain_tau(const PtTrace& trace, std::size_t begin, std::size_t end, std::vector<double>* per_chain) {
    double total = 0.0;
    std::vector<double> values(end - begin);
    for (const auto& chain : trace.slot_series) {
        for (std::size_t t = begin; t < end; ++t) values[t - begin] = chain[t];
        double tau = std::numeric_limits<double>::infinity();
        try {
            tau = integrated_autocorrelation(values);
        } catch (const DegenerateSeries&) {
        }
        if (per_chain) per_chain->push_back(tau);
        total += tau;
    }
    return total / static_cast<double>(trace.slot_series.size());
}

// Discards the first 10% as burn-in and averages the temperature-index tau
// over all replica chains.
inline AutocorrelationResult autocorrelation_time(const PtTrace& trace, std::size_t min_length = 1000) {
    require(!trace.slot_series.empty(), "trace has no chains");
    const auto length = static_cast<std::size_t>(trace.sweeps);
    require(length >= min_length, "trace shorter than the minimum length");
    const auto begin = static_cast<std::size_t>(std::ceil(kBurnInFraction * static_cast<double>(length)));
    AutocorrelationResult r;
    r.tau = mean_chain_tau(trace, begin, length, &r.chain_taus);
    const std::size_t mid = begin + (length - begin) / 2;
    r.first_half_tau = mean_chain_tau(trace, begin, mid, nullptr);
    r.second_half_tau = mean_chain_tau(trace, mid, length, nullptr);
    const double scale = std::max(r.first_half_tau, r.second_half_tau);
    r.stationary = std::isfinite(scale) && scale > 0.0 && std::abs(r.first_half_tau - r.second_half_tau) <= 0.2 * scale;
    return r;
}

// Per-instance measurement: calibrate a ladder, then a long PT run from
// which the temperature-index autocorrelation time is taken.
struct DecorrelationOptions {
    int replicas = kDefaultReplicaCount;
    int sweeps = 600000;
    LadderOptions ladder;
};

struct DecorrelationResult {
    TemperatureLadder ladder;
    AutocorrelationResult autocorrelation;
};

inline DecorrelationResult measure_decorrelation(const IsingProblem& problem, const DecorrelationOptions& options,
                                                 std::uint64_t seed) {
    Rng calibration_rng = make_rng(seed, 0);
    DecorrelationResult r;
    r.ladder = calibrate_ladder(problem, options.replicas, calibration_rng, options.ladder);
    Rng run_rng = make_rng(seed, 1);
    const PtTrace trace = run_pt(problem, r.ladder.betas, options.sweeps, run_rng);
    r.autocorrelation = autocorrelation_time(trace, std::min<std::size_t>(1000, static_cast<std::size_t>(options.sweeps)));
    return r;
}

} // namespace fcl
