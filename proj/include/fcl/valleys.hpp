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
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fcl/error.hpp"
#include "fcl/exact.hpp"
#include "fcl/generator.hpp"
#include "fcl/ising.hpp"

namespace fcl {

// Spin state as a bitset, bit set for spin -1.
struct PackedState {
    std::vector<std::uint64_t> words;

    PackedState() = default;
    explicit PackedState(std::span<const Spin> state) : words((state.size() + 63) / 64, 0) {
        for (std::size_t i = 0; i < state.size(); ++i)
            if (state[i] < 0) words[i / 64] |= std::uint64_t{1} << (i % 64);
    }

    void flip(std::size_t i) { words[i / 64] ^= std::uint64_t{1} << (i % 64); }

    PackedState negated(std::size_t n) const {
        PackedState out = *this;
        for (std::size_t w = 0; w < out.words.size(); ++w) {
            const std::size_t bits = std::min<std::size_t>(64, n - 64 * w);
            const std::uint64_t mask = bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
            out.words[w] ^= mask;
        }
        return out;
    }

    friend bool operator==(const PackedState&, const PackedState&) = default;
};

struct PackedStateHash {
    std::size_t operator()(const PackedState& s) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t w : s.words) h = mix_seed(h ^ w);
        return static_cast<std::size_t>(h);
    }
};

// Hamming distance between two packed states of equal length.
inline int hamming(const PackedState& a, const PackedState& b) {
    int d = 0;
    for (std::size_t w = 0; w < a.words.size(); ++w) d += std::popcount(a.words[w] ^ b.words[w]);
    return d;
}

// Ground states grouped into single-flip connected components, with each
// component merged with its antipodal image. Valley ids follow the order of
// each valley's first state in the input enumeration.
class ValleyDecomposition {
  public:
    ValleyDecomposition() = default;

    explicit ValleyDecomposition(const GroundStateSet& ground_states) {
        require(!ground_states.cap_exceeded, "cannot decompose a capped ground-state set");
        states_ = ground_states.states;
        const std::size_t count = states_.size();
        num_spins_ = count ? states_.front().size() : 0;
        std::vector<PackedState> packed;
        packed.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            packed.emplace_back(states_[i]);
            index_.emplace(packed.back(), static_cast<int>(i));
        }
        std::vector<int> parent(count);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) {
                parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
                x = parent[static_cast<std::size_t>(x)];
            }
            return x;
        };
        auto unite = [&](int a, int b) {
            a = find(a);
            b = find(b);
            if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        };
        for (std::size_t i = 0; i < count; ++i) {
            PackedState probe = packed[i];
            for (std::size_t v = 0; v < num_spins_; ++v) {
                probe.flip(v);
                if (auto it = index_.find(probe); it != index_.end()) unite(static_cast<int>(i), it->second);
                probe.flip(v);
            }
            if (auto it = index_.find(packed[i].negated(num_spins_)); it != index_.end())
                unite(static_cast<int>(i), it->second);
        }
        valley_of_state_.assign(count, -1);
        std::vector<int> id_of_root(count, -1);
        for (std::size_t i = 0; i < count; ++i) {
            const int root = find(static_cast<int>(i));
            int& id = id_of_root[static_cast<std::size_t>(root)];
            if (id < 0) {
                id = static_cast<int>(members_.size());
                members_.emplace_back();
            }
            valley_of_state_[i] = id;
            members_[static_cast<std::size_t>(id)].push_back(static_cast<int>(i));
        }
    }

    std::size_t num_valleys() const { return members_.size(); }
    std::size_t total_ground_states() const { return states_.size(); }
    std::size_t num_spins() const { return num_spins_; }
    std::size_t size(std::size_t valley) const { return members_[valley].size(); }
    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> out;
        for (const auto& m : members_) out.push_back(m.size());
        return out;
    }
    const std::vector<int>& members(std::size_t valley) const { return members_[valley]; }
    const std::vector<SpinState>& states() const { return states_; }
    int valley_of_state(std::size_t index) const { return valley_of_state_[index]; }

    // Valley containing the state or its negation; nullopt for non-ground states.
    std::optional<int> assign(std::span<const Spin> state) const {
        if (state.size() != num_spins_) return std::nullopt;
        const PackedState key(state);
        if (auto it = index_.find(key); it != index_.end()) return valley_of_state_[static_cast<std::size_t>(it->second)];
        if (auto it = index_.find(key.negated(num_spins_)); it != index_.end())
            return valley_of_state_[static_cast<std::size_t>(it->second)];
        return std::nullopt;
    }

  private:
    std::vector<SpinState> states_;
    std::size_t num_spins_ = 0;
    std::unordered_map<PackedState, int, PackedStateHash> index_;
    std::vector<int> valley_of_state_;
    std::vector<std::vector<int>> members_;
};

inline ValleyDecomposition decompose_valleys(const GroundStateSet& ground_states) {
    return ValleyDecomposition(ground_states);
}

inline std::optional<int> assign_valley(const ValleyDecomposition& d, std::span<const Spin> state) {
    return d.assign(state);
}

struct OverlapStats {
    int num_spins = 0;
    // histogram[k] = number of ordered pairs (with self-pairs) with |a.b| = k,
    // i.e. |q| = k / num_spins.
    std::vector<std::uint64_t> histogram;
    double mean_overlap = 0.0;
};

// Exact P(|q|) over all ordered pairs of ground states, self-pairs included.
inline OverlapStats overlap_stats(const std::vector<SpinState>& states) {
    require(!states.empty(), "overlap statistics need at least one state");
    OverlapStats out;
    out.num_spins = static_cast<int>(states.front().size());
    require(out.num_spins > 0, "overlap statistics need at least one spin");
    out.histogram.assign(static_cast<std::size_t>(out.num_spins) + 1, 0);
    std::vector<PackedState> packed;
    packed.reserve(states.size());
    for (const auto& s : states) {
        require(s.size() == static_cast<std::size_t>(out.num_spins), "states have differing lengths");
        packed.emplace_back(s);
    }
    long double total = 0;
    for (std::size_t a = 0; a < packed.size(); ++a) {
        ++out.histogram[static_cast<std::size_t>(out.num_spins)];
        total += out.num_spins;
        for (std::size_t b = a + 1; b < packed.size(); ++b) {
            const int dot = out.num_spins - 2 * hamming(packed[a], packed[b]);
            const auto k = static_cast<std::size_t>(dot < 0 ? -dot : dot);
            out.histogram[k] += 2;
            total += 2.0L * static_cast<long double>(k);
        }
    }
    const long double pairs = static_cast<long double>(packed.size()) * static_cast<long double>(packed.size());
    out.mean_overlap = static_cast<double>(total / (pairs * out.num_spins));
    return out;
}

inline OverlapStats overlap_stats(const GroundStateSet& ground_states) {
    require(!ground_states.cap_exceeded, "cannot compute overlaps of a capped ground-state set");
    return overlap_stats(ground_states.states);
}

struct MiningCriteria {
    std::uint64_t ground_state_cap = kDefaultGroundStateCap;
    std::size_t min_valleys = 4;
    double max_mean_overlap = 0.7;  // reject at or above
};

struct MiningResult {
    bool accept = false;
    std::vector<std::string> reasons;
    GroundStateSet ground_states;
    std::optional<ValleyDecomposition> valleys;
    std::optional<OverlapStats> overlap;
};

// Keeps instances with few ground states, several valleys and low overlap.
inline MiningResult mine_filter(const FclInstance& instance, const MiningCriteria& criteria = {}) {
    MiningResult r;
    r.ground_states = enumerate_ground_states(instance.logical, instance.logical_graph, criteria.ground_state_cap);
    if (r.ground_states.cap_exceeded) {
        r.reasons.push_back("cap");
        return r;
    }
    r.valleys.emplace(r.ground_states);
    r.overlap = overlap_stats(r.ground_states);
    if (r.valleys->num_valleys() < criteria.min_valleys) r.reasons.push_back("too-few-valleys");
    if (r.overlap->mean_overlap >= criteria.max_mean_overlap) r.reasons.push_back("high-overlap");
    r.accept = r.reasons.empty();
    return r;
}

} // namespace fcl
