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
#include <string>
#include <utility>
#include <vector>

#include "fcl/error.hpp"

namespace fcl {

// Piecewise-linear function on [0, 1] given by (x, y) knots with increasing x.
// Constant extrapolation outside the knot range.
struct PiecewiseLinear {
    std::vector<std::pair<double, double>> knots;

    static PiecewiseLinear linear(double from, double to) { return {{{0.0, from}, {1.0, to}}}; }
    static PiecewiseLinear constant(double value) { return {{{0.0, value}, {1.0, value}}}; }

    double operator()(double x) const {
        require(!knots.empty(), "piecewise-linear function has no knots");
        if (x <= knots.front().first) return knots.front().second;
        if (x >= knots.back().first) return knots.back().second;
        auto hi = std::upper_bound(knots.begin(), knots.end(), x,
                                   [](double v, const std::pair<double, double>& k) { return v < k.first; });
        auto lo = hi - 1;
        const double t = (x - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    }

    friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;
};

enum class ScheduleKind { linear_beta, transverse_field };

inline const char* to_string(ScheduleKind k) {
    return k == ScheduleKind::linear_beta ? "linear-beta" : "transverse-field";
}

// Sweep k of K is evaluated at lambda = k / (K - 1); a single sweep sits at
// lambda = 1.
struct AnnealSchedule {
    ScheduleKind kind = ScheduleKind::linear_beta;
    double beta_start = 0.01;
    double beta_end = 3.0;
    PiecewiseLinear transverse = PiecewiseLinear::linear(1.0, 0.0);    // A(lambda)
    PiecewiseLinear longitudinal = PiecewiseLinear::linear(0.0, 1.0);  // B(lambda)
    int sweeps = 1;

    static AnnealSchedule linear_beta(double beta_start, double beta_end, int sweeps) {
        AnnealSchedule s;
        s.kind = ScheduleKind::linear_beta;
        s.beta_start = beta_start;
        s.beta_end = beta_end;
        s.sweeps = sweeps;
        return s;
    }

    static AnnealSchedule transverse_field(int sweeps, PiecewiseLinear a = PiecewiseLinear::linear(1.0, 0.0),
                                           PiecewiseLinear b = PiecewiseLinear::linear(0.0, 1.0)) {
        AnnealSchedule s;
        s.kind = ScheduleKind::transverse_field;
        s.transverse = std::move(a);
        s.longitudinal = std::move(b);
        s.sweeps = sweeps;
        return s;
    }

    void validate() const { require(sweeps >= 1, "schedule needs at least one sweep"); }

    double lambda(int sweep) const {
        return sweeps <= 1 ? 1.0 : static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
    }
    double beta(int sweep) const { return beta_start + (beta_end - beta_start) * lambda(sweep); }
    double a(int sweep) const { return transverse(lambda(sweep)); }
    double b(int sweep) const { return longitudinal(lambda(sweep)); }
};

} // namespace fcl
