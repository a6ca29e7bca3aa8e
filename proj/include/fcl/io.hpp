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
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcl/decorrelation.hpp"
#include "fcl/error.hpp"
#include "fcl/exact.hpp"
#include "fcl/generator.hpp"
#include "fcl/solvers/sample_set.hpp"
#include "fcl/topology.hpp"
#include "fcl/valleys.hpp"

namespace fcl {

using json = nlohmann::json;

inline constexpr int kInstanceFormatVersion = 1;

// Shortest %.*g form that survives a round trip; "inf" for infinities.
inline std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

// Spin states are written as strings over {+, -}.
inline std::string format_state(std::span<const Spin> s) {
    std::string out(s.size(), '+');
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < 0) out[i] = '-';
    return out;
}

inline SpinState parse_state(const std::string& text) {
    SpinState s(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '+') s[i] = 1;
        else if (text[i] == '-') s[i] = -1;
        else throw ParseError("spin string contains '" + std::string(1, text[i]) + "'");
    }
    return s;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidParameter("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidParameter("cannot write " + path);
    out << text;
    if (!out) throw InvalidParameter("write failed for " + path);
}

// Parses JSON text; syntax errors report the line and column.
inline json parse_json(const std::string& text, const std::string& source = "<input>") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n');
        const auto last_nl = text.rfind('\n', offset == 0 ? 0 : offset - 1);
        const auto column = last_nl == std::string::npos || offset == 0 ? offset + 1 : offset - last_nl;
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + e.what());
    }
}

namespace detail {

// Typed field access that reports the JSON pointer of the offending field.
class Field {
  public:
    Field(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

    Field operator[](const std::string& key) const {
        if (!node_.is_object()) fail("expected an object");
        auto it = node_.find(key);
        if (it == node_.end()) throw ParseError(path_ + "/" + key + ": missing field");
        return Field(*it, path_ + "/" + key);
    }
    Field operator[](std::size_t i) const { return Field(array().at(i), path_ + "/" + std::to_string(i)); }
    bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

    const json& array() const {
        if (!node_.is_array()) fail("expected an array");
        return node_;
    }
    std::size_t size() const { return array().size(); }

    std::int64_t integer() const {
        if (!node_.is_number_integer()) fail("expected an integer");
        if (node_.is_number_unsigned() && node_.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
            fail("integer out of range");
        return node_.get<std::int64_t>();
    }
    int small_integer() const {
        const auto v = integer();
        if (v < INT32_MIN || v > INT32_MAX) fail("integer out of range");
        return static_cast<int>(v);
    }
    std::uint64_t unsigned_integer() const {
        if (!node_.is_number_unsigned() && !(node_.is_number_integer() && node_.get<std::int64_t>() >= 0))
            fail("expected a nonnegative integer");
        return node_.get<std::uint64_t>();
    }
    double number() const {
        if (!node_.is_number()) fail("expected a number");
        return node_.get<double>();
    }
    std::string string() const {
        if (!node_.is_string()) fail("expected a string");
        return node_.get<std::string>();
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError((path_.empty() ? std::string("/") : path_) + ": " + what);
    }

  private:
    const json& node_;
    std::string path_;
};

} // namespace detail

// ---------------------------------------------------------------------------
// Instance files

inline json instance_to_json(const FclInstance& inst) {
    json doc;
    doc["format_version"] = kInstanceFormatVersion;
    doc["params"] = {{"alpha", inst.params.alpha},
                     {"rho", inst.params.rho},
                     {"ruggedness", inst.params.ruggedness},
                     {"size", inst.params.size}};
    doc["seed"] = inst.params.seed;
    doc["accepted_seed"] = inst.accepted_seed;

    // The working graph is stored as its defects relative to the full C_s.
    const ChimeraGraph full = build_chimera(inst.params.size);
    json missing_qubits = json::array();
    for (QubitId q : full.qubits())
        if (!inst.working_graph.has_qubit(q)) missing_qubits.push_back(q);
    json missing_couplers = json::array();
    for (const Coupler& c : full.couplers())
        if (inst.working_graph.has_qubit(c.a) && inst.working_graph.has_qubit(c.b) &&
            !inst.working_graph.has_coupler(c.a, c.b))
            missing_couplers.push_back({c.a, c.b});
    doc["working_graph"] = {{"size", inst.params.size},
                            {"missing_qubits", missing_qubits},
                            {"missing_couplers", missing_couplers}};

    json loops = json::array();
    for (const FrustratedLoop& l : inst.loops)
        loops.push_back({{"vertices", l.vertices},
                         {"frustrated_edge", {l.frustrated_edge.first, l.frustrated_edge.second}}});
    doc["loops"] = loops;

    json couplings = json::array();
    for (const Edge& e : inst.logical.edges()) couplings.push_back({e.u, e.v, e.coupling});
    doc["logical_couplings"] = couplings;
    doc["planted_state"] = format_state(inst.planted_state);
    doc["planted_energies"] = {{"logical", inst.planted_logical_energy},
                               {"native", inst.planted_native_energy},
                               {"native_scale", inst.params.ruggedness}};
    return doc;
}

inline FclInstance instance_from_json(const json& doc) {
    const detail::Field root(doc, "");
    const int version = root["format_version"].small_integer();
    if (version != kInstanceFormatVersion)
        throw VersionError("instance format_version " + std::to_string(version) + " is not supported (expected " +
                           std::to_string(kInstanceFormatVersion) + ")");

    FclParams params;
    const auto p = root["params"];
    params.alpha = p["alpha"].number();
    params.rho = p["rho"].small_integer();
    params.ruggedness = p["ruggedness"].small_integer();
    params.size = p["size"].small_integer();
    params.seed = root["seed"].unsigned_integer();
    const std::uint64_t accepted_seed = root["accepted_seed"].unsigned_integer();
    if (params.size < 1 || params.size > 64) p["size"].fail("size must lie in [1, 64]");

    const auto wg = root["working_graph"];
    if (wg["size"].small_integer() != params.size) wg["size"].fail("does not match params.size");
    std::vector<QubitId> missing_qubits;
    for (std::size_t i = 0; i < wg["missing_qubits"].size(); ++i)
        missing_qubits.push_back(wg["missing_qubits"][i].small_integer());
    std::vector<Coupler> missing_couplers;
    for (std::size_t i = 0; i < wg["missing_couplers"].size(); ++i) {
        const auto c = wg["missing_couplers"][i];
        if (c.size() != 2) c.fail("expected a qubit pair");
        missing_couplers.emplace_back(c[0].small_integer(), c[1].small_integer());
    }
    ChimeraGraph working = apply_yield(build_chimera(params.size), missing_qubits, missing_couplers);
    const LogicalGraph graph = extract_logical(working);

    std::vector<FrustratedLoop> loops;
    for (std::size_t i = 0; i < root["loops"].size(); ++i) {
        const auto l = root["loops"][i];
        FrustratedLoop loop;
        for (std::size_t k = 0; k < l["vertices"].size(); ++k) loop.vertices.push_back(l["vertices"][k].small_integer());
        const auto fe = l["frustrated_edge"];
        if (fe.size() != 2) fe.fail("expected a vertex pair");
        loop.frustrated_edge = {fe[0].small_integer(), fe[1].small_integer()};
        loops.push_back(std::move(loop));
    }

    const auto lc = root["logical_couplings"];
    std::vector<Edge> edges;
    std::int64_t max_abs = 0;
    for (std::size_t i = 0; i < lc.size(); ++i) {
        const auto e = lc[i];
        if (e.size() != 3) e.fail("expected [i, j, J]");
        Edge edge{e[0].small_integer(), e[1].small_integer(), e[2].integer()};
        if (edge.u < 0 || edge.v < 0 || edge.u >= static_cast<int>(graph.num_spins()) ||
            edge.v >= static_cast<int>(graph.num_spins()))
            e.fail("logical spin index out of range");
        const auto a = std::min(edge.u, edge.v), b = std::max(edge.u, edge.v);
        if (!std::binary_search(graph.couplers.begin(), graph.couplers.end(), std::pair(a, b)))
            e.fail("not a logical coupler of the working graph");
        max_abs = std::max<std::int64_t>(max_abs, std::llabs(edge.coupling));
        edges.push_back(edge);
    }
    if (params.ruggedness < max_abs)
        throw InvalidParameter("ruggedness R = " + std::to_string(params.ruggedness) +
                               " is below max |J_L| = " + std::to_string(max_abs));
    IsingProblem logical(static_cast<int>(graph.num_spins()), {}, std::move(edges));

    SpinState planted;
    try {
        planted = parse_state(root["planted_state"].string());
    } catch (const ParseError& e) {
        throw ParseError(std::string("/planted_state: ") + e.what());
    }
    if (planted.size() != graph.num_spins()) root["planted_state"].fail("length does not match the logical spin count");

    FclInstance inst = assemble_instance(params, accepted_seed, std::move(working), std::move(logical), std::move(loops),
                                         std::move(planted));
    const auto pe = root["planted_energies"];
    if (pe["logical"].integer() != inst.planted_logical_energy)
        pe["logical"].fail("does not match the energy implied by the loops");
    if (pe["native"].integer() != inst.planted_native_energy)
        pe["native"].fail("does not match the derived native energy");
    if (energy(inst.logical, inst.planted_state) != inst.planted_logical_energy)
        root["planted_state"].fail("planted state does not attain the planted energy");
    return inst;
}

inline void write_instance(const std::string& path, const FclInstance& inst) {
    write_text_file(path, instance_to_json(inst).dump(1) + "\n");
}

inline FclInstance read_instance(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return instance_from_json(parse_json(text, path));
    } catch (const ParseError& e) {
        if (std::string(e.what()).rfind(path, 0) == 0) throw;
        throw ParseError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Analysis documents

inline json to_json(const GroundStateSet& g, std::int64_t scale = 1) {
    json states = json::array();
    for (const auto& s : g.states) states.push_back(format_state(s));
    return {{"ground_energy", g.ground_energy},
            {"energy_scale", scale},
            {"count", g.count},
            {"cap_exceeded", g.cap_exceeded},
            {"states", states}};
}

inline json to_json(const ValleyDecomposition& d) {
    return {{"num_valleys", d.num_valleys()}, {"sizes", d.sizes()}};
}

inline json to_json(const OverlapStats& o) {
    return {{"num_spins", o.num_spins}, {"mean_overlap", o.mean_overlap}, {"histogram", o.histogram}};
}

inline json to_json(const TemperatureLadder& l) {
    return {{"betas", l.betas},
            {"exchange_rates", l.exchange_rates},
            {"iterations", l.iterations},
            {"in_band", l.in_band},
            {"warning", l.warning}};
}

inline json to_json(const AutocorrelationResult& a) {
    return {{"tau", a.tau},
            {"chain_taus", a.chain_taus},
            {"first_half_tau", a.first_half_tau},
            {"second_half_tau", a.second_half_tau},
            {"stationary", a.stationary}};
}

// One row per read: read, energy (scaled integer), energy in Ising units,
// cumulative anneal time, state.
inline void write_samples_csv(std::ostream& out, const SampleSet& samples, std::int64_t scale) {
    out << "read,energy_scaled,energy,anneal_time,state\n";
    for (std::size_t r = 0; r < samples.records.size(); ++r) {
        const auto& rec = samples.records[r];
        out << r << ',' << rec.energy << ',' << format_number(static_cast<double>(rec.energy) / static_cast<double>(scale))
            << ',' << format_number(rec.anneal_time) << ',' << format_state(rec.state) << '\n';
    }
}

} // namespace fcl
