#pragma once

// JSON forms of specs, constraint sets, LP solutions and reports.
// Rationals are strings ("p/q" or "p"), missing links are "inf", node ids are 1-based.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "repairopt/coder.hpp"
#include "repairopt/exacttandem.hpp"
#include "repairopt/flowgraph.hpp"
#include "repairopt/gain.hpp"
#include "repairopt/lpcore.hpp"
#include "repairopt/netmodel.hpp"

namespace repairopt::io {

using nlohmann::json;
// ordered_json keeps the key order of emitted documents stable and readable
using ojson = nlohmann::ordered_json;

inline Rational rational_from_json(const json& v, const std::string& what) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) return parse_rational(v.dump());
    throw ParseError(what + ": expected a rational");
}

inline LinkCost link_cost_from_json(const json& v) {
    if (v.is_string()) return parse_link_cost(v.get<std::string>());
    if (v.is_null()) return std::nullopt;
    return rational_from_json(v, "cost entry");
}

inline std::size_t node_from_json(const json& v, std::size_t n, const std::string& what) {
    if (!v.is_number_integer()) throw ParseError(what + ": expected a node id");
    const long long id = v.get<long long>();
    if (id < 1 || static_cast<std::size_t>(id) > n) throw ParseError(what + ": node id out of range");
    return static_cast<std::size_t>(id - 1);
}

inline std::size_t count_from_json(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    const json& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ParseError(std::string("field '") + key + "' must be a nonnegative integer");
    return v.get<std::size_t>();
}

/// Parses and validates a network-spec document.
inline NetworkSpec spec_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("network spec must be a JSON object");
    NetworkSpec spec;
    spec.n = count_from_json(doc, "n");
    spec.k = count_from_json(doc, "k");
    if (spec.n < 2) throw ConfigError("need at least 2 nodes");
    if (!doc.contains("alpha") || !doc.contains("M")) throw ParseError("missing field 'alpha' or 'M'");
    spec.alpha = rational_from_json(doc.at("alpha"), "alpha");
    spec.file_size = rational_from_json(doc.at("M"), "M");
    if (!doc.contains("failed")) throw ParseError("missing field 'failed'");
    spec.failed = node_from_json(doc.at("failed"), spec.n, "failed");

    if (doc.contains("helpers")) {
        for (const auto& h : doc.at("helpers")) spec.helpers.push_back(node_from_json(h, spec.n, "helpers"));
    } else {
        spec.helpers = spec.survivors();
    }
    spec.d = doc.contains("d") ? count_from_json(doc, "d") : spec.helpers.size();

    if (!doc.contains("cost") || !doc.at("cost").is_array()) throw ParseError("missing cost matrix");
    const json& rows = doc.at("cost");
    spec.cost = CostMatrix(spec.n);
    std::vector<std::size_t> row_nodes;
    if (rows.size() == spec.n) {
        for (std::size_t i = 0; i < spec.n; ++i) row_nodes.push_back(i);
    } else if (rows.size() == spec.helpers.size()) {
        row_nodes = spec.helpers;  // one row per helper, in helper order
    } else {
        throw ParseError("cost matrix needs n rows or one row per helper");
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_array() || rows[r].size() != spec.n) throw ParseError("each cost row needs n entries");
        for (std::size_t j = 0; j < spec.n; ++j) {
            LinkCost c = link_cost_from_json(rows[r][j]);
            if (row_nodes[r] == j) {
                if (!c || *c != 0) throw ConfigError("cost matrix diagonal must be 0");
                continue;
            }
            spec.cost.set(row_nodes[r], j, c);
        }
    }

    if (doc.contains("topology")) {
        const json& t = doc.at("topology");
        if (t.is_string()) {
            spec.topology.kind = parse_topology_kind(t.get<std::string>());
        } else if (t.is_object()) {
            spec.topology.kind = parse_topology_kind(t.value("kind", std::string("custom")));
            if (t.contains("center")) spec.topology.center = node_from_json(t.at("center"), spec.n, "topology.center");
            spec.topology.rows = t.value("rows", std::size_t{0});
            spec.topology.cols = t.value("cols", std::size_t{0});
        }
    }
    netmodel::validate(spec);
    return spec;
}

inline ojson spec_to_json(const NetworkSpec& spec) {
    ojson doc;
    doc["n"] = spec.n;
    doc["k"] = spec.k;
    doc["d"] = spec.d;
    doc["alpha"] = to_string(spec.alpha);
    doc["M"] = to_string(spec.file_size);
    doc["failed"] = spec.failed + 1;
    ojson helpers = ojson::array();
    for (auto h : spec.helpers) helpers.push_back(h + 1);
    doc["helpers"] = helpers;
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < spec.n; ++i) {
        ojson row = ojson::array();
        for (std::size_t j = 0; j < spec.n; ++j) row.push_back(to_string(spec.cost.at(i, j)));
        rows.push_back(row);
    }
    doc["cost"] = rows;
    ojson topo;
    topo["kind"] = to_string(spec.topology.kind);
    if (spec.topology.kind == TopologyKind::star) topo["center"] = spec.topology.center + 1;
    if (spec.topology.kind == TopologyKind::grid) {
        topo["rows"] = spec.topology.rows;
        topo["cols"] = spec.topology.cols;
    }
    doc["topology"] = topo;
    return doc;
}

inline ojson edge_to_json(const Edge& e) { return ojson::array({e.from + 1, e.to + 1}); }

inline ojson constraints_to_json(const ConstraintSet& cs) {
    ojson doc;
    ojson idx = ojson::array();
    for (const auto& e : cs.edge_index) idx.push_back(edge_to_json(e));
    doc["edge_index"] = idx;
    doc["L"] = cs.L;
    ojson b = ojson::array();
    for (const auto& v : cs.b) b.push_back(to_string(v));
    doc["b"] = b;
    return doc;
}

inline ConstraintSet constraints_from_json(const json& doc) {
    ConstraintSet cs;
    for (const auto& e : doc.at("edge_index")) {
        if (!e.is_array() || e.size() != 2) throw ParseError("edge_index entries must be [from, to]");
        const long long from = e[0].get<long long>();
        const long long to = e[1].get<long long>();
        if (from < 1 || to < 1) throw ParseError("edge ids are 1-based");
        cs.edge_index.push_back(Edge{static_cast<NodeId>(from - 1), static_cast<NodeId>(to - 1)});
    }
    for (const auto& row : doc.at("L")) {
        std::vector<int> r = row.get<std::vector<int>>();
        if (r.size() != cs.edge_index.size()) throw ParseError("constraint row width does not match edge_index");
        cs.L.push_back(std::move(r));
    }
    for (const auto& b : doc.at("b")) cs.b.push_back(rational_from_json(b, "b"));
    if (cs.b.size() != cs.L.size()) throw ParseError("L and b differ in length");
    return cs;
}

inline ojson solution_to_json(const ConstraintSet& cs, const LPSolution& sol) {
    ojson doc;
    doc["status"] = to_string(sol.status);
    if (sol.status == LPStatus::optimal) {
        doc["value"] = to_string(sol.value);
        ojson z = ojson::object();
        for (std::size_t e = 0; e < cs.cols(); ++e) z[edge_label(cs.edge_index[e])] = to_string(sol.z[e]);
        doc["z"] = z;
        ojson dual = ojson::array();
        for (const auto& y : sol.dual) dual.push_back(to_string(y));
        doc["dual"] = dual;
    }
    doc["pivots"] = sol.pivots;
    return doc;
}

inline ojson stage_to_json(const coder::StageRecord& r) {
    ojson doc;
    doc["stage"] = r.stage;
    doc["failed"] = r.failed + 1;
    doc["lp_value"] = to_string(r.lp_value);
    doc["achieved_cost"] = to_string(r.achieved_cost);
    doc["q"] = r.q;
    doc["n_nc"] = r.n_nc;
    doc["d0"] = r.d0.str();
    doc["scale"] = r.scale;
    doc["attempts"] = r.attempts;
    doc["rcp_ok"] = r.rcp_ok;
    doc["seed"] = r.seed;
    return doc;
}

inline ojson gain_to_json(const bounds::GainReport& g) {
    ojson doc;
    doc["sigma_non_opt"] = to_string(g.sigma_non_opt);
    doc["sigma_opt"] = to_string(g.sigma_opt);
    doc["g_c"] = to_string(g.g_c);
    doc["closed_form"] = g.closed_form ? ojson(to_string(*g.closed_form)) : ojson(nullptr);
    doc["matches_closed_form"] = g.matches_closed_form;
    doc["gain_published"] = g.gain_published ? ojson(to_string(*g.gain_published)) : ojson(nullptr);
    doc["lp_within_baseline"] = g.lp_within_baseline;
    return doc;
}

inline ojson exact_repair_to_json(const exacttandem::VandermondeCode& code, const exacttandem::ExactRepairResult& r) {
    ojson doc;
    doc["n"] = code.n;
    doc["k"] = code.k;
    doc["q"] = code.q;
    ojson points = ojson::array();
    for (auto p : code.points) points.push_back(p);
    doc["points"] = points;
    doc["failed"] = r.failed + 1;
    doc["k1"] = r.backward;
    doc["k2"] = r.forward;
    ojson helpers = ojson::array();
    for (auto h : r.helpers) helpers.push_back(h + 1);
    doc["helpers"] = helpers;
    doc["coefficients"] = r.coefficients;
    ojson hops = ojson::array();
    for (const auto& h : r.hops) {
        ojson hop;
        hop["from"] = h.from + 1;
        hop["to"] = h.to + 1;
        hop["symbols"] = h.symbols;
        hops.push_back(hop);
    }
    doc["hops"] = hops;
    doc["restored"] = r.restored;
    doc["original"] = r.original;
    doc["cost"] = r.cost;
    doc["exact"] = r.exact();
    return doc;
}

}  // namespace repairopt::io
