#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bunkbed/errors.hpp"
#include "bunkbed/instance.hpp"
#include "bunkbed/monte_carlo.hpp"
#include "bunkbed/path_identity.hpp"
#include "bunkbed/rational.hpp"
#include "bunkbed/reduction.hpp"
#include "bunkbed/reliability.hpp"
#include "bunkbed/sweep.hpp"

namespace bunkbed {

using Json = nlohmann::json;

namespace detail {

inline const Json& require_field(const Json& j, const char* key, const char* context) {
    auto it = j.find(key);
    if (it == j.end())
        throw Error(errc::invalid_parameters,
                    std::string(context) + " is missing field '" + key + "'");
    return *it;
}

inline int as_int(const Json& j, const char* what) {
    if (!j.is_number_integer())
        throw Error(errc::invalid_parameters, std::string(what) + " must be an integer");
    return j.get<int>();
}

inline std::uint64_t as_u64(const Json& j, const char* what) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        throw Error(errc::invalid_parameters, std::string(what) + " must be an integer");
    return j.get<std::uint64_t>();
}

inline std::vector<int> as_label_list(const Json& j, const char* what) {
    if (!j.is_array())
        throw Error(errc::invalid_parameters, std::string(what) + " must be an array");
    std::vector<int> labels;
    for (const Json& x : j) labels.push_back(as_int(x, what));
    return labels;
}

// JSON number carrying ~12 significant digits.
inline Json number(double x) { return Json::parse(format_double(x)); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Instance files: {"n": int, "edges": [[a,b],...], "H": [...], "u":, "v":}
// ---------------------------------------------------------------------------

inline Instance instance_from_json(const Json& j) {
    if (!j.is_object()) throw Error(errc::invalid_parameters, "instance must be a JSON object");
    const int n = detail::as_int(detail::require_field(j, "n", "instance"), "n");
    const Json& edges_json = detail::require_field(j, "edges", "instance");
    if (!edges_json.is_array())
        throw Error(errc::invalid_parameters, "instance edges must be an array");
    std::vector<std::pair<int, int>> edges;
    for (const Json& e : edges_json) {
        if (!e.is_array() || e.size() != 2)
            throw Error(errc::invalid_parameters, "each edge must be a pair [a,b]");
        edges.push_back({detail::as_int(e[0], "edge endpoint"), detail::as_int(e[1], "edge endpoint")});
    }
    Instance inst;
    inst.graph = Graph::validate(n, edges);
    if (auto it = j.find("H"); it != j.end() && !it->is_null()) {
        TransversalSet h(detail::as_label_list(*it, "H"));
        for (int w : h.members()) inst.graph.require_label(w);
        inst.h = std::move(h);
    }
    if (auto it = j.find("u"); it != j.end() && !it->is_null())
        inst.u = detail::as_int(*it, "u");
    if (auto it = j.find("v"); it != j.end() && !it->is_null())
        inst.v = detail::as_int(*it, "v");
    return inst;
}

inline Json instance_to_json(const Instance& inst) {
    Json j;
    j["n"] = inst.graph.vertex_count();
    Json edges = Json::array();
    for (const Edge& e : inst.graph.edges()) edges.push_back({e.a, e.b});
    j["edges"] = std::move(edges);
    if (inst.h) j["H"] = inst.h->members();
    if (inst.u) j["u"] = *inst.u;
    if (inst.v) j["v"] = *inst.v;
    return j;
}

// ---------------------------------------------------------------------------
// Polynomials: {"M": int, "counts": ["...decimal...", ...]}
// ---------------------------------------------------------------------------

inline Json polynomial_to_json(const ReliabilityPolynomial& poly) {
    Json j;
    j["M"] = poly.M;
    Json counts = Json::array();
    for (const BigInt& c : poly.counts) counts.push_back(c.str());
    j["counts"] = std::move(counts);
    return j;
}

inline Json polynomial_to_json(const SignedReliabilityPolynomial& poly) {
    Json j;
    j["M"] = poly.M;
    Json counts = Json::array();
    for (const BigInt& c : poly.counts) counts.push_back(c.str());
    j["counts"] = std::move(counts);
    return j;
}

inline ReliabilityPolynomial polynomial_from_json(const Json& j) {
    ReliabilityPolynomial poly;
    poly.M = detail::as_int(detail::require_field(j, "M", "polynomial"), "M");
    const Json& counts = detail::require_field(j, "counts", "polynomial");
    if (!counts.is_array() || static_cast<int>(counts.size()) != poly.M + 1)
        throw Error(errc::invalid_parameters, "polynomial counts must hold M+1 entries");
    for (const Json& c : counts) {
        if (!c.is_string())
            throw Error(errc::invalid_parameters, "polynomial counts are decimal strings");
        poly.counts.emplace_back(c.get<std::string>());
    }
    return poly;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json grid_report_to_json(const GridReport& report) {
    Json j;
    j["pass"] = report.pass;
    Json points = Json::array();
    for (const GridEvaluation& pt : report.points)
        points.push_back({{"p", to_string(pt.p)}, {"value", to_string(pt.value)}});
    j["points"] = std::move(points);
    j["min_value"] = to_string(report.min_value);
    j["min_p"] = to_string(report.min_p);
    return j;
}

inline Json factorization_report_to_json(const PathFactorizationReport& report) {
    Json j;
    j["n"] = report.n;
    j["m"] = report.m;
    j["links"] = {{"same_tail", report.same_tail_pass},
                  {"crossing", report.crossing_pass},
                  {"cross_tail", report.cross_tail_pass}};
    j["pass"] = report.pass();
    j["polynomials"] = {{"endpoint_same", polynomial_to_json(report.endpoint_same)},
                        {"max_same", polynomial_to_json(report.max_same)},
                        {"max_cross", polynomial_to_json(report.max_cross)},
                        {"endpoint_cross", polynomial_to_json(report.endpoint_cross)}};
    return j;
}

inline Json equality_report_to_json(const PathEqualityReport& report) {
    Json j;
    j["n"] = report.n;
    j["pass"] = report.pass();
    j["same"] = polynomial_to_json(report.same);
    j["cross"] = polynomial_to_json(report.cross);
    j["difference"] = polynomial_to_json(report.diff);
    return j;
}

inline Json mc_estimate_to_json(const McEstimate& est) {
    Json j;
    j["samples"] = est.samples;
    j["p"] = detail::number(est.p);
    j["confidence"] = detail::number(est.confidence);
    j["seed"] = est.seed;
    j["mean_same"] = detail::number(est.mean_same);
    j["mean_cross"] = detail::number(est.mean_cross);
    j["mean_diff"] = detail::number(est.mean_diff);
    j["ci_same"] = detail::number(est.ci_same);
    j["ci_cross"] = detail::number(est.ci_cross);
    j["ci_diff"] = detail::number(est.ci_diff);
    j["count_same"] = est.count_same;
    j["count_cross"] = est.count_cross;
    j["count_both"] = est.count_both;
    return j;
}

inline Json tower_report_to_json(const TowerReport& report) {
    Json j;
    j["pass"] = report.pass();
    j["same_pass"] = report.same_pass;
    j["cross_pass"] = report.cross_pass;
    j["total_same"] = polynomial_to_json(report.total_same);
    j["total_cross"] = polynomial_to_json(report.total_cross);
    j["composed_same"] = polynomial_to_json(report.composed_same);
    j["composed_cross"] = polynomial_to_json(report.composed_cross);
    return j;
}

inline Json reduction_certificate_to_json(const ReductionCertificate& cert) {
    Json j;
    j["ell"] = cert.ell;
    j["outside_edges"] = cert.outside_edges;
    j["outside_configurations"] = cert.outside_configurations;
    j["equivalence_pairs"] = cert.equivalence_pairs;
    j["containment"] = cert.containment_pass;
    j["equivalence"] = cert.equivalence_pass;
    j["conditional"] = cert.conditional_pass;
    j["tower"] = cert.tower_pass;
    j["pass"] = cert.pass();
    return j;
}

// ---------------------------------------------------------------------------
// Sweep specs and reports
// ---------------------------------------------------------------------------

inline SweepSpec sweep_spec_from_json(const Json& j) {
    if (!j.is_object()) throw Error(errc::invalid_parameters, "sweep spec must be a JSON object");
    SweepSpec spec;

    const Json& family = detail::require_field(j, "family", "sweep spec");
    const std::string family_type =
        detail::require_field(family, "type", "family").get<std::string>();
    if (family_type == "all-trees") {
        spec.family = SweepSpec::Family::AllTrees;
        spec.n = detail::as_int(detail::require_field(family, "n", "family"), "n");
    } else if (family_type == "random-forests") {
        spec.family = SweepSpec::Family::RandomForests;
        spec.n = detail::as_int(detail::require_field(family, "n", "family"), "n");
        spec.components =
            detail::as_int(detail::require_field(family, "components", "family"), "components");
        spec.count = detail::as_int(detail::require_field(family, "count", "family"), "count");
        spec.family_seed = detail::as_u64(detail::require_field(family, "seed", "family"), "seed");
    } else if (family_type == "instances") {
        spec.family = SweepSpec::Family::Instances;
        const Json& list = detail::require_field(family, "instances", "family");
        if (!list.is_array())
            throw Error(errc::invalid_parameters, "family instances must be an array");
        for (const Json& inst : list) spec.instances.push_back(instance_from_json(inst));
        spec.transversals = SweepSpec::TransversalPolicy::FromInstance;
        spec.terminals = SweepSpec::TerminalPolicy::FromInstance;
    } else {
        throw Error(errc::invalid_parameters, "unknown family type '" + family_type + "'");
    }

    if (auto it = j.find("transversals"); it != j.end()) {
        const std::string type =
            detail::require_field(*it, "type", "transversals").get<std::string>();
        if (type == "all") {
            spec.transversals = SweepSpec::TransversalPolicy::All;
        } else if (type == "random") {
            spec.transversals = SweepSpec::TransversalPolicy::Random;
            spec.transversal_count =
                detail::as_int(detail::require_field(*it, "count", "transversals"), "count");
            spec.transversal_seed =
                detail::as_u64(detail::require_field(*it, "seed", "transversals"), "seed");
        } else if (type == "explicit") {
            spec.transversals = SweepSpec::TransversalPolicy::Explicit;
            const Json& sets = detail::require_field(*it, "sets", "transversals");
            if (!sets.is_array())
                throw Error(errc::invalid_parameters, "transversal sets must be an array");
            for (const Json& s : sets)
                spec.explicit_transversals.emplace_back(detail::as_label_list(s, "transversal set"));
        } else if (type == "instance") {
            spec.transversals = SweepSpec::TransversalPolicy::FromInstance;
        } else {
            throw Error(errc::invalid_parameters, "unknown transversal policy '" + type + "'");
        }
    }

    if (auto it = j.find("terminals"); it != j.end()) {
        const std::string type = detail::require_field(*it, "type", "terminals").get<std::string>();
        if (type == "all-pairs") {
            spec.terminals = SweepSpec::TerminalPolicy::AllPairs;
        } else if (type == "explicit") {
            spec.terminals = SweepSpec::TerminalPolicy::Explicit;
            const Json& pairs = detail::require_field(*it, "pairs", "terminals");
            if (!pairs.is_array())
                throw Error(errc::invalid_parameters, "terminal pairs must be an array");
            for (const Json& pr : pairs) {
                if (!pr.is_array() || pr.size() != 2)
                    throw Error(errc::invalid_parameters, "each terminal pair is [u,v]");
                spec.explicit_terminals.push_back(
                    {detail::as_int(pr[0], "u"), detail::as_int(pr[1], "v")});
            }
        } else if (type == "instance") {
            spec.terminals = SweepSpec::TerminalPolicy::FromInstance;
        } else {
            throw Error(errc::invalid_parameters, "unknown terminal policy '" + type + "'");
        }
    }

    const Json& grid = detail::require_field(j, "p_grid", "sweep spec");
    if (!grid.is_array()) throw Error(errc::invalid_parameters, "p_grid must be an array");
    for (const Json& p : grid) {
        if (!p.is_string())
            throw Error(errc::invalid_parameters, "p_grid entries are rational strings");
        spec.p_grid.push_back(parse_rational(p.get<std::string>()));
    }

    if (auto it = j.find("mode"); it != j.end()) {
        const std::string mode = it->get<std::string>();
        if (mode == "exact") spec.mode = SweepSpec::Mode::Exact;
        else if (mode == "mc") spec.mode = SweepSpec::Mode::Mc;
        else if (mode == "both") spec.mode = SweepSpec::Mode::Both;
        else throw Error(errc::invalid_parameters, "unknown mode '" + mode + "'");
    }
    if (auto it = j.find("certify_reduction"); it != j.end())
        spec.certify_reduction = it->get<bool>();
    if (auto it = j.find("mc"); it != j.end()) {
        if (auto s = it->find("samples"); s != it->end())
            spec.mc.samples = detail::as_u64(*s, "mc samples");
        if (auto s = it->find("seed"); s != it->end()) spec.mc.seed = detail::as_u64(*s, "mc seed");
        if (auto s = it->find("confidence"); s != it->end())
            spec.mc.confidence = s->get<double>();
    }
    if (auto it = j.find("cap_bits"); it != j.end())
        spec.cap_bits = detail::as_int(*it, "cap_bits");
    return spec;
}

inline Json sweep_spec_to_json(const SweepSpec& spec) {
    Json j;
    Json family;
    switch (spec.family) {
        case SweepSpec::Family::AllTrees:
            family = {{"type", "all-trees"}, {"n", spec.n}};
            break;
        case SweepSpec::Family::RandomForests:
            family = {{"type", "random-forests"},
                      {"n", spec.n},
                      {"components", spec.components},
                      {"count", spec.count},
                      {"seed", spec.family_seed}};
            break;
        case SweepSpec::Family::Instances: {
            Json list = Json::array();
            for (const Instance& inst : spec.instances) list.push_back(instance_to_json(inst));
            family = {{"type", "instances"}, {"instances", std::move(list)}};
            break;
        }
    }
    j["family"] = std::move(family);

    switch (spec.transversals) {
        case SweepSpec::TransversalPolicy::All:
            j["transversals"] = {{"type", "all"}};
            break;
        case SweepSpec::TransversalPolicy::Random:
            j["transversals"] = {{"type", "random"},
                                 {"count", spec.transversal_count},
                                 {"seed", spec.transversal_seed}};
            break;
        case SweepSpec::TransversalPolicy::Explicit: {
            Json sets = Json::array();
            for (const TransversalSet& h : spec.explicit_transversals) sets.push_back(h.members());
            j["transversals"] = {{"type", "explicit"}, {"sets", std::move(sets)}};
            break;
        }
        case SweepSpec::TransversalPolicy::FromInstance:
            j["transversals"] = {{"type", "instance"}};
            break;
    }

    switch (spec.terminals) {
        case SweepSpec::TerminalPolicy::AllPairs:
            j["terminals"] = {{"type", "all-pairs"}};
            break;
        case SweepSpec::TerminalPolicy::Explicit: {
            Json pairs = Json::array();
            for (auto [u, v] : spec.explicit_terminals) pairs.push_back({u, v});
            j["terminals"] = {{"type", "explicit"}, {"pairs", std::move(pairs)}};
            break;
        }
        case SweepSpec::TerminalPolicy::FromInstance:
            j["terminals"] = {{"type", "instance"}};
            break;
    }

    Json grid = Json::array();
    for (const Rational& p : spec.p_grid) grid.push_back(to_string(p));
    j["p_grid"] = std::move(grid);

    j["mode"] = spec.mode == SweepSpec::Mode::Exact ? "exact"
                : spec.mode == SweepSpec::Mode::Mc  ? "mc"
                                                    : "both";
    j["certify_reduction"] = spec.certify_reduction;
    if (spec.mode != SweepSpec::Mode::Exact)
        j["mc"] = {{"samples", spec.mc.samples},
                   {"seed", spec.mc.seed},
                   {"confidence", detail::number(spec.mc.confidence)}};
    j["cap_bits"] = spec.cap_bits;
    return j;
}

inline Json sweep_violation_to_json(const SweepViolation& violation) {
    Json j;
    j["kind"] = violation.kind;
    j["n"] = violation.n;
    Json edges = Json::array();
    for (auto [a, b] : violation.edges) edges.push_back({a, b});
    j["edges"] = std::move(edges);
    j["H"] = violation.h;
    j["u"] = violation.u;
    j["v"] = violation.v;
    if (!violation.p.empty()) j["p"] = violation.p;
    if (!violation.same.empty()) j["same"] = violation.same;
    if (!violation.cross.empty()) j["cross"] = violation.cross;
    if (!violation.diff.empty()) j["diff"] = violation.diff;
    if (!violation.detail.empty()) j["detail"] = violation.detail;
    return j;
}

// Canonical report serialization. Wall time is excluded unless requested so
// that repeated seeded sweeps are byte-identical.
inline Json sweep_report_to_json(const SweepSpec& spec, const SweepReport& report,
                                 bool include_timing = false) {
    Json j;
    j["spec"] = sweep_spec_to_json(spec);
    j["instances_checked"] = report.instances_checked;
    j["path_equality_checks"] = report.path_equality_checks;
    j["reduction_certifications"] = report.reduction_certifications;
    Json violations = Json::array();
    for (const SweepViolation& v : report.violations)
        violations.push_back(sweep_violation_to_json(v));
    j["violations"] = std::move(violations);
    j["errors"] = report.errors;
    j["verdict"] = report.pass() ? "PASS" : "FAIL";
    if (include_timing) j["wall_time_seconds"] = detail::number(report.wall_time_seconds);
    return j;
}

}  // namespace bunkbed
