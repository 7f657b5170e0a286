#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bunkbed/errors.hpp"
#include "bunkbed/graph.hpp"
#include "bunkbed/instance.hpp"
#include "bunkbed/monte_carlo.hpp"
#include "bunkbed/parallel.hpp"
#include "bunkbed/path_identity.hpp"
#include "bunkbed/random_graph.hpp"
#include "bunkbed/rational.hpp"
#include "bunkbed/reduction.hpp"
#include "bunkbed/reliability.hpp"

namespace bunkbed {

// Orchestrated replay of the theorem over an instance family: exact
// difference polynomials with grid nonnegativity, path-equality assertions
// where the path proof applies, optional reduction certification, and
// optional Monte Carlo cross-checks.
struct SweepSpec {
    enum class Family { AllTrees, RandomForests, Instances };
    enum class TransversalPolicy { All, Random, Explicit, FromInstance };
    enum class TerminalPolicy { AllPairs, Explicit, FromInstance };
    enum class Mode { Exact, Mc, Both };

    Family family = Family::AllTrees;
    int n = 1;                        // AllTrees / RandomForests
    int components = 1;               // RandomForests
    int count = 0;                    // RandomForests
    std::uint64_t family_seed = 0;    // RandomForests
    std::vector<Instance> instances;  // Instances

    TransversalPolicy transversals = TransversalPolicy::All;
    int transversal_count = 0;
    std::uint64_t transversal_seed = 0;
    std::vector<TransversalSet> explicit_transversals;

    TerminalPolicy terminals = TerminalPolicy::AllPairs;
    std::vector<std::pair<int, int>> explicit_terminals;

    std::vector<Rational> p_grid;
    Mode mode = Mode::Exact;
    bool certify_reduction = false;

    struct McSettings {
        std::uint64_t samples = 100000;
        std::uint64_t seed = 0;
        double confidence = 0.95;
    } mc;

    int cap_bits = 26;
    int threads = 0;
};

// A violation carries the full witness needed to replay it: instance, H,
// terminals, parameter, and both probabilities.
struct SweepViolation {
    std::string kind;  // exact | path-equality | reduction | mc | calibration
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> h;
    int u = 0;
    int v = 0;
    std::string p;
    std::string same;
    std::string cross;
    std::string diff;
    std::string detail;
};

struct SweepReport {
    std::uint64_t instances_checked = 0;
    std::uint64_t path_equality_checks = 0;
    std::uint64_t reduction_certifications = 0;
    std::vector<SweepViolation> violations;
    std::vector<std::string> errors;  // per-unit failures (TooLarge etc.), not fatal
    double wall_time_seconds = 0.0;   // excluded from the canonical serialization

    bool pass() const { return violations.empty(); }
};

inline void validate_spec(const SweepSpec& spec) {
    if (spec.p_grid.empty())
        throw Error(errc::invalid_parameters, "sweep needs a nonempty p grid");
    for (const Rational& p : spec.p_grid)
        if (p <= 0 || p >= 1)
            throw Error(errc::invalid_parameters,
                        "grid value " + to_string(p) + " outside (0,1)");
    switch (spec.family) {
        case SweepSpec::Family::AllTrees:
            if (spec.n < 1) throw Error(errc::invalid_parameters, "all-trees needs n >= 1");
            break;
        case SweepSpec::Family::RandomForests:
            if (spec.n < 1 || spec.components < 1 || spec.components > spec.n || spec.count < 1)
                throw Error(errc::invalid_parameters, "bad random-forests parameters");
            break;
        case SweepSpec::Family::Instances:
            if (spec.instances.empty())
                throw Error(errc::invalid_parameters, "instance family is empty");
            break;
    }
    if (spec.family != SweepSpec::Family::Instances) {
        if (spec.transversals == SweepSpec::TransversalPolicy::FromInstance ||
            spec.terminals == SweepSpec::TerminalPolicy::FromInstance)
            throw Error(errc::invalid_parameters,
                        "from-instance policies require the instance family");
    }
    if (spec.transversals == SweepSpec::TransversalPolicy::Random && spec.transversal_count < 1)
        throw Error(errc::invalid_parameters, "random transversal policy needs a count");
    if (spec.mode != SweepSpec::Mode::Exact && spec.mc.samples < 1)
        throw Error(errc::invalid_parameters, "mc sweeps need samples >= 1");
}

namespace detail {

// Recognizes instances where the path proof applies directly: g is the
// path on its vertices and {u, v} are its endpoints. Returns the relabeled
// path instance.
inline std::optional<PathInstance> as_path_with_endpoint_terminals(const Graph& g,
                                                                   const TransversalSet& h, int u,
                                                                   int v) {
    if (!is_forest(g)) return std::nullopt;
    PathDecomposition pd;
    try {
        pd = decompose_graph(g, u, v);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (pd.ell() != g.vertex_count() || pd.outside_edge_count() != 0) return std::nullopt;
    std::vector<int> relabeled;
    for (int w : h.members()) relabeled.push_back(pd.relabel[w]);
    return PathInstance{g.vertex_count(), TransversalSet(relabeled)};
}

struct SweepUnit {
    int graph_index = 0;
    TransversalSet h;
    int u = 1;
    int v = 1;
};

struct UnitOutcome {
    std::vector<SweepViolation> violations;
    bool checked = false;
    bool path_equality = false;
    bool reduction_certified = false;
    std::string error;
};

inline SweepViolation witness(const std::string& kind, const Graph& g, const SweepUnit& unit) {
    SweepViolation violation;
    violation.kind = kind;
    violation.n = g.vertex_count();
    for (const Edge& e : g.edges()) violation.edges.push_back({e.a, e.b});
    violation.h = unit.h.members();
    violation.u = unit.u;
    violation.v = unit.v;
    return violation;
}

}  // namespace detail

inline SweepReport run_sweep(const SweepSpec& spec) {
    validate_spec(spec);
    const auto started = std::chrono::steady_clock::now();

    // Instance family.
    std::vector<Graph> graphs;
    switch (spec.family) {
        case SweepSpec::Family::AllTrees:
            graphs = all_labeled_trees(spec.n);
            break;
        case SweepSpec::Family::RandomForests: {
            SplitMix64 rng(spec.family_seed);
            for (int i = 0; i < spec.count; ++i)
                graphs.push_back(random_forest(spec.n, spec.components, rng.next()).graph());
            break;
        }
        case SweepSpec::Family::Instances:
            for (const Instance& inst : spec.instances) graphs.push_back(inst.graph);
            break;
    }

    // (graph, H, u, v) units in deterministic order.
    std::vector<detail::SweepUnit> units;
    for (int gi = 0; gi < static_cast<int>(graphs.size()); ++gi) {
        const Graph& g = graphs[gi];
        const int n = g.vertex_count();

        std::vector<TransversalSet> transversal_sets;
        switch (spec.transversals) {
            case SweepSpec::TransversalPolicy::All:
                for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
                    std::vector<int> members;
                    for (int v = 1; v <= n; ++v)
                        if ((mask >> (v - 1)) & 1) members.push_back(v);
                    transversal_sets.emplace_back(std::move(members));
                }
                break;
            case SweepSpec::TransversalPolicy::Random: {
                SplitMix64 rng(spec.transversal_seed, static_cast<std::uint64_t>(gi));
                for (int j = 0; j < spec.transversal_count; ++j) {
                    const std::uint64_t mask = rng.next() & ((n < 64 ? (1ULL << n) : 0ULL) - 1);
                    std::vector<int> members;
                    for (int v = 1; v <= n; ++v)
                        if ((mask >> (v - 1)) & 1) members.push_back(v);
                    transversal_sets.emplace_back(std::move(members));
                }
                break;
            }
            case SweepSpec::TransversalPolicy::Explicit:
                for (const TransversalSet& h : spec.explicit_transversals) {
                    for (int w : h.members()) g.require_label(w);
                    transversal_sets.push_back(h);
                }
                break;
            case SweepSpec::TransversalPolicy::FromInstance: {
                const auto& h = spec.instances[gi].h;
                if (!h)
                    throw Error(errc::invalid_parameters,
                                "instance " + std::to_string(gi) + " carries no H");
                transversal_sets.push_back(*h);
                break;
            }
        }

        std::vector<std::pair<int, int>> pairs;
        switch (spec.terminals) {
            case SweepSpec::TerminalPolicy::AllPairs:
                for (int u = 1; u <= n; ++u)
                    for (int v = u; v <= n; ++v) pairs.push_back({u, v});
                break;
            case SweepSpec::TerminalPolicy::Explicit:
                for (auto [u, v] : spec.explicit_terminals) {
                    g.require_label(u);
                    g.require_label(v);
                    pairs.push_back({u, v});
                }
                break;
            case SweepSpec::TerminalPolicy::FromInstance: {
                const Instance& inst = spec.instances[gi];
                if (!inst.u || !inst.v)
                    throw Error(errc::invalid_parameters,
                                "instance " + std::to_string(gi) + " carries no terminals");
                pairs.push_back({*inst.u, *inst.v});
                break;
            }
        }

        for (const TransversalSet& h : transversal_sets)
            for (auto [u, v] : pairs) units.push_back({gi, h, u, v});
    }

    const EnumerationOptions eopt{spec.cap_bits, 1};  // parallelism lives at unit level
    std::vector<detail::UnitOutcome> outcomes(units.size());

    parallel_chunks(units.size(), resolve_threads(spec.threads),
                    [&](int, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            const detail::SweepUnit& unit = units[idx];
            const Graph& g = graphs[unit.graph_index];
            detail::UnitOutcome& outcome = outcomes[idx];
            try {
                std::optional<ReliabilityPair> exact_pair;
                if (spec.mode != SweepSpec::Mode::Mc) {
                    BunkbedGraph bb(g, unit.h);
                    exact_pair = exact_reliability_pair(bb, unit.u, unit.v, eopt);
                    auto diff = difference(exact_pair->same, exact_pair->cross);
                    for (const Rational& p : spec.p_grid) {
                        Rational value = evaluate(diff, p);
                        if (value < 0) {
                            auto violation = detail::witness("exact", g, unit);
                            violation.p = to_string(p);
                            violation.same = to_string(evaluate(exact_pair->same, p));
                            violation.cross = to_string(evaluate(exact_pair->cross, p));
                            violation.diff = to_string(value);
                            outcome.violations.push_back(std::move(violation));
                        }
                    }

                    if (!unit.h.empty()) {
                        auto path_inst =
                            detail::as_path_with_endpoint_terminals(g, unit.h, unit.u, unit.v);
                        if (path_inst) {
                            auto equality = check_path_equality(*path_inst, eopt);
                            outcome.path_equality = true;
                            if (!equality.pass()) {
                                auto violation = detail::witness("path-equality", g, unit);
                                violation.detail = "same and cross polynomials differ";
                                outcome.violations.push_back(std::move(violation));
                            }
                        }
                    }

                    if (spec.certify_reduction && is_forest(g)) {
                        try {
                            auto cert =
                                certify_reduction(Forest(g), unit.h, unit.u, unit.v, eopt);
                            outcome.reduction_certified = true;
                            if (!cert.pass()) {
                                auto violation = detail::witness("reduction", g, unit);
                                violation.detail =
                                    std::string(cert.containment_pass ? "" : "containment ") +
                                    (cert.equivalence_pass ? "" : "equivalence ") +
                                    (cert.conditional_pass ? "" : "conditional ") +
                                    (cert.tower_pass ? "" : "tower ") + "failed";
                                outcome.violations.push_back(std::move(violation));
                            }
                        } catch (const Error& e) {
                            if (e.code() != errc::disconnected_terminals) throw;
                            // Disconnected terminals: both probabilities vanish and
                            // the inequality is trivial; nothing to certify.
                        }
                    }
                }

                if (spec.mode != SweepSpec::Mode::Exact) {
                    SplitMix64 seed_stream(spec.mc.seed, idx);
                    for (const Rational& p : spec.p_grid) {
                        const double pd = p.convert_to<double>();
                        McOptions mopt;
                        mopt.confidence = spec.mc.confidence;
                        mopt.threads = 1;
                        auto est = estimate(g, unit.h, unit.u, unit.v, pd, spec.mc.samples,
                                            seed_stream.next(), mopt);
                        if (est.mean_diff + 4.0 * est.ci_diff < 0.0) {
                            auto violation = detail::witness("mc", g, unit);
                            violation.p = format_double(pd);
                            violation.same = format_double(est.mean_same);
                            violation.cross = format_double(est.mean_cross);
                            violation.diff = format_double(est.mean_diff);
                            violation.detail = "ci_diff=" + format_double(est.ci_diff);
                            outcome.violations.push_back(std::move(violation));
                        }
                        if (exact_pair) {
                            const double exact_same =
                                evaluate(exact_pair->same, p).convert_to<double>();
                            const double exact_cross =
                                evaluate(exact_pair->cross, p).convert_to<double>();
                            const bool same_ok =
                                std::abs(est.mean_same - exact_same) <= 4.0 * est.ci_same;
                            const bool cross_ok =
                                std::abs(est.mean_cross - exact_cross) <= 4.0 * est.ci_cross;
                            if (!same_ok || !cross_ok) {
                                auto violation = detail::witness("calibration", g, unit);
                                violation.p = to_string(p);
                                violation.same = format_double(est.mean_same);
                                violation.cross = format_double(est.mean_cross);
                                violation.detail = "exact same=" + format_double(exact_same) +
                                                   " cross=" + format_double(exact_cross);
                                outcome.violations.push_back(std::move(violation));
                            }
                        }
                    }
                }

                outcome.checked = true;
            } catch (const Error& e) {
                outcome.error = "unit " + std::to_string(idx) + " (n=" +
                                std::to_string(g.vertex_count()) + ", u=" +
                                std::to_string(unit.u) + ", v=" + std::to_string(unit.v) +
                                "): " + e.what();
            }
        }
    });

    SweepReport report;
    for (auto& outcome : outcomes) {
        if (!outcome.error.empty()) report.errors.push_back(std::move(outcome.error));
        if (outcome.checked) ++report.instances_checked;
        if (outcome.path_equality) ++report.path_equality_checks;
        if (outcome.reduction_certified) ++report.reduction_certifications;
        for (auto& violation : outcome.violations)
            report.violations.push_back(std::move(violation));
    }
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace bunkbed
