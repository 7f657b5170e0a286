#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bunkbed/bunkbed_graph.hpp"
#include "bunkbed/errors.hpp"
#include "bunkbed/graph.hpp"
#include "bunkbed/rational.hpp"
#include "bunkbed/reliability.hpp"

namespace bunkbed {

// The path 1-2-...-n with a transversal set.
struct PathInstance {
    int n = 1;
    TransversalSet h;
};

// max H, or nullopt when H is empty.
inline std::optional<int> max_transversal(const TransversalSet& h) {
    if (h.empty()) return std::nullopt;
    return h.members().back();
}

namespace detail {

// Polynomial identity test by exact evaluation: deg-<=D polynomials agreeing
// at D+1 distinct points are equal. Checks lhs(p) == rhs(p) * p^extra_power
// at the points j/(D+2), j = 1..D+1.
inline bool identity_by_evaluation(const ReliabilityPolynomial& lhs,
                                   const ReliabilityPolynomial& rhs, int extra_power) {
    const int degree_bound = std::max(lhs.M, rhs.M + extra_power);
    const int points = degree_bound + 1;
    for (int j = 1; j <= points; ++j) {
        const Rational p(j, points + 1);
        Rational left = evaluate(lhs, p);
        Rational right = evaluate(rhs, p);
        for (int e = 0; e < extra_power; ++e) right *= p;
        if (left != right) return false;
    }
    return true;
}

}  // namespace detail

// The chain of equalities behind the path proof, with m = max H:
//   P(1+ ~ n+) = P(1+ ~ m+) * p^(n-m)           (open tail above)
//   P(1+ ~ m+) = P(1+ ~ m-)                      (transversal at m)
//   P(1+ ~ n-) = P(1+ ~ m-) * p^(n-m)            (open tail below)
// All four polynomials live on the full bunkbed of P_n.
struct PathFactorizationReport {
    int n = 0;
    int m = 0;
    ReliabilityPolynomial endpoint_same;   // P(1+ ~ n+)
    ReliabilityPolynomial max_same;        // P(1+ ~ m+)
    ReliabilityPolynomial max_cross;       // P(1+ ~ m-)
    ReliabilityPolynomial endpoint_cross;  // P(1+ ~ n-)
    bool same_tail_pass = false;
    bool crossing_pass = false;
    bool cross_tail_pass = false;

    bool pass() const { return same_tail_pass && crossing_pass && cross_tail_pass; }
};

inline PathFactorizationReport check_path_factorization(const PathInstance& inst,
                                                        const EnumerationOptions& opt = {}) {
    auto m = max_transversal(inst.h);
    if (!m)
        throw Error(errc::empty_transversal_set, "path factorization needs a nonempty H");

    BunkbedGraph bb(path_graph(inst.n), inst.h);
    const std::pair<int, int> events[4] = {
        {bb.upper(1), bb.upper(inst.n)},
        {bb.upper(1), bb.upper(*m)},
        {bb.upper(1), bb.lower(*m)},
        {bb.upper(1), bb.lower(inst.n)},
    };
    auto counts = enumerate_event_counts(bb, std::span(events, 4), opt);
    const int M = bb.layer_edge_count();

    PathFactorizationReport report;
    report.n = inst.n;
    report.m = *m;
    report.endpoint_same = detail::widen(M, counts[0]);
    report.max_same = detail::widen(M, counts[1]);
    report.max_cross = detail::widen(M, counts[2]);
    report.endpoint_cross = detail::widen(M, counts[3]);

    const int tail = inst.n - *m;
    report.same_tail_pass =
        detail::identity_by_evaluation(report.endpoint_same, report.max_same, tail);
    report.crossing_pass = detail::identity_by_evaluation(report.max_same, report.max_cross, 0);
    report.cross_tail_pass =
        detail::identity_by_evaluation(report.endpoint_cross, report.max_cross, tail);
    return report;
}

// The proof's conclusion on paths: for H nonempty, the same-level and
// cross-level polynomials for terminals (1, n) coincide coefficientwise.
struct PathEqualityReport {
    int n = 0;
    ReliabilityPolynomial same;
    ReliabilityPolynomial cross;
    SignedReliabilityPolynomial diff;

    bool pass() const { return diff.identically_zero(); }
};

inline PathEqualityReport check_path_equality(const PathInstance& inst,
                                              const EnumerationOptions& opt = {}) {
    if (inst.h.empty())
        throw Error(errc::empty_transversal_set, "path equality needs a nonempty H");

    BunkbedGraph bb(path_graph(inst.n), inst.h);
    auto pair = exact_reliability_pair(bb, 1, inst.n, opt);

    PathEqualityReport report;
    report.n = inst.n;
    report.same = std::move(pair.same);
    report.cross = std::move(pair.cross);
    report.diff = difference(report.same, report.cross);
    return report;
}

}  // namespace bunkbed
