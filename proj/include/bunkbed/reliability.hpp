#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bunkbed/bunkbed_graph.hpp"
#include "bunkbed/errors.hpp"
#include "bunkbed/parallel.hpp"
#include "bunkbed/rational.hpp"

namespace bunkbed {

// Two-terminal reliability in Bernstein form: counts[k] is the number of
// layer-edge configurations with exactly k open edges on which the event
// holds, so the probability at parameter p is
//   sum_k counts[k] * p^k * (1-p)^(M-k).
// Coefficients are nonnegative configuration counts; accumulation never
// cancels.
struct ReliabilityPolynomial {
    int M = 0;
    std::vector<BigInt> counts;  // size M+1

    friend bool operator==(const ReliabilityPolynomial&, const ReliabilityPolynomial&) = default;
};

// Difference of two reliability polynomials with equal M.
struct SignedReliabilityPolynomial {
    int M = 0;
    std::vector<BigInt> counts;  // size M+1, entries in [-binom(M,k), binom(M,k)]

    bool identically_zero() const {
        for (const BigInt& c : counts)
            if (c != 0) return false;
        return true;
    }

    friend bool operator==(const SignedReliabilityPolynomial&,
                           const SignedReliabilityPolynomial&) = default;
};

struct EnumerationOptions {
    int cap_bits = 26;  // largest 2|E| enumerated exhaustively
    int threads = 0;    // 0 = hardware concurrency
};

namespace detail {

inline Rational bernstein_value(std::span<const BigInt> counts, int M, const Rational& p) {
    require_probability(p);
    const BigInt a = numerator(p);
    const BigInt b = denominator(p);
    const BigInt c = b - a;
    // sum_k counts[k] a^k c^(M-k) / b^M, assembled in integers.
    std::vector<BigInt> a_pow(M + 1), c_pow(M + 1);
    a_pow[0] = 1;
    c_pow[0] = 1;
    for (int k = 1; k <= M; ++k) {
        a_pow[k] = a_pow[k - 1] * a;
        c_pow[k] = c_pow[k - 1] * c;
    }
    BigInt num = 0;
    for (int k = 0; k <= M; ++k) {
        if (counts[k] != 0) num += counts[k] * a_pow[k] * c_pow[M - k];
    }
    return Rational(num, int_pow(b, M));
}

}  // namespace detail

// Exact Bernstein evaluation at a rational p in [0,1]; no floating point.
inline Rational evaluate(const ReliabilityPolynomial& poly, const Rational& p) {
    return detail::bernstein_value(poly.counts, poly.M, p);
}

inline Rational evaluate(const SignedReliabilityPolynomial& poly, const Rational& p) {
    return detail::bernstein_value(poly.counts, poly.M, p);
}

// Full enumeration of all 2^M layer-edge configurations; one union-find
// build answers every queried (source, target) pair per configuration.
// Work splits over disjoint mask ranges and per-worker count arrays merge by
// addition, so the result is identical for any worker count.
inline std::vector<std::vector<std::uint64_t>> enumerate_event_counts(
    const BunkbedGraph& bb, std::span<const std::pair<int, int>> events,
    const EnumerationOptions& opt = {}) {
    const int M = bb.layer_edge_count();
    if (M > opt.cap_bits)
        throw Error(errc::too_large, "2|E| = " + std::to_string(M) + " exceeds enumeration cap " +
                                         std::to_string(opt.cap_bits));
    const std::uint64_t total = 1ULL << M;

    int workers = resolve_threads(opt.threads);
    if (total < (1ULL << 14)) workers = 1;

    std::vector<std::vector<std::vector<std::uint64_t>>> partial(
        workers,
        std::vector<std::vector<std::uint64_t>>(events.size(), std::vector<std::uint64_t>(M + 1, 0)));

    parallel_chunks(total, workers, [&](int worker, std::uint64_t lo, std::uint64_t hi) {
        UnionFind base(bb.layered_vertex_count() + 1);
        bb.apply_transversals(base);
        UnionFind uf;
        auto& counts = partial[worker];
        for (std::uint64_t mask = lo; mask < hi; ++mask) {
            uf.reset_from(base);
            bb.apply_configuration(uf, mask);
            const int k = std::popcount(mask);
            for (std::size_t e = 0; e < events.size(); ++e) {
                if (uf.same(events[e].first, events[e].second)) ++counts[e][k];
            }
        }
    });

    std::vector<std::vector<std::uint64_t>> merged(events.size(),
                                                   std::vector<std::uint64_t>(M + 1, 0));
    for (const auto& part : partial)
        for (std::size_t e = 0; e < events.size(); ++e)
            for (int k = 0; k <= M; ++k) merged[e][k] += part[e][k];
    return merged;
}

namespace detail {

inline ReliabilityPolynomial widen(int M, const std::vector<std::uint64_t>& counts) {
    ReliabilityPolynomial poly;
    poly.M = M;
    poly.counts.assign(counts.begin(), counts.end());
    return poly;
}

}  // namespace detail

// counts[k] = #{configurations with k open edges on which source ~ target}.
inline ReliabilityPolynomial exact_reliability(const BunkbedGraph& bb, int source, int target,
                                               const EnumerationOptions& opt = {}) {
    const std::pair<int, int> event{source, target};
    auto counts = enumerate_event_counts(bb, std::span(&event, 1), opt);
    return detail::widen(bb.layer_edge_count(), counts[0]);
}

// Same-level and cross-level polynomials for terminals (u, v), evaluated on
// one enumeration pass: events {u+ ~ v+} and {u+ ~ v-}.
struct ReliabilityPair {
    ReliabilityPolynomial same;
    ReliabilityPolynomial cross;
};

inline ReliabilityPair exact_reliability_pair(const BunkbedGraph& bb, int u, int v,
                                              const EnumerationOptions& opt = {}) {
    const std::pair<int, int> events[2] = {{bb.upper(u), bb.upper(v)}, {bb.upper(u), bb.lower(v)}};
    auto counts = enumerate_event_counts(bb, std::span(events, 2), opt);
    const int M = bb.layer_edge_count();
    return {detail::widen(M, counts[0]), detail::widen(M, counts[1])};
}

inline SignedReliabilityPolynomial difference(const ReliabilityPolynomial& same,
                                              const ReliabilityPolynomial& cross) {
    if (same.M != cross.M)
        throw Error(errc::invalid_parameters, "difference of polynomials with unequal M");
    SignedReliabilityPolynomial d;
    d.M = same.M;
    d.counts.resize(same.M + 1);
    for (int k = 0; k <= same.M; ++k) d.counts[k] = same.counts[k] - cross.counts[k];
    return d;
}

// The two sides of the bunkbed inequality as one signed polynomial:
// d[k] = #{|cfg|=k : u+ ~ v+} - #{|cfg|=k : u+ ~ v-}.
inline SignedReliabilityPolynomial bunkbed_difference(const Graph& g, const TransversalSet& h,
                                                      int u, int v,
                                                      const EnumerationOptions& opt = {}) {
    g.require_label(u);
    g.require_label(v);
    BunkbedGraph bb(g, h);
    auto pair = exact_reliability_pair(bb, u, v, opt);
    return difference(pair.same, pair.cross);
}

struct GridEvaluation {
    Rational p;
    Rational value;
};

struct GridReport {
    bool pass = true;
    std::vector<GridEvaluation> points;
    Rational min_value = 0;
    Rational min_p = 0;  // location of the minimum (first attaining point)
};

// Exact sign of a signed polynomial on a grid of rational parameters;
// verdict PASS iff every evaluation is >= 0.
inline GridReport verify_nonnegative_on_grid(const SignedReliabilityPolynomial& d,
                                             const std::vector<Rational>& grid) {
    GridReport report;
    bool first = true;
    for (const Rational& p : grid) {
        Rational value = evaluate(d, p);
        if (first || value < report.min_value) {
            report.min_value = value;
            report.min_p = p;
            first = false;
        }
        if (value < 0) report.pass = false;
        report.points.push_back({p, std::move(value)});
    }
    return report;
}

}  // namespace bunkbed
