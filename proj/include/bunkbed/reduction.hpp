#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bunkbed/bunkbed_graph.hpp"
#include "bunkbed/errors.hpp"
#include "bunkbed/graph.hpp"
#include "bunkbed/reliability.hpp"

namespace bunkbed {

// Decomposition of a forest along the unique u-v path.
//
// Relabeling: path vertices (u = w_1, ..., w_ell = v) map to 1..ell, the
// remaining vertices to ell+1..n in ascending original order.
//
// Layer-edge partition: path_layer_edges holds the 2(ell-1) layer copies of
// the path's step edges, laid out exactly like the layer edges of the
// bunkbed of P_ell (positions 0..ell-2 = upper copies of steps 1..ell-1 in
// path order, positions ell-1..2(ell-1)-1 = the lower copies). A
// PathConfiguration mask therefore transfers verbatim to a configuration of
// the bunkbed of P_ell. outside_layer_edges holds every other layer edge in
// ascending index order.
struct PathDecomposition {
    Graph graph;
    bool non_forest = false;  // accepted through the permissive route
    int u = 1;
    int v = 1;
    std::vector<int> path_vertices;        // w_1 = u, ..., w_ell = v
    std::vector<int> relabel;              // size n+1; relabel[original] = new label
    std::vector<int> original_label;       // size n+1; inverse of relabel
    std::vector<int> path_layer_edges;     // 2(ell-1) layer-edge indices
    std::vector<int> outside_layer_edges;  // the remaining layer-edge indices

    int ell() const { return static_cast<int>(path_vertices.size()); }
    int path_edge_count() const { return static_cast<int>(path_layer_edges.size()); }
    int outside_edge_count() const { return static_cast<int>(outside_layer_edges.size()); }

    std::pair<int, int> layer_endpoints(int layer_index) const {
        const int m = graph.edge_count();
        const int n = graph.vertex_count();
        const Edge& e = graph.edges()[layer_index % m];
        return layer_index < m ? std::pair{e.a, e.b} : std::pair{n + e.a, n + e.b};
    }
};

// Open subset of the outside layer edges: bit j = outside_layer_edges[j].
struct OutsideConfiguration {
    std::uint64_t mask = 0;
};

// Open subset of the path layer edges: bit j = path_layer_edges[j].
struct PathConfiguration {
    std::uint64_t mask = 0;
};

// Scatters an (outside, path) pair of sub-masks into a full configuration.
inline EdgeConfiguration assemble_configuration(const PathDecomposition& pd,
                                                const OutsideConfiguration& out_cfg,
                                                const PathConfiguration& path_cfg) {
    std::uint64_t full = 0;
    for (std::uint64_t m = out_cfg.mask; m != 0; m &= m - 1)
        full |= 1ULL << pd.outside_layer_edges[std::countr_zero(m)];
    for (std::uint64_t m = path_cfg.mask; m != 0; m &= m - 1)
        full |= 1ULL << pd.path_layer_edges[std::countr_zero(m)];
    return {full, 2 * pd.graph.edge_count()};
}

// The effective transversal set H' in relabeled coordinates (subset of
// 1..ell): z is a member iff z+ and z- are joined by open outside edges and
// H-transversals alone.
struct ReducedTransversalSet {
    std::vector<int> members;  // ascending

    bool contains(int z) const {
        return std::binary_search(members.begin(), members.end(), z);
    }
    std::uint64_t bitmask() const {
        std::uint64_t m = 0;
        for (int z : members) m |= 1ULL << (z - 1);
        return m;
    }
    TransversalSet as_transversals() const { return TransversalSet(members); }
};

namespace detail {

inline PathDecomposition decompose_impl(const Graph& g, int u, int v, bool non_forest) {
    g.require_label(u);
    g.require_label(v);

    // BFS path; for forests this is the unique u-v path.
    std::vector<int> path;
    if (u == v) {
        path = {u};
    } else {
        auto adj = g.adjacency();
        std::vector<int> parent(g.vertex_count() + 1, 0);
        std::vector<int> queue{u};
        parent[u] = u;
        for (std::size_t head = 0; head < queue.size() && parent[v] == 0; ++head) {
            for (int x : adj[queue[head]]) {
                if (parent[x] == 0) {
                    parent[x] = queue[head];
                    queue.push_back(x);
                }
            }
        }
        if (parent[v] == 0)
            throw Error(errc::disconnected_terminals,
                        "u=" + std::to_string(u) + " and v=" + std::to_string(v) +
                            " lie in different components");
        for (int w = v; w != u; w = parent[w]) path.push_back(w);
        path.push_back(u);
        std::reverse(path.begin(), path.end());
    }

    PathDecomposition pd;
    pd.graph = g;
    pd.non_forest = non_forest;
    pd.u = u;
    pd.v = v;
    pd.path_vertices = path;

    const int n = g.vertex_count();
    const int ell = static_cast<int>(path.size());
    std::vector<int> position(n + 1, 0);  // 1-based position on the path, 0 = off path
    for (int i = 0; i < ell; ++i) position[path[i]] = i + 1;

    pd.relabel.assign(n + 1, 0);
    pd.original_label.assign(n + 1, 0);
    for (int i = 0; i < ell; ++i) {
        pd.relabel[path[i]] = i + 1;
        pd.original_label[i + 1] = path[i];
    }
    int next = ell + 1;
    for (int w = 1; w <= n; ++w) {
        if (position[w] == 0) {
            pd.relabel[w] = next;
            pd.original_label[next] = w;
            ++next;
        }
    }

    // Classify base edges. In a forest an edge with both endpoints on the
    // path must join consecutive path vertices; a chord would mean a cycle.
    const int m = g.edge_count();
    std::vector<int> step_edge(std::max(ell - 1, 0), -1);
    std::vector<bool> is_step(m, false);
    for (int e = 0; e < m; ++e) {
        const Edge& edge = g.edges()[e];
        const int pa = position[edge.a];
        const int pb = position[edge.b];
        if (pa != 0 && pb != 0) {
            if (pa + 1 == pb || pb + 1 == pa) {
                is_step[e] = true;
                step_edge[std::min(pa, pb) - 1] = e;
            } else if (!non_forest) {
                throw Error(errc::not_a_forest,
                            "edge " + edge_label(edge.a, edge.b) +
                                " joins non-consecutive path vertices");
            }
        }
    }

    pd.path_layer_edges.reserve(2 * (ell - 1));
    for (int j = 0; j + 1 < ell; ++j) pd.path_layer_edges.push_back(step_edge[j]);
    for (int j = 0; j + 1 < ell; ++j) pd.path_layer_edges.push_back(step_edge[j] + m);
    for (int e = 0; e < m; ++e)
        if (!is_step[e]) pd.outside_layer_edges.push_back(e);
    for (int e = 0; e < m; ++e)
        if (!is_step[e]) pd.outside_layer_edges.push_back(e + m);
    return pd;
}

inline void require_transversals(const Graph& g, const TransversalSet& h) {
    for (int w : h.members()) g.require_label(w);
}

// Applies open path-configuration bits to a union-find over the full
// bunkbed's layered vertices.
inline void apply_path_bits(const PathDecomposition& pd, UnionFind& uf, std::uint64_t mask) {
    for (std::uint64_t m = mask; m != 0; m &= m - 1) {
        auto [a, b] = pd.layer_endpoints(pd.path_layer_edges[std::countr_zero(m)]);
        uf.unite(a, b);
    }
}

inline void apply_outside_bits(const PathDecomposition& pd, UnionFind& uf, std::uint64_t mask) {
    for (std::uint64_t m = mask; m != 0; m &= m - 1) {
        auto [a, b] = pd.layer_endpoints(pd.outside_layer_edges[std::countr_zero(m)]);
        uf.unite(a, b);
    }
}

}  // namespace detail

// Decomposes a forest along the unique u-v path.
inline PathDecomposition decompose(const Forest& f, int u, int v) {
    return detail::decompose_impl(f.graph(), u, v, false);
}

// Graph-level entry point. Non-forest inputs are rejected unless
// allow_non_forest is set; with the flag the decomposition uses a BFS
// shortest path and classifies chords between path vertices as outside
// edges, which is outside the proof's guarantees (pd.non_forest records it).
inline PathDecomposition decompose_graph(const Graph& g, int u, int v,
                                         bool allow_non_forest = false) {
    const bool forest = is_forest(g);
    if (!forest && !allow_non_forest)
        throw Error(errc::not_a_forest, "reduction requires an acyclic graph");
    return detail::decompose_impl(g, u, v, !forest);
}

// H' = the path vertices whose two layer copies are connected in the
// auxiliary graph (open outside layer edges) + (all H-transversal edges),
// with every path layer edge removed. One union-find pass answers all z.
inline ReducedTransversalSet compute_h_prime(const PathDecomposition& pd, const TransversalSet& h,
                                             const OutsideConfiguration& out_cfg) {
    detail::require_transversals(pd.graph, h);
    const int n = pd.graph.vertex_count();
    UnionFind uf(2 * n + 1);
    for (int w : h.members()) uf.unite(w, n + w);
    detail::apply_outside_bits(pd, uf, out_cfg.mask);

    ReducedTransversalSet reduced;
    for (int i = 0; i < pd.ell(); ++i) {
        const int w = pd.path_vertices[i];
        if (uf.same(w, n + w)) reduced.members.push_back(i + 1);
    }
    return reduced;
}

// The proof's equivalence, evaluated on one configuration pair:
//   (a) 1+ reaches ell+/ell- in the full bunkbed under out_cfg + path_cfg;
//   (b) 1+ reaches ell+/ell- in the bunkbed of P_ell with transversal set
//       H' under the image of path_cfg.
struct EquivalenceCheck {
    bool a_plus = false;
    bool b_plus = false;
    bool a_minus = false;
    bool b_minus = false;

    bool consistent() const { return a_plus == b_plus && a_minus == b_minus; }
};

inline EquivalenceCheck check_equivalence(const PathDecomposition& pd, const TransversalSet& h,
                                          const OutsideConfiguration& out_cfg,
                                          const PathConfiguration& path_cfg) {
    detail::require_transversals(pd.graph, h);
    const int n = pd.graph.vertex_count();
    const int ell = pd.ell();

    EquivalenceCheck check;
    {
        UnionFind uf(2 * n + 1);
        for (int w : h.members()) uf.unite(w, n + w);
        detail::apply_outside_bits(pd, uf, out_cfg.mask);
        detail::apply_path_bits(pd, uf, path_cfg.mask);
        check.a_plus = uf.same(pd.u, pd.v);
        check.a_minus = uf.same(pd.u, n + pd.v);
    }
    {
        auto h_prime = compute_h_prime(pd, h, out_cfg);
        BunkbedGraph reduced(path_graph(ell), h_prime.as_transversals());
        UnionFind uf(reduced.layered_vertex_count() + 1);
        reduced.apply_transversals(uf);
        reduced.apply_configuration(uf, path_cfg.mask);
        check.b_plus = uf.same(1, ell);
        check.b_minus = uf.same(1, 2 * ell);
    }
    return check;
}

// Conditional reliability polynomials over the path edges, with the outside
// configuration frozen: M = 2(ell-1), counts indexed by the number of open
// path edges. Coefficientwise equal to the polynomials of (P_ell, H').
inline ReliabilityPair conditional_reliability(const PathDecomposition& pd,
                                               const TransversalSet& h,
                                               const OutsideConfiguration& out_cfg,
                                               const EnumerationOptions& opt = {}) {
    detail::require_transversals(pd.graph, h);
    const int mp = pd.path_edge_count();
    if (mp > opt.cap_bits)
        throw Error(errc::too_large, "2(ell-1) = " + std::to_string(mp) +
                                         " exceeds enumeration cap " + std::to_string(opt.cap_bits));
    const int n = pd.graph.vertex_count();

    UnionFind base(2 * n + 1);
    for (int w : h.members()) base.unite(w, n + w);
    detail::apply_outside_bits(pd, base, out_cfg.mask);

    std::vector<std::uint64_t> same(mp + 1, 0), cross(mp + 1, 0);
    UnionFind uf;
    for (std::uint64_t mask = 0; mask < (1ULL << mp); ++mask) {
        uf.reset_from(base);
        detail::apply_path_bits(pd, uf, mask);
        const int k = std::popcount(mask);
        if (uf.same(pd.u, pd.v)) ++same[k];
        if (uf.same(pd.u, n + pd.v)) ++cross[k];
    }
    return {detail::widen(mp, same), detail::widen(mp, cross)};
}

// Law of total probability over the outside configuration: the unconditional
// Bernstein counts must compose exactly from the conditional ones,
//   total[k] = sum over out_cfg of cond(out_cfg)[k - |out_cfg|].
struct TowerReport {
    ReliabilityPolynomial total_same;
    ReliabilityPolynomial total_cross;
    ReliabilityPolynomial composed_same;
    ReliabilityPolynomial composed_cross;
    bool same_pass = false;
    bool cross_pass = false;

    bool pass() const { return same_pass && cross_pass; }
};

inline TowerReport verify_tower(const Forest& f, const TransversalSet& h, int u, int v,
                                const EnumerationOptions& opt = {}) {
    PathDecomposition pd = decompose(f, u, v);
    const int M = 2 * pd.graph.edge_count();
    if (M > opt.cap_bits)
        throw Error(errc::too_large, "2|E| = " + std::to_string(M) + " exceeds enumeration cap " +
                                         std::to_string(opt.cap_bits));

    BunkbedGraph bb(pd.graph, h);
    auto total = exact_reliability_pair(bb, u, v, opt);

    TowerReport report;
    report.total_same = std::move(total.same);
    report.total_cross = std::move(total.cross);
    report.composed_same = ReliabilityPolynomial{M, std::vector<BigInt>(M + 1, 0)};
    report.composed_cross = ReliabilityPolynomial{M, std::vector<BigInt>(M + 1, 0)};

    const int out_count = pd.outside_edge_count();
    for (std::uint64_t out_mask = 0; out_mask < (1ULL << out_count); ++out_mask) {
        auto cond = conditional_reliability(pd, h, {out_mask}, opt);
        const int k_out = std::popcount(out_mask);
        for (int k = 0; k <= cond.same.M; ++k) {
            report.composed_same.counts[k_out + k] += cond.same.counts[k];
            report.composed_cross.counts[k_out + k] += cond.cross.counts[k];
        }
    }
    report.same_pass = report.composed_same == report.total_same;
    report.cross_pass = report.composed_cross == report.total_cross;
    return report;
}

// Exhaustive certification of the reduction on one instance: containment
// H cap path subset of H', equivalence (a) = (b) for every configuration
// pair, conditional polynomials equal to those of (P_ell, H'), and the tower
// composition. Shares one scratch set across the whole sweep.
struct ReductionCertificate {
    int ell = 0;
    int outside_edges = 0;
    std::uint64_t outside_configurations = 0;
    std::uint64_t equivalence_pairs = 0;
    bool containment_pass = true;
    bool equivalence_pass = true;
    bool conditional_pass = true;
    bool tower_pass = true;

    bool pass() const {
        return containment_pass && equivalence_pass && conditional_pass && tower_pass;
    }
};

inline ReductionCertificate certify_reduction(const Forest& f, const TransversalSet& h, int u,
                                              int v, const EnumerationOptions& opt = {}) {
    PathDecomposition pd = decompose(f, u, v);
    detail::require_transversals(pd.graph, h);
    const int n = pd.graph.vertex_count();
    const int M = 2 * pd.graph.edge_count();
    if (M > opt.cap_bits)
        throw Error(errc::too_large, "2|E| = " + std::to_string(M) + " exceeds enumeration cap " +
                                         std::to_string(opt.cap_bits));
    const int ell = pd.ell();
    const int mp = pd.path_edge_count();
    const int out_count = pd.outside_edge_count();

    ReductionCertificate cert;
    cert.ell = ell;
    cert.outside_edges = out_count;
    cert.outside_configurations = 1ULL << out_count;

    BunkbedGraph bb(pd.graph, h);
    auto total = exact_reliability_pair(bb, u, v, opt);
    std::vector<BigInt> composed_same(M + 1, 0), composed_cross(M + 1, 0);

    // relabel(H cap path) for the containment check.
    std::vector<int> h_on_path;
    for (int w : h.members())
        if (pd.relabel[w] >= 1 && pd.relabel[w] <= ell) h_on_path.push_back(pd.relabel[w]);
    std::sort(h_on_path.begin(), h_on_path.end());

    // (P_ell, H') polynomials keyed by the H' bitmask.
    std::map<std::uint64_t, ReliabilityPair> reduced_cache;

    // Layer edges of the bunkbed of P_ell, in the shared positional layout.
    std::vector<std::pair<int, int>> reduced_edges;
    for (int j = 0; j + 1 < ell; ++j) reduced_edges.push_back({j + 1, j + 2});
    for (int j = 0; j + 1 < ell; ++j) reduced_edges.push_back({ell + j + 1, ell + j + 2});

    std::vector<std::uint64_t> cond_same(mp + 1), cond_cross(mp + 1);
    UnionFind base_full, base_reduced, uf_full, uf_reduced;
    for (std::uint64_t out_mask = 0; out_mask < (1ULL << out_count); ++out_mask) {
        auto h_prime = compute_h_prime(pd, h, {out_mask});
        cert.containment_pass &= std::includes(h_prime.members.begin(), h_prime.members.end(),
                                               h_on_path.begin(), h_on_path.end());

        auto [cache_it, inserted] = reduced_cache.try_emplace(h_prime.bitmask());
        if (inserted) {
            BunkbedGraph reduced(path_graph(ell), h_prime.as_transversals());
            cache_it->second = exact_reliability_pair(reduced, 1, ell, opt);
        }

        base_full.reset(2 * n + 1);
        for (int w : h.members()) base_full.unite(w, n + w);
        detail::apply_outside_bits(pd, base_full, out_mask);
        base_reduced.reset(2 * ell + 1);
        for (int z : h_prime.members) base_reduced.unite(z, ell + z);

        std::fill(cond_same.begin(), cond_same.end(), 0);
        std::fill(cond_cross.begin(), cond_cross.end(), 0);
        for (std::uint64_t path_mask = 0; path_mask < (1ULL << mp); ++path_mask) {
            uf_full.reset_from(base_full);
            detail::apply_path_bits(pd, uf_full, path_mask);
            const bool a_plus = uf_full.same(u, pd.v);
            const bool a_minus = uf_full.same(u, n + pd.v);

            uf_reduced.reset_from(base_reduced);
            for (std::uint64_t m = path_mask; m != 0; m &= m - 1) {
                const auto& [a, b] = reduced_edges[std::countr_zero(m)];
                uf_reduced.unite(a, b);
            }
            const bool b_plus = uf_reduced.same(1, ell);
            const bool b_minus = uf_reduced.same(1, 2 * ell);

            cert.equivalence_pass &= (a_plus == b_plus) && (a_minus == b_minus);
            ++cert.equivalence_pairs;

            const int k = std::popcount(path_mask);
            if (a_plus) ++cond_same[k];
            if (a_minus) ++cond_cross[k];
        }

        const auto& reduced_pair = cache_it->second;
        for (int k = 0; k <= mp; ++k) {
            cert.conditional_pass &= BigInt(cond_same[k]) == reduced_pair.same.counts[k];
            cert.conditional_pass &= BigInt(cond_cross[k]) == reduced_pair.cross.counts[k];
        }

        const int k_out = std::popcount(out_mask);
        for (int k = 0; k <= mp; ++k) {
            composed_same[k_out + k] += cond_same[k];
            composed_cross[k_out + k] += cond_cross[k];
        }
    }

    cert.tower_pass = composed_same == total.same.counts && composed_cross == total.cross.counts;
    return cert;
}

}  // namespace bunkbed
