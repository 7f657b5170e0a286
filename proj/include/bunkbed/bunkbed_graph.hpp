#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bunkbed/errors.hpp"
#include "bunkbed/graph.hpp"
#include "bunkbed/union_find.hpp"

namespace bunkbed {

// The subset H of base vertices whose two layer copies are joined by an
// always-open vertical edge. Stored sorted and deduplicated.
class TransversalSet {
public:
    TransversalSet() = default;

    explicit TransversalSet(std::vector<int> members) : members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }

    const std::vector<int>& members() const { return members_; }
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }

    bool contains(int v) const {
        return std::binary_search(members_.begin(), members_.end(), v);
    }

    friend bool operator==(const TransversalSet&, const TransversalSet&) = default;

private:
    std::vector<int> members_;
};

// Open/closed state of the 2|E| layer edges, bit i = layer edge i open.
// Transversal edges carry no bit; they are open in every configuration.
struct EdgeConfiguration {
    std::uint64_t open_mask = 0;
    int edge_count = 0;

    bool is_open(int i) const { return (open_mask >> i) & 1; }
    int open_count() const { return std::popcount(open_mask); }

    // Hexadecimal bitstring, least-significant bit = layer edge 0.
    std::string to_hex() const {
        if (open_mask == 0) return "0";
        static const char digits[] = "0123456789abcdef";
        std::string out;
        for (std::uint64_t m = open_mask; m != 0; m >>= 4) out += digits[m & 0xf];
        std::reverse(out.begin(), out.end());
        return out;
    }

    static EdgeConfiguration from_hex(const std::string& hex, int edge_count) {
        if (hex.empty() || hex.size() > 16)
            throw Error(errc::invalid_parameters, "bad configuration mask '" + hex + "'");
        std::uint64_t mask = 0;
        for (char c : hex) {
            int digit;
            if (c >= '0' && c <= '9') digit = c - '0';
            else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
            else throw Error(errc::invalid_parameters, "bad configuration mask '" + hex + "'");
            mask = (mask << 4) | static_cast<std::uint64_t>(digit);
        }
        if (edge_count < 64 && (mask >> edge_count) != 0)
            throw Error(errc::invalid_parameters,
                        "configuration mask '" + hex + "' exceeds " + std::to_string(edge_count) +
                            " edges");
        return {mask, edge_count};
    }

    friend bool operator==(const EdgeConfiguration&, const EdgeConfiguration&) = default;
};

// The doubled graph G+- of a base graph G: two percolating copies stacked,
// plus always-open transversal edges {v+, v-} for v in H.
//
// Layered vertex indexing: v+ -> v, v- -> n + v (1-based, so 1..2n).
// Layer edge indexing: edges 0..|E|-1 are the upper copies of the base edges
// in canonical order, edges |E|..2|E|-1 the lower copies; layer edges i and
// i+|E| are the two copies of base edge i. This layout is part of the
// serialization contract.
class BunkbedGraph {
public:
    BunkbedGraph(Graph base, TransversalSet transversals)
        : base_(std::move(base)), transversals_(std::move(transversals)) {
        for (int v : transversals_.members()) {
            if (!base_.has_label(v))
                throw Error(errc::label_out_of_range,
                            "transversal vertex " + std::to_string(v) + " with n=" +
                                std::to_string(base_.vertex_count()));
        }
        const int n = base_.vertex_count();
        layer_edges_.reserve(2 * base_.edge_count());
        for (const Edge& e : base_.edges()) layer_edges_.push_back({e.a, e.b});
        for (const Edge& e : base_.edges()) layer_edges_.push_back({n + e.a, n + e.b});
    }

    const Graph& base() const { return base_; }
    const TransversalSet& transversals() const { return transversals_; }

    int layered_vertex_count() const { return 2 * base_.vertex_count(); }
    int layer_edge_count() const { return static_cast<int>(layer_edges_.size()); }
    const std::vector<std::pair<int, int>>& layer_edges() const { return layer_edges_; }

    int upper(int v) const {
        base_.require_label(v);
        return v;
    }
    int lower(int v) const {
        base_.require_label(v);
        return base_.vertex_count() + v;
    }

    // Exchanges the two layers: v+ <-> v-.
    int mirror(int layered) const { return mirror_vertex(layered, base_.vertex_count()); }

    static int mirror_vertex(int layered, int n) {
        return layered > n ? layered - n : layered + n;
    }

    // Applies all always-open transversal unions to a freshly reset
    // union-find over 1..2n (index 0 unused).
    void apply_transversals(UnionFind& uf) const {
        const int n = base_.vertex_count();
        for (int v : transversals_.members()) uf.unite(v, n + v);
    }

    // Applies the open layer edges of a configuration.
    void apply_configuration(UnionFind& uf, std::uint64_t open_mask) const {
        for (std::uint64_t m = open_mask; m != 0; m &= m - 1) {
            const auto& [a, b] = layer_edges_[std::countr_zero(m)];
            uf.unite(a, b);
        }
    }

private:
    Graph base_;
    TransversalSet transversals_;
    std::vector<std::pair<int, int>> layer_edges_;
};

// True iff layered vertices a and b lie in the same component of the graph
// whose edge set is (open layer edges) union (all transversal edges).
inline bool connected(const BunkbedGraph& bb, const EdgeConfiguration& cfg, int a, int b) {
    if (a == b) return true;
    UnionFind uf(bb.layered_vertex_count() + 1);
    bb.apply_transversals(uf);
    bb.apply_configuration(uf, cfg.open_mask);
    return uf.same(a, b);
}

// The configuration with upper and lower layer bits exchanged.
inline EdgeConfiguration mirrored(const BunkbedGraph& bb, const EdgeConfiguration& cfg) {
    const int half = bb.base().edge_count();
    const std::uint64_t upper_bits = cfg.open_mask & ((half < 64 ? (1ULL << half) : 0ULL) - 1);
    const std::uint64_t lower_bits = cfg.open_mask >> half;
    return {(upper_bits << half) | lower_bits, cfg.edge_count};
}

}  // namespace bunkbed
