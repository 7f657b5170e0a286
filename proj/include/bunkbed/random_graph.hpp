#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "bunkbed/errors.hpp"
#include "bunkbed/graph.hpp"
#include "bunkbed/rng.hpp"

namespace bunkbed {

// Decodes a Pruefer sequence over an arbitrary label set. labels must be
// strictly increasing; seq entries are indices 1..s into labels, where
// s = labels.size() >= 2 and seq.size() == s - 2.
inline std::vector<std::pair<int, int>> prufer_decode(const std::vector<int>& labels,
                                                      const std::vector<int>& seq) {
    const int s = static_cast<int>(labels.size());
    std::vector<std::pair<int, int>> edges;
    edges.reserve(s - 1);

    std::vector<int> degree(s + 1, 1);
    for (int x : seq) ++degree[x];

    int ptr = 1;
    while (degree[ptr] != 1) ++ptr;
    int leaf = ptr;
    for (int x : seq) {
        edges.push_back({labels[leaf - 1], labels[x - 1]});
        if (--degree[x] == 1 && x < ptr) {
            leaf = x;
        } else {
            ++ptr;
            while (degree[ptr] != 1) ++ptr;
            leaf = ptr;
        }
    }
    edges.push_back({labels[leaf - 1], labels[s - 1]});
    return edges;
}

namespace detail {

inline std::vector<std::pair<int, int>> random_tree_edges(const std::vector<int>& labels,
                                                          SplitMix64& rng) {
    const int s = static_cast<int>(labels.size());
    if (s < 2) return {};
    std::vector<int> seq(s >= 2 ? s - 2 : 0);
    for (int& x : seq) x = 1 + static_cast<int>(rng.next_below(s));
    return prufer_decode(labels, seq);
}

}  // namespace detail

// Uniformly random labeled tree on 1..n (Pruefer sequences are uniform over
// [n]^(n-2)); pure function of the seed.
inline Forest random_tree(int n, std::uint64_t seed) {
    if (n < 1) throw Error(errc::invalid_parameters, "random_tree needs n >= 1");
    SplitMix64 rng(seed);
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 1);
    return Forest(Graph::validate(n, detail::random_tree_edges(labels, rng)));
}

// Random labeled forest with exactly k components: the part sizes follow a
// uniform random composition of n into k positive parts, the labels are a
// uniform random partition into those sizes, and each part carries a uniform
// labeled tree. This is not uniform over all forests with k components; the
// verification sweeps only need diverse deterministic instances.
inline Forest random_forest(int n, int k, std::uint64_t seed) {
    if (n < 1 || k < 1 || k > n)
        throw Error(errc::invalid_parameters,
                    "random_forest needs 1 <= k <= n, got n=" + std::to_string(n) +
                        " k=" + std::to_string(k));
    SplitMix64 rng(seed);

    // Cut positions: a uniform (k-1)-subset of {1..n-1} via partial shuffle.
    std::vector<int> positions(n - 1);
    std::iota(positions.begin(), positions.end(), 1);
    for (int i = 0; i < k - 1; ++i) {
        int j = i + static_cast<int>(rng.next_below(positions.size() - i));
        std::swap(positions[i], positions[j]);
    }
    std::vector<int> cuts(positions.begin(), positions.begin() + (k - 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(n);

    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 1);
    for (int i = 0; i < n - 1; ++i) {
        int j = i + static_cast<int>(rng.next_below(n - i));
        std::swap(labels[i], labels[j]);
    }

    std::vector<std::pair<int, int>> edges;
    int start = 0;
    for (int cut : cuts) {
        std::vector<int> part(labels.begin() + start, labels.begin() + cut);
        std::sort(part.begin(), part.end());
        auto part_edges = detail::random_tree_edges(part, rng);
        edges.insert(edges.end(), part_edges.begin(), part_edges.end());
        start = cut;
    }
    return Forest(Graph::validate(n, edges));
}

// All n^(n-2) labeled trees on 1..n in Pruefer-sequence order.
inline std::vector<Graph> all_labeled_trees(int n) {
    if (n < 1) throw Error(errc::invalid_parameters, "all_labeled_trees needs n >= 1");
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 1);
    std::vector<Graph> trees;
    if (n <= 2) {
        trees.push_back(n == 1 ? Graph::validate(1, {}) : path_graph(2));
        return trees;
    }
    std::vector<int> seq(n - 2, 1);
    while (true) {
        trees.push_back(Graph::validate(n, prufer_decode(labels, seq)));
        int i = static_cast<int>(seq.size()) - 1;
        while (i >= 0 && seq[i] == n) seq[i--] = 1;
        if (i < 0) break;
        ++seq[i];
    }
    return trees;
}

}  // namespace bunkbed
