#pragma once

#include <numeric>
#include <utility>
#include <vector>

namespace bunkbed {

// Disjoint-set forest with path halving and union by size. Enumeration loops
// reuse one instance per worker; reset() and reset_from() avoid reallocation.
class UnionFind {
public:
    UnionFind() = default;
    explicit UnionFind(int n) { reset(n); }

    void reset(int n) {
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), 0);
        size_.assign(n, 1);
        components_ = n;
    }

    // Restores the partition of `base` (used to snapshot the always-open
    // transversal unions once and replay them for every configuration).
    void reset_from(const UnionFind& base) {
        parent_ = base.parent_;
        size_ = base.size_;
        components_ = base.components_;
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --components_;
        return true;
    }

    bool same(int a, int b) { return find(a) == find(b); }

    int components() const { return components_; }
    int element_count() const { return static_cast<int>(parent_.size()); }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
    int components_ = 0;
};

}  // namespace bunkbed
