#pragma once

#include <optional>

#include "bunkbed/bunkbed_graph.hpp"
#include "bunkbed/graph.hpp"

namespace bunkbed {

// One problem instance as carried by instance files: a base graph with an
// optional transversal set and optional terminals (subcommands differ in
// which parts they require).
struct Instance {
    Graph graph;
    std::optional<TransversalSet> h;
    std::optional<int> u;
    std::optional<int> v;
};

}  // namespace bunkbed
