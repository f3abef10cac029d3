#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "freezetree/tree.hpp"

namespace freezetree {

// {n, root, vertices: [{id, status: "active" | {"frozen": t}, parent, edge_time}]}
// with parent and edge_time null for the root.
nlohmann::json tree_to_json(const FreezeTree& t);
FreezeTree tree_from_json(const nlohmann::json& j);

// child<TAB>parent<TAB>edge_time, one line per non-root vertex.
void write_edge_tsv(std::ostream& os, const FreezeTree& t);

// Graphviz digraph; frozen vertices are filled blue and labelled with their
// freeze time, active vertices are red and labelled "a".
void write_dot(std::ostream& os, const FreezeTree& t);

}  // namespace freezetree
