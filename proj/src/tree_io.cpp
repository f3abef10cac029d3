#include "freezetree/tree_io.hpp"

#include <ostream>
#include <stdexcept>

namespace freezetree {

using nlohmann::json;

json tree_to_json(const FreezeTree& t) {
  json vertices = json::array();
  for (VertexId v = 0; v < t.size(); ++v) {
    const auto sv = static_cast<std::size_t>(v);
    json entry;
    entry["id"] = v;
    const auto& s = t.status[sv];
    if (s.is_frozen()) {
      entry["status"] = json{{"frozen", s.freeze_time()}};
    } else {
      entry["status"] = "active";
    }
    if (v == t.root) {
      entry["parent"] = nullptr;
      entry["edge_time"] = nullptr;
    } else {
      entry["parent"] = t.parent[sv];
      entry["edge_time"] = t.edge_time[sv];
    }
    vertices.push_back(std::move(entry));
  }
  return json{{"n", t.n}, {"root", t.root}, {"vertices", std::move(vertices)}};
}

FreezeTree tree_from_json(const json& j) {
  FreezeTree t;
  t.n = j.at("n").get<Count>();
  t.root = j.at("root").get<VertexId>();
  const auto& vs = j.at("vertices");
  const auto count = vs.size();
  t.parent.assign(count, kNoVertex);
  t.edge_time.assign(count, 0);
  t.status.assign(count, VertexStatus::active(0));
  std::int32_t next_slot = 0;
  for (const auto& entry : vs) {
    const auto id = entry.at("id").get<VertexId>();
    if (id < 0 || static_cast<std::size_t>(id) >= count) {
      throw std::invalid_argument("vertex id out of range: " + std::to_string(id));
    }
    const auto sid = static_cast<std::size_t>(id);
    const auto& st = entry.at("status");
    if (st.is_string()) {
      if (st.get<std::string>() != "active") throw std::invalid_argument("unknown vertex status");
      t.status[sid] = VertexStatus::active(next_slot++);
    } else {
      t.status[sid] = VertexStatus::frozen(st.at("frozen").get<std::int32_t>());
    }
    if (!entry.at("parent").is_null()) t.parent[sid] = entry.at("parent").get<VertexId>();
    if (!entry.at("edge_time").is_null()) t.edge_time[sid] = entry.at("edge_time").get<std::int32_t>();
  }
  if (!is_well_formed(t)) throw std::invalid_argument("tree JSON does not describe a rooted tree");
  return t;
}

void write_edge_tsv(std::ostream& os, const FreezeTree& t) {
  for (VertexId v = 0; v < t.size(); ++v) {
    if (v == t.root) continue;
    const auto sv = static_cast<std::size_t>(v);
    os << v << '\t' << t.parent[sv] << '\t' << t.edge_time[sv] << '\n';
  }
}

void write_dot(std::ostream& os, const FreezeTree& t) {
  os << "digraph freezetree {\n  node [shape=circle, style=filled];\n";
  for (VertexId v = 0; v < t.size(); ++v) {
    const auto& s = t.status[static_cast<std::size_t>(v)];
    os << "  v" << v;
    if (s.is_frozen()) {
      os << " [label=\"" << s.freeze_time() << "\", fillcolor=\"#7fb3ff\"]";
    } else {
      os << " [label=\"a\", fillcolor=\"#ff8080\"]";
    }
    os << ";\n";
  }
  for (VertexId v = 0; v < t.size(); ++v) {
    if (v == t.root) continue;
    const auto sv = static_cast<std::size_t>(v);
    os << "  v" << t.parent[sv] << " -> v" << v << " [label=\"" << t.edge_time[sv] << "\"];\n";
  }
  os << "}\n";
}

}  // namespace freezetree
