#include "freezetree/tree.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <unordered_set>

namespace freezetree {

Count FreezeTree::active_count() const {
  return std::count_if(status.begin(), status.end(),
                       [](const VertexStatus& s) { return s.is_active(); });
}

FreezeTree FreezeTree::single_active() {
  FreezeTree t;
  t.parent = {kNoVertex};
  t.status = {VertexStatus::active(0)};
  t.edge_time = {0};
  return t;
}

ChildIndex child_index(const FreezeTree& t) {
  const auto n = static_cast<std::size_t>(t.size());
  ChildIndex idx;
  idx.offset.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (t.parent[v] != kNoVertex) ++idx.offset[static_cast<std::size_t>(t.parent[v]) + 1];
  }
  for (std::size_t v = 0; v < n; ++v) idx.offset[v + 1] += idx.offset[v];
  idx.child.resize(n == 0 ? 0 : static_cast<std::size_t>(idx.offset[n]));
  std::vector<VertexId> fill(idx.offset.begin(), idx.offset.end() - 1);
  for (std::size_t v = 0; v < n; ++v) {
    if (t.parent[v] != kNoVertex) {
      idx.child[static_cast<std::size_t>(fill[static_cast<std::size_t>(t.parent[v])]++)] =
          static_cast<VertexId>(v);
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = idx.child.begin() + idx.offset[v];
    auto last = idx.child.begin() + idx.offset[v + 1];
    if (last - first > 1) {
      std::sort(first, last, [&](VertexId a, VertexId b) {
        return t.edge_time[static_cast<std::size_t>(a)] < t.edge_time[static_cast<std::size_t>(b)];
      });
    }
  }
  return idx;
}

std::vector<std::int32_t> vertex_depths(const FreezeTree& t) {
  const auto n = static_cast<std::size_t>(t.size());
  std::vector<std::int32_t> depth(n, -1);
  if (n == 0) return depth;
  // Parents usually precede children; fall back to a BFS otherwise.
  bool ordered = t.root == 0;
  for (std::size_t v = 1; ordered && v < n; ++v) {
    ordered = t.parent[v] >= 0 && static_cast<std::size_t>(t.parent[v]) < v;
  }
  if (ordered) {
    depth[0] = 0;
    for (std::size_t v = 1; v < n; ++v) depth[v] = depth[static_cast<std::size_t>(t.parent[v])] + 1;
    return depth;
  }
  const auto idx = child_index(t);
  std::vector<VertexId> queue;
  queue.reserve(n);
  queue.push_back(t.root);
  depth[static_cast<std::size_t>(t.root)] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (VertexId c : idx.of(v)) {
      depth[static_cast<std::size_t>(c)] = depth[static_cast<std::size_t>(v)] + 1;
      queue.push_back(c);
    }
  }
  return depth;
}

std::int32_t tree_height(const FreezeTree& t) {
  const auto d = vertex_depths(t);
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

std::int32_t tree_distance(const FreezeTree& t, std::span<const std::int32_t> depth,
                           VertexId u, VertexId v) {
  std::int32_t dist = 0;
  while (depth[static_cast<std::size_t>(u)] > depth[static_cast<std::size_t>(v)]) {
    u = t.parent[static_cast<std::size_t>(u)];
    ++dist;
  }
  while (depth[static_cast<std::size_t>(v)] > depth[static_cast<std::size_t>(u)]) {
    v = t.parent[static_cast<std::size_t>(v)];
    ++dist;
  }
  while (u != v) {
    u = t.parent[static_cast<std::size_t>(u)];
    v = t.parent[static_cast<std::size_t>(v)];
    dist += 2;
  }
  return dist;
}

bool is_well_formed(const FreezeTree& t) {
  const auto n = t.size();
  if (n == 0) return false;
  if (t.status.size() != t.parent.size() || t.edge_time.size() != t.parent.size()) return false;
  if (t.root < 0 || t.root >= n || t.parent[static_cast<std::size_t>(t.root)] != kNoVertex) return false;
  for (VertexId v = 0; v < n; ++v) {
    const auto p = t.parent[static_cast<std::size_t>(v)];
    if (v != t.root && (p < 0 || p >= n)) return false;
  }
  // Every vertex reaches the root: mark by climbing, memoising success.
  std::vector<std::int8_t> state(static_cast<std::size_t>(n), 0);  // 0 unseen, 1 on path, 2 ok
  state[static_cast<std::size_t>(t.root)] = 2;
  std::vector<VertexId> path;
  for (VertexId v = 0; v < n; ++v) {
    VertexId u = v;
    path.clear();
    while (state[static_cast<std::size_t>(u)] == 0) {
      state[static_cast<std::size_t>(u)] = 1;
      path.push_back(u);
      u = t.parent[static_cast<std::size_t>(u)];
    }
    if (state[static_cast<std::size_t>(u)] == 1) return false;
    for (VertexId w : path) state[static_cast<std::size_t>(w)] = 2;
  }
  return true;
}

bool has_increasing_labels(const FreezeTree& t) {
  if (!is_well_formed(t)) return false;
  std::unordered_set<std::int32_t> seen;
  auto fresh = [&](std::int32_t label) { return label > 0 && seen.insert(label).second; };
  for (VertexId v = 0; v < t.size(); ++v) {
    const auto sv = static_cast<std::size_t>(v);
    if (v != t.root) {
      const std::int32_t e = t.edge_time[sv];
      if (!fresh(e)) return false;
      const VertexId p = t.parent[sv];
      if (p != t.root && t.edge_time[static_cast<std::size_t>(p)] >= e) return false;
      // A frozen parent must carry a label above each of its edges.
      const auto& ps = t.status[static_cast<std::size_t>(p)];
      if (ps.is_frozen() && ps.freeze_time() <= e) return false;
    }
    const auto& s = t.status[sv];
    if (s.is_frozen()) {
      if (!fresh(s.freeze_time())) return false;
      if (v != t.root && s.freeze_time() <= t.edge_time[sv]) return false;
    }
  }
  return true;
}

namespace {

std::string serialize(const FreezeTree& t, bool keep_slots) {
  const auto idx = child_index(t);
  std::string out;
  out.reserve(static_cast<std::size_t>(t.size()) * 6);
  auto put_vertex = [&](VertexId v) {
    const auto& s = t.status[static_cast<std::size_t>(v)];
    if (s.is_frozen()) {
      out += std::to_string(s.freeze_time());
    } else {
      out += 'a';
      if (keep_slots) out += std::to_string(s.slot() + 1);
    }
  };
  // Explicit stack of (vertex, next child position).
  std::vector<std::pair<VertexId, VertexId>> stack;
  put_vertex(t.root);
  stack.emplace_back(t.root, 0);
  while (!stack.empty()) {
    auto& [v, pos] = stack.back();
    const auto kids = idx.of(v);
    if (pos == static_cast<VertexId>(kids.size())) {
      if (!kids.empty()) out += ')';
      stack.pop_back();
      continue;
    }
    out += pos == 0 ? '(' : ',';
    const VertexId c = kids[static_cast<std::size_t>(pos)];
    ++pos;
    out += std::to_string(t.edge_time[static_cast<std::size_t>(c)]);
    out += ':';
    put_vertex(c);
    stack.emplace_back(c, 0);
  }
  return out;
}

class KeyParser {
 public:
  explicit KeyParser(std::string_view key) : key_(key) {}

  // tree := vertex [ '(' edge ':' tree { ',' edge ':' tree } ')' ]
  FreezeTree parse() {
    std::int32_t slot_counter = 0;
    tree_.root = vertex(kNoVertex, 0, slot_counter);
    std::vector<VertexId> open;
    VertexId current = tree_.root;
    for (;;) {
      if (peek() == '(') {
        ++pos_;
        open.push_back(current);
        current = child(open.back(), slot_counter);
        continue;
      }
      bool next_child = false;
      while (!open.empty() && !next_child) {
        if (peek() == ',') {
          ++pos_;
          current = child(open.back(), slot_counter);
          next_child = true;
        } else if (peek() == ')') {
          ++pos_;
          open.pop_back();
        } else {
          fail("expected ',' or ')'");
        }
      }
      if (!next_child) break;
    }
    if (pos_ != key_.size()) fail("trailing characters");
    for (const auto& s : tree_.status) {
      if (s.is_frozen()) tree_.n = std::max<Count>(tree_.n, s.freeze_time());
    }
    for (auto e : tree_.edge_time) tree_.n = std::max<Count>(tree_.n, e);
    return std::move(tree_);
  }

 private:
  [[noreturn]] void fail(const char* what) const {
    throw std::invalid_argument(std::string("malformed tree key (") + what + ") at offset " +
                                std::to_string(pos_) + ": " + std::string(key_));
  }

  void expect(char c) {
    if (pos_ >= key_.size() || key_[pos_] != c) fail("expected separator");
    ++pos_;
  }

  char peek() const { return pos_ < key_.size() ? key_[pos_] : '\0'; }

  VertexId child(VertexId parent, std::int32_t& slot_counter) {
    const std::int32_t e = number();
    expect(':');
    return vertex(parent, e, slot_counter);
  }

  std::int32_t number() {
    std::int32_t value = 0;
    auto [ptr, ec] = std::from_chars(key_.data() + pos_, key_.data() + key_.size(), value);
    if (ec != std::errc() || ptr == key_.data() + pos_) fail("expected integer");
    pos_ = static_cast<std::size_t>(ptr - key_.data());
    return value;
  }

  VertexId vertex(VertexId parent, std::int32_t edge, std::int32_t& slot_counter) {
    const auto id = static_cast<VertexId>(tree_.parent.size());
    tree_.parent.push_back(parent);
    tree_.edge_time.push_back(edge);
    if (pos_ < key_.size() && key_[pos_] == 'a') {
      ++pos_;
      std::int32_t slot = slot_counter++;
      if (pos_ < key_.size() && key_[pos_] >= '0' && key_[pos_] <= '9') slot = number() - 1;
      tree_.status.push_back(VertexStatus::active(slot));
    } else {
      tree_.status.push_back(VertexStatus::frozen(number()));
    }
    return id;
  }

  std::string_view key_;
  std::size_t pos_ = 0;
  FreezeTree tree_;
};

}  // namespace

std::string canonical_form(const FreezeTree& t) { return serialize(t, false); }

std::string labelled_form(const FreezeTree& t) { return serialize(t, true); }

FreezeTree tree_from_canonical(std::string_view key) { return KeyParser(key).parse(); }

}  // namespace freezetree
