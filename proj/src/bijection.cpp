#include "freezetree/bijection.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace freezetree {

std::int32_t IncreasingBinaryTree::active_leaf_count() const {
  std::int32_t k = 0;
  for (const auto& nd : nodes) k += (nd.is_leaf() && nd.label == 0) ? 1 : 0;
  return k;
}

bool is_increasing_binary(const IncreasingBinaryTree& b) {
  const auto n = b.size();
  if (n == 0 || n % 2 == 0) return false;
  std::vector<std::int8_t> seen_node(static_cast<std::size_t>(n), 0);
  std::unordered_set<std::int32_t> labels;
  // Walk from the root so unreachable nodes and shared children are caught.
  std::vector<std::int32_t> stack{0};
  seen_node[0] = 1;
  std::int32_t reached = 0;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    ++reached;
    const auto& nd = b.nodes[static_cast<std::size_t>(v)];
    if (nd.label < 0) return false;
    if (nd.label > 0 && !labels.insert(nd.label).second) return false;
    if ((nd.left < 0) != (nd.right < 0)) return false;
    if (nd.is_leaf()) continue;
    if (nd.label == 0) return false;
    for (auto c : {nd.left, nd.right}) {
      if (c >= n || seen_node[static_cast<std::size_t>(c)]) return false;
      const auto cl = b.nodes[static_cast<std::size_t>(c)].label;
      if (cl != 0 && cl <= nd.label) return false;
      seen_node[static_cast<std::size_t>(c)] = 1;
      stack.push_back(c);
    }
  }
  return reached == n;
}

IncreasingBinaryTree phi(const FreezeTree& t) {
  if (!has_increasing_labels(t)) throw PreconditionError("phi: tree does not have increasing labels");
  const auto idx = child_index(t);
  IncreasingBinaryTree b;
  b.nodes.reserve(static_cast<std::size_t>(2 * t.size() - 1));

  // Task (v, j): the subtree at v keeping only its children from position j
  // on. Popping left before right yields preorder node ids.
  struct Task {
    VertexId v;
    std::int32_t j;
    std::int32_t parent;
    bool left;
  };
  std::vector<Task> stack{{t.root, 0, -1, false}};
  while (!stack.empty()) {
    const Task task = stack.back();
    stack.pop_back();
    const auto id = b.size();
    if (task.parent >= 0) {
      auto& p = b.nodes[static_cast<std::size_t>(task.parent)];
      (task.left ? p.left : p.right) = id;
    }
    const auto kids = idx.of(task.v);
    IncreasingBinaryTree::Node nd;
    if (task.j == static_cast<std::int32_t>(kids.size())) {
      const auto& s = t.status[static_cast<std::size_t>(task.v)];
      nd.label = s.is_frozen() ? s.freeze_time() : 0;
      b.nodes.push_back(nd);
      continue;
    }
    const VertexId c = kids[static_cast<std::size_t>(task.j)];
    nd.label = t.edge_time[static_cast<std::size_t>(c)];
    b.nodes.push_back(nd);
    stack.push_back({task.v, task.j + 1, id, false});
    stack.push_back({c, 0, id, true});
  }
  return b;
}

FreezeTree psi(const IncreasingBinaryTree& b) {
  if (!is_increasing_binary(b)) throw PreconditionError("psi: not an increasing binary tree");
  const auto n = static_cast<std::size_t>(b.size());

  // Leaves become vertices, numbered in preorder.
  std::vector<VertexId> vertex_of(n, kNoVertex);
  FreezeTree t;
  std::int32_t slot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nd = b.nodes[i];
    if (!nd.is_leaf()) {
      if (nd.label > t.n) t.n = nd.label;
      continue;
    }
    vertex_of[i] = t.size();
    t.parent.push_back(kNoVertex);
    t.edge_time.push_back(0);
    if (nd.label == 0) {
      t.status.push_back(VertexStatus::active(slot++));
    } else {
      t.status.push_back(VertexStatus::frozen(nd.label));
      if (nd.label > t.n) t.n = nd.label;
    }
  }
  // The root of each subtree is its right spine leaf; children have larger
  // preorder ids, so a reverse sweep sees them first.
  std::vector<VertexId> spine(n, kNoVertex);
  for (std::size_t i = n; i-- > 0;) {
    const auto& nd = b.nodes[i];
    if (nd.is_leaf()) {
      spine[i] = vertex_of[i];
      continue;
    }
    const VertexId below = spine[static_cast<std::size_t>(nd.left)];
    const VertexId above = spine[static_cast<std::size_t>(nd.right)];
    t.parent[static_cast<std::size_t>(below)] = above;
    t.edge_time[static_cast<std::size_t>(below)] = nd.label;
    spine[i] = above;
  }
  t.root = spine[0];
  return t;
}

std::string to_string(const IncreasingBinaryTree& b) {
  std::string out;
  auto put = [&](std::int32_t label) {
    if (label == 0) {
      out += 'a';
    } else {
      out += std::to_string(label);
    }
  };
  // Stack entries: node id, or -1 for ',' and -2 for ')'.
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (v == -1) {
      out += ',';
      continue;
    }
    if (v == -2) {
      out += ')';
      continue;
    }
    const auto& nd = b.nodes[static_cast<std::size_t>(v)];
    put(nd.label);
    if (nd.is_leaf()) continue;
    out += '(';
    stack.push_back(-2);
    stack.push_back(nd.right);
    stack.push_back(-1);
    stack.push_back(nd.left);
  }
  return out;
}

IncreasingBinaryTree binary_tree_from_string(std::string_view s) {
  IncreasingBinaryTree b;
  std::size_t pos = 0;
  auto fail = [&](const char* what) {
    throw std::invalid_argument(std::string("malformed binary tree (") + what + ") at offset " +
                                std::to_string(pos) + ": " + std::string(s));
  };
  auto label = [&]() -> std::int32_t {
    if (pos < s.size() && s[pos] == 'a') {
      ++pos;
      return 0;
    }
    std::int32_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), value);
    if (ec != std::errc() || ptr == s.data() + pos) fail("expected label");
    pos = static_cast<std::size_t>(ptr - s.data());
    return value;
  };
  // Open internal nodes and whether their left child is done.
  std::vector<std::pair<std::int32_t, bool>> open;
  for (;;) {
    const auto id = b.size();
    if (!open.empty()) {
      auto& [p, left_done] = open.back();
      (left_done ? b.nodes[static_cast<std::size_t>(p)].right : b.nodes[static_cast<std::size_t>(p)].left) = id;
    }
    b.nodes.push_back({label(), -1, -1});
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      open.emplace_back(id, false);
      continue;
    }
    // Close finished nodes until a right child is due.
    bool more = false;
    while (!open.empty()) {
      auto& [p, left_done] = open.back();
      if (!left_done) {
        if (pos >= s.size() || s[pos] != ',') fail("expected ','");
        ++pos;
        left_done = true;
        more = true;
        break;
      }
      if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
      ++pos;
      open.pop_back();
    }
    if (!more) break;
  }
  if (pos != s.size()) fail("trailing characters");
  return b;
}

nlohmann::json binary_tree_to_json(const IncreasingBinaryTree& b) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::int32_t i = 0; i < b.size(); ++i) {
    const auto& nd = b.nodes[static_cast<std::size_t>(i)];
    nlohmann::json j;
    j["id"] = i;
    if (nd.label == 0) {
      j["label"] = "a";
    } else {
      j["label"] = nd.label;
    }
    j["left"] = nd.left < 0 ? nlohmann::json(nullptr) : nlohmann::json(nd.left);
    j["right"] = nd.right < 0 ? nlohmann::json(nullptr) : nlohmann::json(nd.right);
    nodes.push_back(std::move(j));
  }
  return {{"root", 0}, {"nodes", std::move(nodes)}};
}

IncreasingBinaryTree binary_tree_from_json(const nlohmann::json& j) {
  const auto& nodes = j.at("nodes");
  IncreasingBinaryTree b;
  b.nodes.resize(nodes.size());
  for (const auto& e : nodes) {
    const auto id = e.at("id").get<std::int32_t>();
    if (id < 0 || id >= static_cast<std::int32_t>(nodes.size())) {
      throw std::invalid_argument("binary tree node id out of range");
    }
    auto& nd = b.nodes[static_cast<std::size_t>(id)];
    const auto& label = e.at("label");
    nd.label = label.is_string() ? (label.get<std::string>() == "a" ? 0 : -1) : label.get<std::int32_t>();
    if (nd.label < 0) throw std::invalid_argument("binary tree label must be an integer or \"a\"");
    nd.left = e.at("left").is_null() ? -1 : e.at("left").get<std::int32_t>();
    nd.right = e.at("right").is_null() ? -1 : e.at("right").get<std::int32_t>();
  }
  if (j.value("root", 0) != 0) throw std::invalid_argument("binary tree root must be node 0");
  return b;
}

namespace {

using Nodes = std::vector<IncreasingBinaryTree::Node>;

std::vector<Nodes> binary_with_labels(const std::vector<std::int32_t>& labels, std::int32_t leaves,
                                      std::int32_t actives) {
  std::vector<Nodes> out;
  if (leaves == 1) {
    if (actives == 1 && labels.empty()) out.push_back({{0, -1, -1}});
    if (actives == 0 && labels.size() == 1) out.push_back({{labels[0], -1, -1}});
    return out;
  }
  if (labels.empty()) return out;
  const std::vector<std::int32_t> rest(labels.begin() + 1, labels.end());
  const auto r = static_cast<std::int32_t>(rest.size());
  for (std::int32_t l1 = 1; l1 < leaves; ++l1) {
    const std::int32_t l2 = leaves - l1;
    for (std::int32_t k1 = 0; k1 <= std::min(actives, l1); ++k1) {
      const std::int32_t k2 = actives - k1;
      if (k2 > l2) continue;
      const std::int32_t need = 2 * l1 - k1 - 1;
      if (need < 0 || need > r || 2 * l2 - k2 - 1 != r - need) continue;
      // Every subset of `rest` of size `need` goes left.
      std::vector<char> pick(static_cast<std::size_t>(r), 0);
      std::fill(pick.begin(), pick.begin() + need, 1);
      do {
        std::vector<std::int32_t> left, right;
        for (std::int32_t i = 0; i < r; ++i) (pick[static_cast<std::size_t>(i)] ? left : right).push_back(rest[static_cast<std::size_t>(i)]);
        const auto ls = binary_with_labels(left, l1, k1);
        if (ls.empty()) continue;
        const auto rs = binary_with_labels(right, l2, k2);
        for (const auto& a : ls) {
          for (const auto& c : rs) {
            Nodes t;
            t.reserve(1 + a.size() + c.size());
            const auto la = static_cast<std::int32_t>(a.size());
            t.push_back({labels[0], 1, 1 + la});
            auto shifted = [&t](const Nodes& part, std::int32_t by) {
              for (auto nd : part) {
                if (!nd.is_leaf()) {
                  nd.left += by;
                  nd.right += by;
                }
                t.push_back(nd);
              }
            };
            shifted(a, 1);
            shifted(c, 1 + la);
            out.push_back(std::move(t));
          }
        }
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
  }
  return out;
}

}  // namespace

std::vector<IncreasingBinaryTree> enumerate_increasing_binary(std::int32_t leaves, std::int32_t actives) {
  if (leaves < 1 || actives < 0 || actives > leaves) {
    throw PreconditionError("enumerate_increasing_binary: need 0 <= actives <= leaves, leaves >= 1");
  }
  std::vector<std::int32_t> labels(static_cast<std::size_t>(2 * leaves - actives - 1));
  std::iota(labels.begin(), labels.end(), 1);
  std::vector<IncreasingBinaryTree> out;
  for (auto& nodes : binary_with_labels(labels, leaves, actives)) out.push_back({std::move(nodes)});
  return out;
}

std::vector<SignSequence> sequences_ending_at(std::int32_t m, std::int32_t k) {
  std::vector<SignSequence> out;
  if (m < 0 || k < 0) return out;
  SignSequence x;
  std::vector<int> signs;
  // s: walk height after the signs chosen so far.
  auto rec = [&](auto&& self, std::int32_t s) -> void {
    const auto i = static_cast<std::int32_t>(signs.size());
    if (i == m) {
      if (s == k) out.emplace_back(std::span<const int>(signs));
      return;
    }
    if (s == 0) return;
    const std::int32_t left = m - i - 1;
    for (int sign : {1, -1}) {
      const std::int32_t next = s + sign;
      if (std::abs(next - k) > left) continue;
      signs.push_back(sign);
      self(self, next);
      signs.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

std::vector<std::string> enumerate_increasing_trees(std::int32_t vertices, std::int32_t actives,
                                                    std::int64_t cap) {
  if (vertices < 1 || actives < 0 || actives > vertices) {
    throw PreconditionError("enumerate_increasing_trees: need 0 <= actives <= vertices, vertices >= 1");
  }
  const std::int32_t m = 2 * vertices - actives - 1;
  std::vector<std::string> keys;
  for (const auto& x : sequences_ending_at(m, actives)) {
    for_each_attach_outcome(x, m, [&](const FreezeTree& t) { keys.push_back(canonical_form(t)); }, cap);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

namespace {

// For trees whose labels fit in four bits: slot `label` holds the incoming
// edge label of the vertex that owns it (the parent, for an edge label).
std::uint64_t packed_key(const FreezeTree& t) {
  std::uint64_t key = 0;
  auto put = [&](std::int32_t slot, std::int32_t value) {
    key |= static_cast<std::uint64_t>(value) << (4 * (slot - 1));
  };
  for (VertexId v = 0; v < t.size(); ++v) {
    const auto sv = static_cast<std::size_t>(v);
    const std::int32_t own = v == t.root ? 0 : t.edge_time[sv];
    if (v != t.root) {
      const VertexId p = t.parent[sv];
      put(own, p == t.root ? 0 : t.edge_time[static_cast<std::size_t>(p)]);
    }
    if (t.status[sv].is_frozen()) put(t.status[sv].freeze_time(), own);
  }
  return key;
}

}  // namespace

BigInt count_t0n_exhaustive(std::int32_t n, std::int32_t max_n) {
  if (max_n > 8) throw PreconditionError("count_t0n_exhaustive: max_n above 8");
  if (n < 1 || n > max_n) {
    throw CapExceeded("count_t0n_exhaustive: n must lie in [1, " + std::to_string(max_n) + "]");
  }
  const std::int32_t m = 2 * n - 1;
  BigInt total = 0;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& x : sequences_ending_at(m, 0)) {
    // Label sets are fixed by x, so distinct sequences give disjoint trees.
    seen.clear();
    for_each_attach_outcome(x, m, [&](const FreezeTree& t) { seen.insert(packed_key(t)); },
                            std::numeric_limits<std::int64_t>::max());
    total += seen.size();
  }
  return total;
}

std::vector<BigInt> tangent_numbers(std::int32_t count) {
  std::vector<BigInt> out;
  if (count <= 0) return out;
  const std::int32_t rows = 2 * count;
  std::vector<BigInt> prev{1};
  for (std::int32_t r = 1; r < rows; ++r) {
    std::vector<BigInt> row(static_cast<std::size_t>(r) + 1);
    row[0] = 0;
    for (std::int32_t k = 1; k <= r; ++k) {
      row[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k - 1)] + prev[static_cast<std::size_t>(r - k)];
    }
    if (r % 2 == 1) out.push_back(row.back());
    prev = std::move(row);
  }
  return out;
}

BigInt count_t0n(std::int32_t n) {
  if (n < 1) throw PreconditionError("count_t0n: n must be at least 1");
  return tangent_numbers(n).back();
}

}  // namespace freezetree
