#include "freezetree/attach.hpp"

#include <algorithm>
#include <array>

namespace freezetree {

namespace {

constexpr Count kAhead = 32;
constexpr std::size_t kRing = 64;

void require_enumerable(const WalkProfile& w, Count n, const char* what) {
  if (n < 0 || n > w.horizon()) {
    throw PreconditionError(std::string(what) + ": horizon outside the sequence");
  }
  for (Count i = 0; i < n; ++i) {
    if (w.at(i) <= 0) {
      throw PreconditionError(std::string(what) + ": walk absorbed before step " +
                              std::to_string(n));
    }
  }
}

void assign_slots(FreezeTree& t, const std::vector<VertexId>& active) {
  for (std::size_t j = 0; j < active.size(); ++j) {
    t.status[static_cast<std::size_t>(active[j])] = VertexStatus::active(static_cast<std::int32_t>(j));
  }
}

}  // namespace

FreezeTree build_attach(const SignSequence& x, Count n, Rng& rng) {
  if (n < 0 || n > x.size()) throw std::invalid_argument("build_attach: n outside the sequence");
  Count plus = 0, last = 0;
  for (std::int64_t s = 1; last < n && s > 0;) {
    ++last;
    s += x.step(last);
    plus += x.is_plus(last) ? 1 : 0;
  }

  FreezeTree t;
  const auto capacity = static_cast<std::size_t>(plus + 1);
  t.parent.reserve(capacity);
  t.status.reserve(capacity);
  t.edge_time.reserve(capacity);
  t.parent.push_back(kNoVertex);
  t.status.push_back(VertexStatus::active(0));
  t.edge_time.push_back(0);

  std::vector<VertexId> active;
  active.reserve(capacity);
  active.push_back(0);

  // Slots are drawn kAhead steps before they are used so the cache lines
  // they touch can be prefetched. The bound at every step is S_{i-1}, known
  // from x, so the stream is consumed in the same order as a plain loop.
  std::array<std::uint32_t, kRing> ring{};
  Count drawn = 0;
  std::int64_t s_draw = 1;
  auto draw_next = [&] {
    ++drawn;
    ring[static_cast<std::size_t>(drawn) & (kRing - 1)] =
        static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(s_draw)));
    s_draw += x.step(drawn);
  };
  while (drawn < std::min<Count>(last, kAhead)) draw_next();

  for (Count i = 1; i <= last; ++i) {
    if (drawn < last) {
      draw_next();
      __builtin_prefetch(active.data() + ring[static_cast<std::size_t>(drawn) & (kRing - 1)]);
    }
    const Count m = i + kAhead / 2;
    if (m <= drawn && !x.is_plus(m)) {
      const auto jm = ring[static_cast<std::size_t>(m) & (kRing - 1)];
      if (jm < active.size()) __builtin_prefetch(t.status.data() + active[jm], 1);
    }
    const auto j = ring[static_cast<std::size_t>(i) & (kRing - 1)];
    const VertexId v = active[j];
    if (x.is_plus(i)) {
      const auto w = static_cast<VertexId>(t.parent.size());
      t.parent.push_back(v);
      t.status.push_back(VertexStatus::active(0));
      t.edge_time.push_back(static_cast<std::int32_t>(i));
      active.push_back(w);
    } else {
      t.status[static_cast<std::size_t>(v)] = VertexStatus::frozen(static_cast<std::int32_t>(i));
      active[j] = active.back();
      active.pop_back();
    }
  }
  t.n = last;
  assign_slots(t, active);
  return t;
}

Rational tree_probability(const SignSequence& x, Count n) {
  const auto w = compute_walk(x);
  require_enumerable(w, n, "tree_probability");
  BigInt denom = 1;
  for (Count i = 1; i <= n; ++i) denom *= w.at(i - 1);
  return Rational(BigInt(1), denom);
}

BigInt attainable_count(const SignSequence& x, Count n) {
  const auto w = compute_walk(x);
  require_enumerable(w, n, "attainable_count");
  BigInt total = 1;
  for (Count i = 1; i <= n; ++i) total *= w.at(i - 1);
  return total;
}

bool is_attainable(const FreezeTree& t, const SignSequence& x, Count n) {
  if (n < 0 || n > x.size()) return false;
  const auto w = compute_walk(x);
  const Count m = (w.tau && *w.tau < n) ? *w.tau : n;
  if (!is_well_formed(t)) return false;
  if (t.size() != w.vertex_count(m) || t.active_count() != w.at(m)) return false;
  // Label sets: edges are exactly the plus steps, frozen labels the minus steps.
  std::vector<std::int8_t> used(static_cast<std::size_t>(m) + 1, 0);
  auto claim = [&](std::int32_t label, bool plus) {
    if (label < 1 || label > m) return false;
    if (used[static_cast<std::size_t>(label)] || x.is_plus(label) != plus) return false;
    used[static_cast<std::size_t>(label)] = 1;
    return true;
  };
  for (VertexId v = 0; v < t.size(); ++v) {
    const auto sv = static_cast<std::size_t>(v);
    if (v != t.root && !claim(t.edge_time[sv], true)) return false;
    if (t.status[sv].is_frozen() && !claim(t.status[sv].freeze_time(), false)) return false;
  }
  return has_increasing_labels(t);
}

namespace {

class AttachExpansion {
 public:
  AttachExpansion(const SignSequence& x, Count n, const std::function<void(const FreezeTree&)>& visit)
      : x_(x), n_(n), visit_(visit) {
    tree_.parent.push_back(kNoVertex);
    tree_.status.push_back(VertexStatus::active(0));
    tree_.edge_time.push_back(0);
    tree_.n = n;
    active_.push_back(0);
  }

  void run() { expand(1); }

 private:
  void expand(Count i) {
    if (i > n_) {
      assign_slots(tree_, active_);
      visit_(tree_);
      return;
    }
    const std::size_t choices = active_.size();
    for (std::size_t j = 0; j < choices; ++j) {
      const VertexId v = active_[j];
      if (x_.is_plus(i)) {
        const auto w = static_cast<VertexId>(tree_.parent.size());
        tree_.parent.push_back(v);
        tree_.status.push_back(VertexStatus::active(0));
        tree_.edge_time.push_back(static_cast<std::int32_t>(i));
        active_.push_back(w);
        expand(i + 1);
        active_.pop_back();
        tree_.parent.pop_back();
        tree_.status.pop_back();
        tree_.edge_time.pop_back();
      } else {
        const auto saved = tree_.status[static_cast<std::size_t>(v)];
        tree_.status[static_cast<std::size_t>(v)] = VertexStatus::frozen(static_cast<std::int32_t>(i));
        std::swap(active_[j], active_.back());
        active_.pop_back();
        expand(i + 1);
        active_.push_back(v);
        std::swap(active_[j], active_.back());
        tree_.status[static_cast<std::size_t>(v)] = saved;
      }
    }
  }

  const SignSequence& x_;
  Count n_;
  const std::function<void(const FreezeTree&)>& visit_;
  FreezeTree tree_;
  std::vector<VertexId> active_;
};

}  // namespace

void for_each_attach_outcome(const SignSequence& x, Count n,
                             const std::function<void(const FreezeTree&)>& visit,
                             std::int64_t cap) {
  if (attainable_count(x, n) > cap) {
    throw CapExceeded("forward expansion has more than " + std::to_string(cap) + " branches");
  }
  AttachExpansion(x, n, visit).run();
}

std::vector<EnumeratedTree> enumerate_trees(const SignSequence& x, Count n, std::int64_t cap) {
  const Rational p = tree_probability(x, n);
  std::vector<EnumeratedTree> out;
  for_each_attach_outcome(
      x, n, [&](const FreezeTree& t) { out.push_back({canonical_form(t), p}); }, cap);
  std::sort(out.begin(), out.end(),
            [](const EnumeratedTree& a, const EnumeratedTree& b) { return a.key < b.key; });
  // Branches map to distinct trees; equal keys are merged so that a collision
  // shows up as a probability mismatch.
  std::vector<EnumeratedTree> merged;
  for (auto& e : out) {
    if (!merged.empty() && merged.back().key == e.key) {
      merged.back().probability += e.probability;
    } else {
      merged.push_back(std::move(e));
    }
  }
  return merged;
}

}  // namespace freezetree
