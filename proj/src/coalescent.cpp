#include "freezetree/coalescent.hpp"

#include <array>
#include <numeric>
#include <stdexcept>

namespace freezetree {

namespace {

constexpr int kAhead = 32;
constexpr std::size_t kRing = 64;

void require_survival(const WalkProfile& w, Count n, const char* what) {
  if (n < 0 || n > w.horizon()) throw PreconditionError(std::string(what) + ": n outside the sequence");
  if (!w.survives(n)) throw PreconditionError(std::string(what) + ": requires tau > n");
}

// S_n after checking tau > n, without storing the walk.
Count final_height(const SignSequence& x, Count n, const char* what) {
  if (n < 0 || n > x.size()) throw PreconditionError(std::string(what) + ": n outside the sequence");
  Count s = 1;
  for (Count i = 1; i <= n; ++i) {
    s += x.step(i);
    if (s <= 0) throw PreconditionError(std::string(what) + ": requires tau > n");
  }
  return s;
}

// Vertex ids are fixed by x alone: actives first, then frozen labels in
// decreasing order. Fills statuses, births and an empty parent array.
CoalescentBuild skeleton(const SignSequence& x, Count n, Count sn) {
  CoalescentBuild b;
  const auto total = static_cast<std::size_t>((sn + n + 1) / 2);
  auto& t = b.tree;
  t.n = n;
  t.root = 0;
  t.parent.assign(total, kNoVertex);
  t.edge_time.assign(total, 0);
  t.status.reserve(total);
  b.birth.reserve(total);
  for (Count j = 0; j < sn; ++j) {
    t.status.push_back(VertexStatus::active(static_cast<std::int32_t>(j)));
    b.birth.push_back(static_cast<std::int32_t>(n));
  }
  for (Count i = n; i >= 1; --i) {
    if (!x.is_plus(i)) {
      t.status.push_back(VertexStatus::frozen(static_cast<std::int32_t>(i)));
      b.birth.push_back(static_cast<std::int32_t>(birth_of_frozen(static_cast<std::int32_t>(i))));
    }
  }
  return b;
}

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  VertexId find(VertexId v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      auto& p = parent_[static_cast<std::size_t>(v)];
      p = parent_[static_cast<std::size_t>(p)];
      v = p;
    }
    return v;
  }

  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<VertexId> parent_;
};

BigInt choose2(std::int32_t s) { return BigInt(s) * (s - 1) / 2; }

}  // namespace

CoalescentBuild build_coalescent(const SignSequence& x, Count n, Rng& rng) {
  const Count s_n = final_height(x, n, "build_coalescent");
  CoalescentBuild b = skeleton(x, n, s_n);
  auto& t = b.tree;

  std::vector<VertexId> pool;  // roots of the current forest
  pool.reserve(static_cast<std::size_t>(t.size()));
  const auto sn = static_cast<VertexId>(s_n);
  for (VertexId j = 0; j < sn; ++j) pool.push_back(j);
  b.merge_log.reserve(static_cast<std::size_t>(t.size()));

  // Ordered pairs are drawn kAhead merges early so that the pool entries
  // and parent slots they touch can be prefetched. Pool sizes at each merge
  // are S_i, known from x, and the draws keep their order.
  struct Draw {
    std::uint32_t j, k;
  };
  std::array<Draw, kRing> ring{};
  std::int64_t drawn = 0, used = 0;
  Count cursor = n, s_cursor = s_n;  // s_cursor = S_cursor
  auto draw_next = [&] {
    for (; cursor >= 1 && !x.is_plus(cursor); --cursor) ++s_cursor;
    if (cursor < 1) return false;
    const auto s = static_cast<std::uint64_t>(s_cursor--);
    const auto j = rng.below(s);
    auto k = rng.below(s - 1);
    if (k >= j) ++k;
    ring[static_cast<std::size_t>(drawn) & (kRing - 1)] = {static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(k)};
    --cursor;
    ++drawn;
    return true;
  };
  for (int a = 0; a < kAhead && draw_next(); ++a) {
  }

  VertexId next_frozen = sn;
  for (Count i = n; i >= 1; --i) {
    if (!x.is_plus(i)) {
      pool.push_back(next_frozen++);
      continue;
    }
    if (draw_next()) {
      const auto& d = ring[static_cast<std::size_t>(drawn - 1) & (kRing - 1)];
      __builtin_prefetch(pool.data() + d.j, 1);
      __builtin_prefetch(pool.data() + d.k);
    }
    if (used + kAhead / 2 < drawn) {
      const auto& d = ring[static_cast<std::size_t>(used + kAhead / 2) & (kRing - 1)];
      if (d.k < pool.size()) {
        const auto r = static_cast<std::size_t>(pool[d.k]);
        __builtin_prefetch(t.parent.data() + r, 1);
        __builtin_prefetch(t.edge_time.data() + r, 1);
      }
    }
    const auto [j, k] = ring[static_cast<std::size_t>(used++) & (kRing - 1)];
    const VertexId r1 = pool[j];
    const VertexId r2 = pool[k];
    t.parent[static_cast<std::size_t>(r2)] = r1;
    t.edge_time[static_cast<std::size_t>(r2)] = static_cast<std::int32_t>(i);
    pool[k] = pool.back();
    pool.pop_back();
    b.merge_log.push_back({static_cast<std::int32_t>(i), r1, r2});
  }
  if (pool.size() != 1) throw std::logic_error("growth-coalescent did not end with a single tree");
  t.root = pool.front();
  return b;
}

Rational birth_time_cdf(const WalkProfile& w, Count n, Count m) {
  if (n < 1 || n > w.horizon() || (w.tau && *w.tau < n)) {
    throw PreconditionError("birth_time_cdf: requires 1 <= n <= tau");
  }
  if (m < 1 || m > n) throw PreconditionError("birth_time_cdf: requires 1 <= m <= n");
  return Rational(BigInt(m + 1 - w.at(m)), BigInt(n + 1 + w.at(n)));
}

Rational coalescence_pmf(const WalkProfile& w, Count n, Count bu, Count bv, Count c) {
  require_survival(w, n, "coalescence_pmf");
  if (bu < 0 || bv < 0 || bu > n || bv > n) throw PreconditionError("coalescence_pmf: birth outside [0, n]");
  const Count b = std::min(bu, bv);
  if (c < 0 || c >= b || !w.plus_step(c + 1)) return Rational(0);
  Rational p(BigInt(1), choose2(w.at(c + 1)));
  for (Count i = c + 2; i <= b; ++i) {
    if (w.plus_step(i)) {
      const BigInt pairs = choose2(w.at(i));
      p *= Rational(pairs - 1, pairs);
    }
  }
  return p;
}

std::vector<std::int32_t> heights(const CoalescentBuild& b) { return vertex_depths(b.tree); }

std::int32_t height_oracle_sample(const WalkProfile& w, Count birth, Rng& rng) {
  if (birth < 0 || birth > w.horizon()) throw PreconditionError("height_oracle_sample: birth outside walk");
  if (!w.survives(birth)) throw PreconditionError("height_oracle_sample: walk absorbed");
  std::int32_t h = 0;
  for (Count i = 1; i <= birth; ++i) {
    if (w.plus_step(i) && rng.bernoulli(1.0 / w.at(i))) ++h;
  }
  return h;
}

Count coalescence_time(const CoalescentBuild& b, VertexId u, VertexId v) {
  if (u == v) return b.birth[static_cast<std::size_t>(u)];
  DisjointSet sets(static_cast<std::size_t>(b.tree.size()));
  for (const auto& rec : b.merge_log) {
    sets.unite(rec.root1, rec.root2);
    if (sets.find(u) == sets.find(v)) return rec.step - 1;
  }
  throw std::logic_error("vertices never coalesced");
}

namespace {

class CoalescentExpansion {
 public:
  CoalescentExpansion(const SignSequence& x, Count n,
                      const std::function<void(const CoalescentBuild&)>& visit)
      : x_(x), n_(n), walk_(compute_walk(x)), visit_(visit), build_(skeleton(x, n, walk_.at(n))) {
    const auto sn = static_cast<VertexId>(walk_.at(n));
    for (VertexId j = 0; j < sn; ++j) pool_.push_back(j);
    next_frozen_ = sn;
  }

  void run() { expand(n_); }

 private:
  void expand(Count i) {
    if (i == 0) {
      build_.tree.root = pool_.front();
      visit_(build_);
      return;
    }
    if (!x_.is_plus(i)) {
      pool_.push_back(next_frozen_++);
      expand(i - 1);
      --next_frozen_;
      pool_.pop_back();
      return;
    }
    const std::size_t s = pool_.size();
    auto& t = build_.tree;
    for (std::size_t j = 0; j < s; ++j) {
      for (std::size_t k = 0; k < s; ++k) {
        if (j == k) continue;
        const VertexId r1 = pool_[j];
        const VertexId r2 = pool_[k];
        t.parent[static_cast<std::size_t>(r2)] = r1;
        t.edge_time[static_cast<std::size_t>(r2)] = static_cast<std::int32_t>(i);
        build_.merge_log.push_back({static_cast<std::int32_t>(i), r1, r2});
        std::swap(pool_[k], pool_.back());
        pool_.pop_back();
        expand(i - 1);
        pool_.push_back(r2);
        std::swap(pool_[k], pool_.back());
        build_.merge_log.pop_back();
        t.parent[static_cast<std::size_t>(r2)] = kNoVertex;
        t.edge_time[static_cast<std::size_t>(r2)] = 0;
      }
    }
  }

  const SignSequence& x_;
  Count n_;
  WalkProfile walk_;
  const std::function<void(const CoalescentBuild&)>& visit_;
  CoalescentBuild build_;
  std::vector<VertexId> pool_;
  VertexId next_frozen_ = 0;
};

BigInt branch_count(const WalkProfile& w, Count n) {
  BigInt total = 1;
  for (Count i = 1; i <= n; ++i) {
    if (w.plus_step(i)) total *= BigInt(w.at(i)) * (w.at(i) - 1);
  }
  return total;
}

}  // namespace

void for_each_coalescent_outcome(const SignSequence& x, Count n,
                                 const std::function<void(const CoalescentBuild&)>& visit,
                                 std::int64_t cap) {
  const auto w = compute_walk(x);
  require_survival(w, n, "enumerate_coalescent");
  if (branch_count(w, n) > cap) {
    throw CapExceeded("growth-coalescent expansion has more than " + std::to_string(cap) + " branches");
  }
  CoalescentExpansion(x, n, visit).run();
}

std::vector<CoalescentOutcome> enumerate_coalescent(const SignSequence& x, Count n, std::int64_t cap) {
  const auto w = compute_walk(x);
  require_survival(w, n, "enumerate_coalescent");
  const Rational p(BigInt(1), branch_count(w, n));
  std::vector<CoalescentOutcome> out;
  for_each_coalescent_outcome(
      x, n,
      [&](const CoalescentBuild& b) {
        out.push_back({labelled_form(b.tree), canonical_form(b.tree), p});
      },
      cap);
  return out;
}

}  // namespace freezetree
