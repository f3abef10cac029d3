#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace freezetree {

using Count = std::int64_t;

// Raised when an operation is called outside its documented domain.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Finite sequence of attach (+1) and freeze (-1) steps. Step i (1-based)
// is stored at index i - 1.
class SignSequence {
 public:
  SignSequence() = default;
  SignSequence(std::initializer_list<int> signs);
  explicit SignSequence(std::span<const int> signs);

  static SignSequence constant_plus(Count n);

  Count size() const { return static_cast<Count>(signs_.size()); }
  bool empty() const { return signs_.empty(); }

  // 1-based access, matching the step numbering used everywhere else.
  int step(Count i) const { return signs_[static_cast<std::size_t>(i - 1)]; }
  bool is_plus(Count i) const { return step(i) > 0; }

  void push_back(int sign);
  void reserve(Count n) { signs_.reserve(static_cast<std::size_t>(n)); }

  SignSequence prefix(Count n) const;
  std::span<const std::int8_t> raw() const { return signs_; }

  bool operator==(const SignSequence&) const = default;

 private:
  std::vector<std::int8_t> signs_;
};

// S_0..S_n for a sign sequence, with S_0 = 1 and S_i = S_{i-1} + x_i, and
// tau, the first index with S_i = 0 (empty when the walk has not been
// absorbed within the horizon).
struct WalkProfile {
  std::vector<std::int32_t> s;
  std::optional<Count> tau;

  Count horizon() const { return static_cast<Count>(s.size()) - 1; }
  std::int32_t at(Count i) const { return s[static_cast<std::size_t>(i)]; }
  bool plus_step(Count i) const { return at(i) > at(i - 1); }

  // True when S_i > 0 for every i <= n.
  bool survives(Count n) const { return !tau || *tau > n; }

  // Number of vertices after n steps, (S_n + n + 1) / 2.
  Count vertex_count(Count n) const { return (at(n) + n + 1) / 2; }
};

WalkProfile compute_walk(const SignSequence& x);

// Sum over plus steps i <= n of 1/S_i. Requires tau > n.
double h_plus(const WalkProfile& w, Count n);

// Sum over minus steps i <= n of 1/S_i. Requires tau > n.
double h_minus(const WalkProfile& w, Count n);

// Partial sums of (1/S_i) over minus steps, the series whose divergence
// decides whether the trees have a local limit. A finite prefix cannot
// decide divergence, so this only reports the partial sum at the horizon
// and at half the horizon.
struct LocalLimitDiagnostic {
  double partial_sum = 0.0;
  double half_horizon_sum = 0.0;
  bool still_growing = false;
};

LocalLimitDiagnostic local_limit_criterion(const SignSequence& x, Count n);

}  // namespace freezetree
