#include "freezetree/sequence.hpp"

#include <string>

namespace freezetree {

namespace {

std::int8_t checked_sign(int v) {
  if (v != 1 && v != -1) {
    throw std::invalid_argument("sign sequence entries must be +1 or -1, got " +
                                std::to_string(v));
  }
  return static_cast<std::int8_t>(v);
}

void require_alive(const WalkProfile& w, Count n, const char* what) {
  if (n < 0 || n > w.horizon()) {
    throw PreconditionError(std::string(what) + ": horizon " + std::to_string(n) +
                            " outside the walk");
  }
  if (!w.survives(n)) {
    throw PreconditionError(std::string(what) + ": walk absorbed at " +
                            std::to_string(*w.tau) + " <= " + std::to_string(n));
  }
}

double inverse_sum(const WalkProfile& w, Count n, bool plus) {
  double total = 0.0;
  for (Count i = 1; i <= n; ++i) {
    if (w.plus_step(i) == plus) total += 1.0 / w.at(i);
  }
  return total;
}

}  // namespace

SignSequence::SignSequence(std::initializer_list<int> signs) {
  signs_.reserve(signs.size());
  for (int v : signs) signs_.push_back(checked_sign(v));
}

SignSequence::SignSequence(std::span<const int> signs) {
  signs_.reserve(signs.size());
  for (int v : signs) signs_.push_back(checked_sign(v));
}

SignSequence SignSequence::constant_plus(Count n) {
  if (n < 0) throw std::invalid_argument("negative sequence length");
  SignSequence x;
  x.signs_.assign(static_cast<std::size_t>(n), 1);
  return x;
}

void SignSequence::push_back(int sign) { signs_.push_back(checked_sign(sign)); }

SignSequence SignSequence::prefix(Count n) const {
  if (n < 0 || n > size()) throw std::out_of_range("prefix length outside sequence");
  SignSequence out;
  out.signs_.assign(signs_.begin(), signs_.begin() + n);
  return out;
}

WalkProfile compute_walk(const SignSequence& x) {
  WalkProfile w;
  w.s.resize(static_cast<std::size_t>(x.size()) + 1);
  w.s[0] = 1;
  for (Count i = 1; i <= x.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    w.s[idx] = w.s[idx - 1] + x.step(i);
    if (!w.tau && w.s[idx] == 0) w.tau = i;
  }
  return w;
}

double h_plus(const WalkProfile& w, Count n) {
  require_alive(w, n, "h_plus");
  return inverse_sum(w, n, true);
}

double h_minus(const WalkProfile& w, Count n) {
  require_alive(w, n, "h_minus");
  return inverse_sum(w, n, false);
}

LocalLimitDiagnostic local_limit_criterion(const SignSequence& x, Count n) {
  const auto w = compute_walk(x);
  require_alive(w, n, "local_limit_criterion");
  LocalLimitDiagnostic d;
  d.half_horizon_sum = inverse_sum(w, n / 2, false);
  d.partial_sum = d.half_horizon_sum;
  for (Count i = n / 2 + 1; i <= n; ++i) {
    if (!w.plus_step(i)) d.partial_sum += 1.0 / w.at(i);
  }
  d.still_growing = d.partial_sum > d.half_horizon_sum;
  return d;
}

}  // namespace freezetree
