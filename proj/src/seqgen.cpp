#include "freezetree/seqgen.hpp"

#include <istream>
#include <ostream>

namespace freezetree {

void SequenceSpec::validate() const {
  if (horizon < 0) throw std::invalid_argument("horizon must be non-negative");
  switch (kind) {
    case SequenceKind::iid:
      if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in [0, 1)");
      if (condition_survival && !(p > 0.5)) {
        throw std::invalid_argument("conditioning on survival requires p > 1/2");
      }
      if (max_attempts < 1) throw std::invalid_argument("max_attempts must be positive");
      break;
    case SequenceKind::sir:
      if (horizon < 1) throw std::invalid_argument("sir sequences need n >= 1");
      if (!(lambda_n >= 0.0)) throw std::invalid_argument("lambda_n must be non-negative");
      break;
    case SequenceKind::explicit_list:
      if (horizon > explicit_signs.size()) {
        throw std::invalid_argument("horizon exceeds the explicit sequence");
      }
      break;
    case SequenceKind::constant_plus:
      break;
  }
}

SignSequence gen_constant_plus(Count n) { return SignSequence::constant_plus(n); }

SignSequence gen_iid(double p, Count n, Rng& rng, bool conditioned, std::int64_t max_attempts) {
  SequenceSpec spec;
  spec.kind = SequenceKind::iid;
  spec.p = p;
  spec.horizon = n;
  spec.condition_survival = conditioned;
  spec.max_attempts = max_attempts;
  spec.validate();

  SignSequence x;
  x.reserve(n);
  for (std::int64_t attempt = 0; attempt < max_attempts; ++attempt) {
    x = SignSequence();
    x.reserve(n);
    std::int64_t s = 1;
    bool alive = true;
    for (Count i = 0; i < n; ++i) {
      const int sign = rng.bernoulli(p) ? 1 : -1;
      x.push_back(sign);
      s += sign;
      if (s == 0 && conditioned) {
        // The rest of this attempt would be discarded anyway.
        alive = false;
        break;
      }
    }
    if (!conditioned || alive) return x;
  }
  throw ConditioningError("no sequence with tau > " + std::to_string(n) + " after " +
                          std::to_string(max_attempts) + " attempts at p = " + std::to_string(p));
}

std::pair<SignSequence, SirTrajectory> gen_sir(Count n, double lambda_n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("gen_sir: n must be at least 1");
  if (!(lambda_n >= 0.0)) throw std::invalid_argument("gen_sir: lambda_n must be non-negative");
  SirTrajectory traj;
  traj.n = n;
  traj.lambda_n = lambda_n;
  traj.h.push_back(static_cast<std::int32_t>(n));
  traj.i.push_back(1);
  SignSequence x;
  std::int32_t h = static_cast<std::int32_t>(n);
  std::int32_t inf = 1;
  // At most n infections and n + 1 recoveries.
  const Count cap = 2 * n + 1;
  while (inf > 0 && traj.absorption() < cap) {
    const double rate = lambda_n * h;
    const bool infect = rng.uniform() * (1.0 + rate) < rate;
    if (infect) {
      --h;
      ++inf;
      x.push_back(1);
    } else {
      --inf;
      x.push_back(-1);
    }
    traj.h.push_back(h);
    traj.i.push_back(inf);
  }
  return {std::move(x), std::move(traj)};
}

SignSequence generate_sequence(const SequenceSpec& spec, Rng& rng) {
  spec.validate();
  switch (spec.kind) {
    case SequenceKind::constant_plus:
      return gen_constant_plus(spec.horizon);
    case SequenceKind::iid:
      return gen_iid(spec.p, spec.horizon, rng, spec.condition_survival, spec.max_attempts);
    case SequenceKind::sir:
      return gen_sir(spec.horizon, spec.lambda_n, rng).first;
    case SequenceKind::explicit_list:
      return spec.explicit_signs;
  }
  throw std::logic_error("unhandled sequence kind");
}

std::string to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::constant_plus: return "constant_plus";
    case SequenceKind::iid: return "iid";
    case SequenceKind::sir: return "sir";
    case SequenceKind::explicit_list: return "explicit";
  }
  return "unknown";
}

SequenceKind sequence_kind_from_string(const std::string& s) {
  if (s == "constant_plus") return SequenceKind::constant_plus;
  if (s == "iid") return SequenceKind::iid;
  if (s == "sir") return SequenceKind::sir;
  if (s == "explicit") return SequenceKind::explicit_list;
  throw std::invalid_argument("unknown sequence kind: " + s);
}

void write_sequence(std::ostream& os, const SignSequence& x, const std::string& header) {
  if (!header.empty()) os << "# " << header << '\n';
  for (auto v : x.raw()) os << (v > 0 ? "+1" : "-1") << '\n';
}

SignSequence read_sequence(std::istream& is) {
  SignSequence x;
  std::string line;
  Count line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const auto token = line.substr(first, last - first + 1);
    if (token == "+1" || token == "1") {
      x.push_back(1);
    } else if (token == "-1") {
      x.push_back(-1);
    } else {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected +1 or -1, got '" +
                                  token + "'");
    }
  }
  return x;
}

}  // namespace freezetree
