#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "freezetree/rng.hpp"
#include "freezetree/sequence.hpp"

namespace freezetree {

// Thrown when rejection sampling of a survival-conditioned sequence runs out
// of attempts.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Path of the susceptible/infective chain started from (n, 1) and run until
// no infective remains. h[k], i[k] are the counts after k steps.
struct SirTrajectory {
  Count n = 0;
  double lambda_n = 0.0;
  std::vector<std::int32_t> h;
  std::vector<std::int32_t> i;

  Count absorption() const { return static_cast<Count>(i.size()) - 1; }
  // Infective count after step k, zero once the chain has been absorbed.
  std::int32_t infectives(Count k) const {
    return k < static_cast<Count>(i.size()) ? i[static_cast<std::size_t>(k)] : 0;
  }
};

enum class SequenceKind { constant_plus, iid, sir, explicit_list };

struct SequenceSpec {
  SequenceKind kind = SequenceKind::constant_plus;
  Count horizon = 0;
  double p = 0.5;               // iid
  bool condition_survival = false;
  std::int64_t max_attempts = 1'000'000;
  double lambda_n = 0.0;        // sir: per-pair contact rate
  SignSequence explicit_signs;  // explicit_list

  void validate() const;
};

// Contact rate per pair when the total rate lambda is spread over n others.
inline double lambda_n_from_total(double lambda_total, Count n) {
  return lambda_total / static_cast<double>(n);
}

SignSequence gen_constant_plus(Count n);

// n i.i.d. signs with P(+1) = p. With `conditioned`, whole sequences are
// redrawn until the walk stays positive up to n (requires p > 1/2).
SignSequence gen_iid(double p, Count n, Rng& rng, bool conditioned = false,
                     std::int64_t max_attempts = 1'000'000);

// Runs the chain from (n, 1) to absorption; step k of the returned sequence
// is I_k - I_{k-1}.
std::pair<SignSequence, SirTrajectory> gen_sir(Count n, double lambda_n, Rng& rng);

SignSequence generate_sequence(const SequenceSpec& spec, Rng& rng);

std::string to_string(SequenceKind kind);
SequenceKind sequence_kind_from_string(const std::string& s);

// One sign per line ("+1" / "-1"); lines starting with '#' are comments.
void write_sequence(std::ostream& os, const SignSequence& x, const std::string& header = {});
SignSequence read_sequence(std::istream& is);

}  // namespace freezetree
