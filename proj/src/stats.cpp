#include "freezetree/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "freezetree/sequence.hpp"

namespace freezetree {

double tv_distance(const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
  double sum = 0.0;
  for (const auto& [k, v] : p) {
    const auto it = q.find(k);
    sum += std::abs(v - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : q) {
    if (!p.contains(k)) sum += std::abs(v);
  }
  return 0.5 * sum;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  const auto n = std::max(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    sum += std::abs(a - b);
  }
  return 0.5 * sum;
}

std::map<std::string, double> normalize(const std::map<std::string, std::int64_t>& counts) {
  double total = 0.0;
  for (const auto& [k, v] : counts) total += static_cast<double>(v);
  std::map<std::string, double> out;
  if (total == 0.0) return out;
  for (const auto& [k, v] : counts) out[k] = static_cast<double>(v) / total;
  return out;
}

double chi_square_sf(double statistic, int dof) {
  if (dof < 1) throw PreconditionError("chi_square_sf: dof must be positive");
  if (statistic <= 0.0) return 1.0;
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

namespace {

std::string cell_name(std::size_t lo, std::size_t hi, bool open) {
  if (open) return std::to_string(lo) + "+";
  if (lo == hi) return std::to_string(lo);
  return std::to_string(lo) + "-" + std::to_string(hi);
}

}  // namespace

ChiSquareResult chi_square_gof(std::span<const std::int64_t> counts_by_value, std::span<const double> pmf,
                               double min_expected) {
  const double total = static_cast<double>(
      std::accumulate(counts_by_value.begin(), counts_by_value.end(), std::int64_t{0}));
  if (total <= 0.0) throw PreconditionError("chi_square_gof: no observations");

  struct Cell {
    std::size_t lo, hi;
    double expected;
  };
  std::vector<Cell> cells;
  std::size_t start = 0;
  double cum = 0.0;
  double open_mass = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    cum += pmf[k];
    open_mass += pmf[k];
    const double rest = std::max(0.0, 1.0 - cum);
    if (open_mass * total >= min_expected && rest * total >= min_expected) {
      cells.push_back({start, k, open_mass * total});
      start = k + 1;
      open_mass = 0.0;
    }
  }
  const double tail = std::max(0.0, 1.0 - (cum - open_mass)) * total;
  cells.push_back({start, std::numeric_limits<std::size_t>::max(), tail});
  if (cells.size() < 2) {
    throw PreconditionError("chi_square_gof: fewer than two cells with expected count >= " +
                            std::to_string(min_expected));
  }

  ChiSquareResult r;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const bool open = c + 1 == cells.size();
    std::int64_t obs = 0;
    for (std::size_t v = cells[c].lo; v < counts_by_value.size() && (open || v <= cells[c].hi); ++v) {
      obs += counts_by_value[v];
    }
    r.cells.push_back(cell_name(cells[c].lo, cells[c].hi, open));
    r.observed.push_back(obs);
    r.expected.push_back(cells[c].expected);
    const double d = static_cast<double>(obs) - cells[c].expected;
    r.statistic += d * d / cells[c].expected;
  }
  r.dof = static_cast<int>(cells.size()) - 1;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

ChiSquareResult chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                      double min_expected) {
  const auto na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::int64_t{0}));
  const auto nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::int64_t{0}));
  if (na <= 0.0 || nb <= 0.0) throw PreconditionError("chi_square_two_sample: empty sample");
  const double share = std::min(na, nb) / (na + nb);
  const auto len = std::max(a.size(), b.size());
  auto at = [](std::span<const std::int64_t> s, std::size_t i) { return i < s.size() ? s[i] : 0; };

  struct Cell {
    std::size_t lo, hi;
    std::int64_t oa = 0, ob = 0;
  };
  std::vector<Cell> cells;
  Cell cur{0, 0};
  for (std::size_t v = 0; v < len; ++v) {
    cur.hi = v;
    cur.oa += at(a, v);
    cur.ob += at(b, v);
    if (static_cast<double>(cur.oa + cur.ob) * share >= min_expected) {
      cells.push_back(cur);
      cur = Cell{v + 1, v + 1};
    }
  }
  if (cur.oa + cur.ob > 0) {
    if (cells.empty()) {
      cells.push_back(cur);
    } else {
      cells.back().hi = cur.hi;
      cells.back().oa += cur.oa;
      cells.back().ob += cur.ob;
    }
  }
  if (cells.size() < 2) throw PreconditionError("chi_square_two_sample: fewer than two pooled cells");

  ChiSquareResult r;
  for (const auto& c : cells) {
    const double pooled = static_cast<double>(c.oa + c.ob);
    const double ea = pooled * na / (na + nb);
    const double eb = pooled * nb / (na + nb);
    const double da = static_cast<double>(c.oa) - ea;
    const double db = static_cast<double>(c.ob) - eb;
    r.statistic += da * da / ea + db * db / eb;
    r.cells.push_back(cell_name(c.lo, c.hi, false));
    r.observed.push_back(c.oa);
    r.expected.push_back(ea);
  }
  r.dof = static_cast<int>(cells.size()) - 1;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

nlohmann::json DistComparison::to_json() const {
  return {{"support", support}, {"observed", observed}, {"expected", expected}, {"kind", kind},
          {"value", value},     {"threshold", threshold}, {"pass", pass}};
}

DistComparison compare_tv(const std::map<std::string, std::int64_t>& observed,
                          const std::map<std::string, double>& expected, double threshold) {
  DistComparison d;
  d.kind = "total-variation";
  d.threshold = threshold;
  std::set<std::string> keys;
  for (const auto& [k, v] : observed) keys.insert(k);
  for (const auto& [k, v] : expected) keys.insert(k);
  for (const auto& k : keys) {
    d.support.push_back(k);
    const auto o = observed.find(k);
    const auto e = expected.find(k);
    d.observed.push_back(o == observed.end() ? 0 : o->second);
    d.expected.push_back(e == expected.end() ? 0.0 : e->second);
  }
  d.value = tv_distance(normalize(observed), expected);
  d.pass = d.value < threshold;
  return d;
}

nlohmann::json Summary::to_json() const {
  return {{"count", count}, {"mean", mean}, {"stderr", stderr_}, {"min", min}, {"max", max}};
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = static_cast<std::int64_t>(values.size());
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stderr_ = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return s;
}

double fraction_within(std::span<const double> values, double lo, double hi) {
  if (values.empty()) return 0.0;
  const auto n = std::count_if(values.begin(), values.end(), [&](double v) { return v >= lo && v <= hi; });
  return static_cast<double>(n) / static_cast<double>(values.size());
}

}  // namespace freezetree
