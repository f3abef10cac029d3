#include "freezetree/asymptotics.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "freezetree/sequence.hpp"

namespace freezetree {

double bennett_g(double u) {
  if (!(u > -1.0)) throw PreconditionError("bennett_g: requires u > -1");
  return (1.0 + u) * std::log1p(u) - u;
}

double bennett_tail(double m, double t) {
  if (!(m > 0.0) || !(t > 0.0)) throw PreconditionError("bennett_tail: requires m > 0 and t > 0");
  return std::exp(-m * bennett_g(t / m));
}

double fc_residual(double c, double f) { return f * (std::log(f) - 1.0) - (c - 1.0) / (c + 1.0); }

double solve_fc(double c) {
  if (!(c > 0.0 && c <= 1.0)) throw PreconditionError("solve_fc: requires 0 < c <= 1");
  // The residual is -2c/(c+1) < 0 at f = 1 and increasing beyond it.
  double lo = 1.0;
  double hi = 10.0;
  while (fc_residual(c, hi) <= 0.0) hi *= 2.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (fc_residual(c, mid) < 0.0 ? lo : hi) = mid;
  }
  double f = 0.5 * (lo + hi);
  for (int iter = 0; iter < 50; ++iter) {
    const double r = fc_residual(c, f);
    if (std::abs(r) < 1e-13) break;
    f -= r / std::log(f);
  }
  return f;
}

LinearRegimeConstants linear_constants(double c) {
  if (!(c > 0.0 && c <= 1.0)) throw PreconditionError("linear_constants: requires 0 < c <= 1");
  LinearRegimeConstants k;
  k.c = c;
  k.depth = (c + 1.0) / (2.0 * c);
  k.distance = (c + 1.0) / c;
  k.f_c = solve_fc(c);
  k.height = k.depth * k.f_c;
  return k;
}

std::pair<double, double> height_envelope(double hplus, double eps) {
  if (!(hplus > 0.0)) throw PreconditionError("height_envelope: requires hplus > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("height_envelope: requires 0 < eps < 1");
  return {(1.0 - eps) * hplus, (std::numbers::e + eps) * hplus};
}

std::vector<LinearRegimeConstants> constants_curve(std::size_t points, double c_min) {
  if (points < 2) throw PreconditionError("constants_curve: need at least two points");
  if (!(c_min > 0.0 && c_min < 1.0)) throw PreconditionError("constants_curve: requires 0 < c_min < 1");
  std::vector<LinearRegimeConstants> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double c = c_min + (1.0 - c_min) * static_cast<double>(i) / static_cast<double>(points - 1);
    out.push_back(linear_constants(i + 1 == points ? 1.0 : c));
  }
  return out;
}

void write_constants_csv(std::ostream& os, const std::vector<LinearRegimeConstants>& curve) {
  const auto old = os.precision(17);
  os << "c,depth,distance,f_c,height\n";
  for (const auto& k : curve) {
    os << k.c << ',' << k.depth << ',' << k.distance << ',' << k.f_c << ',' << k.height << '\n';
  }
  os.precision(old);
}

}  // namespace freezetree
