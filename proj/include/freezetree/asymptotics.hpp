#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

namespace freezetree {

// g(u) = (1 + u) ln(1 + u) - u, for u > -1.
double bennett_g(double u);

// exp(-m g(t/m)): bound on P(sum of Bernoullis > m + t) when the mean is m.
double bennett_tail(double m, double t);

// Unique f > 1 with f (ln f - 1) = (c - 1)/(c + 1), for 0 < c <= 1.
// Bisection to 1e-6, then Newton until the residual is below 1e-13.
double solve_fc(double c);

// Residual f (ln f - 1) - (c - 1)/(c + 1).
double fc_residual(double c, double f);

struct LinearRegimeConstants {
  double c = 1.0;
  double depth = 1.0;     // (c + 1) / (2c)
  double distance = 2.0;  // (c + 1) / c
  double f_c = 0.0;
  double height = 0.0;    // depth * f_c
};

LinearRegimeConstants linear_constants(double c);

// ((1 - eps) hplus, (e + eps) hplus).
std::pair<double, double> height_envelope(double hplus, double eps);

// Constants on `points` values of c spaced evenly in [c_min, 1].
std::vector<LinearRegimeConstants> constants_curve(std::size_t points, double c_min = 0.005);

// CSV with header c,depth,distance,f_c,height.
void write_constants_csv(std::ostream& os, const std::vector<LinearRegimeConstants>& curve);

}  // namespace freezetree
