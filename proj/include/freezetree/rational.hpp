#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace freezetree {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace freezetree
