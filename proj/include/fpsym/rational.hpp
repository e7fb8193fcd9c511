// Exact rational coefficient type used throughout the expression core.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace fpsym {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

} // namespace fpsym
