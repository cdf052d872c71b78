#ifndef LAMELAB_RATIONAL_HPP
#define LAMELAB_RATIONAL_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

#include "lamelab/errors.hpp"

namespace lamelab {

// Exact arithmetic for exponent-square geometry. All region classification
// runs on Rat; doubles appear only once values leave the lattice of
// admissible exponents (kappa, distances, boundary sampling).
using Rat = boost::rational<std::int64_t>;

inline double to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Renders "num/den", or just "num" for integers.
std::string to_string(const Rat& r);

// Parses "num/den", "num", or a decimal like "0.5" (converted exactly).
Rat parse_rational(const std::string& text);

}  // namespace lamelab

#endif
