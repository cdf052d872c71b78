#include "lamelab/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace lamelab {

std::string to_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw DomainError("empty rational literal");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::int64_t num = std::stoll(text.substr(0, slash));
      std::int64_t den = std::stoll(text.substr(slash + 1));
      if (den == 0) throw DomainError("rational with zero denominator: " + text);
      return Rat(num, den);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      std::size_t frac_len = text.size() - dot - 1;
      if (frac_len > 15) throw DomainError("decimal literal too long for exact conversion: " + text);
      std::int64_t num = std::stoll(digits);
      std::int64_t den = 1;
      for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
      return Rat(num, den);
    }
    return Rat(std::stoll(text), 1);
  } catch (const std::invalid_argument&) {
    throw DomainError("cannot parse rational: " + text);
  } catch (const std::out_of_range&) {
    throw DomainError("rational literal out of range: " + text);
  }
}

}  // namespace lamelab
