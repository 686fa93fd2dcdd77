#include "pgap/common.hpp"

#include <cmath>

namespace pgap {

double to_double(const BigRat& x) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::msb;
  using boost::multiprecision::numerator;

  BigInt num = numerator(x);
  BigInt den = denominator(x);
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  if (negative) num = -num;

  // Scale both sides into double range, then fix the exponent back up.
  int shift_num = 0;
  int shift_den = 0;
  if (msb(num) > 512) {
    shift_num = static_cast<int>(msb(num)) - 512;
    num >>= shift_num;
  }
  if (msb(den) > 512) {
    shift_den = static_cast<int>(msb(den)) - 512;
    den >>= shift_den;
  }
  const double value =
      std::ldexp(num.convert_to<double>() / den.convert_to<double>(),
                 shift_num - shift_den);
  return negative ? -value : value;
}

BigInt round_half_up(const BigRat& x) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;

  const BigInt num = numerator(x);
  const BigInt den = denominator(x);  // canonical form keeps den > 0
  BigInt shifted = 2 * num + den;
  BigInt twice_den = 2 * den;
  // Floor division of shifted / twice_den.
  BigInt q = shifted / twice_den;
  if (shifted % twice_den != 0 && shifted < 0) --q;
  return q;
}

std::int64_t round_half_up(double x) {
  return static_cast<std::int64_t>(std::floor(x + 0.5));
}

}  // namespace pgap
