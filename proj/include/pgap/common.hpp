#ifndef PGAP_COMMON_HPP
#define PGAP_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pgap {

// Gap values are even and stay below 2^16 for every supported stage.
using gap_t = std::uint16_t;

// Census counts grow superexponentially across stages; exact arithmetic only.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested build or scan exceeds the configured memory/stage budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// A cache file failed its checksum or layout checks.
class CacheError : public Error {
 public:
  using Error::Error;
};

// A recurrence precondition does not hold at the requested stage.
class ValidityError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Lossy conversion that stays finite for ratios of huge integers.
double to_double(const BigRat& x);

// Round half up (floor(x + 1/2)), exactly, in rational arithmetic.
BigInt round_half_up(const BigRat& x);

// Same convention on doubles (used for the floating-point estimates).
std::int64_t round_half_up(double x);

}  // namespace pgap

#endif
