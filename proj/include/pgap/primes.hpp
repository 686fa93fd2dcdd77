#ifndef PGAP_PRIMES_HPP
#define PGAP_PRIMES_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pgap/census.hpp"
#include "pgap/gapcycle.hpp"

namespace pgap {

struct SieveConfig {
  std::uint64_t ceiling = 1ull << 31;  // covers 14939^2 with room
  std::uint32_t segment_bits = 20;     // odd-only bitset slots per segment
};

// Consecutive primes over an interval together with their gaps.
struct PrimeGapStream {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> primes;

  std::vector<std::uint64_t> gaps() const;
};

std::vector<std::uint64_t> small_primes(std::uint64_t limit);
bool is_prime_u64(std::uint64_t n);
std::uint64_t next_prime_after(std::uint64_t n);
std::uint64_t nth_prime(std::uint32_t k);   // 1-based: nth_prime(1) == 2
std::uint32_t prime_index(std::uint64_t p); // inverse of nth_prime

// Exact list of primes in [a, b] via a segmented sieve.
PrimeGapStream segmented_primes(std::uint64_t a, std::uint64_t b,
                                const SieveConfig& config = {});

// Occurrences of s among consecutive primes whose starting prime lies in
// [lo, hi]; trailing primes of a window may exceed hi.
std::uint64_t count_constellations_in(const Constellation& s, std::uint64_t lo,
                                      std::uint64_t hi,
                                      const SieveConfig& config = {});
std::uint64_t count_constellations_in_serial(const Constellation& s,
                                             std::uint64_t lo, std::uint64_t hi,
                                             const SieveConfig& config = {});

// Start-anchored count over [p, p^2].
std::uint64_t count_prime_constellations(const Constellation& s, std::uint64_t p,
                                         const SieveConfig& config = {});

// One sieve pass, many targets: per-target ascending start values of every
// occurrence whose starting prime lies in [lo, hi].
std::vector<std::vector<std::uint64_t>> constellation_starts(
    std::span<const Constellation> targets, std::uint64_t lo, std::uint64_t hi,
    const SieveConfig& config = {});

// The gaps of G(p_k) lying below p_{k+1}^2 are gaps between primes: extract
// them as a stream starting at p_{k+1}.
PrimeGapStream prime_gaps_in_cycle_window(const GapCycle& cycle);

}  // namespace pgap

#endif
