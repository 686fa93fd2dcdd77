#ifndef PGAP_GAPCYCLE_HPP
#define PGAP_GAPCYCLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pgap/common.hpp"

namespace pgap {

class CycleCache;

// Limits for in-memory cycle construction.  Stage 10 (about 2 GB of gaps)
// is supported but must be opted into by raising both limits.
struct BuildBudget {
  std::uint32_t stage_ceiling = 9;
  std::uint64_t mem_bytes = 2ull << 30;
};

// Hard cap: gaps are stored as 16-bit values, asserted during every build.
inline constexpr std::uint32_t kMaxSupportedStage = 12;

struct BuildStats {
  std::uint64_t closures = 0;        // must equal the length of the source cycle
  std::uint64_t removed_first = 0;   // first struck value, the new prime itself
  std::uint64_t removed_second = 0;  // second struck value, the new prime squared
};

// The cycle of gaps between consecutive generators of Z mod (product of the
// first k primes).  Immutable after construction; safe to share across threads.
class GapCycle {
 public:
  GapCycle() = default;
  GapCycle(std::uint32_t stage, std::uint64_t sieving_prime, std::uint64_t span,
           std::vector<gap_t> gaps);

  // G(2): the single gap [2] with p_1 = 2.
  static GapCycle base();

  std::uint32_t stage() const { return stage_; }                // k
  std::uint64_t sieving_prime() const { return prime_; }        // p_k
  std::uint64_t length() const { return gaps_.size(); }         // Phi_k
  std::uint64_t span() const { return span_; }                  // Pi_k
  const std::vector<gap_t>& gaps() const { return gaps_; }

  // 1-based access, matching the g_{k,j} indexing.
  gap_t gap(std::uint64_t j) const { return gaps_[j - 1]; }
  // Sum of the first j gaps.  O(j); cycles do not store prefix sums.
  std::uint64_t partial_sum(std::uint64_t j) const;

  // The next prime is one more than the first gap.
  std::uint64_t next_prime() const { return std::uint64_t{gaps_.front()} + 1; }

  bool operator==(const GapCycle& other) const = default;

 private:
  std::uint32_t stage_ = 0;
  std::uint64_t prime_ = 0;
  std::uint64_t span_ = 0;
  std::vector<gap_t> gaps_;
};

std::uint64_t next_prime(const GapCycle& cycle);

// One recursion step: concatenate copies of the cycle and close one gap per
// source gap at the positions dictated by the new prime's multiples.
GapCycle build_next_cycle(const GapCycle& cycle, const BuildBudget& budget = {},
                          BuildStats* stats = nullptr);
// Single-threaded reference implementation of the same step.
GapCycle build_next_cycle_serial(const GapCycle& cycle,
                                 const BuildBudget& budget = {},
                                 BuildStats* stats = nullptr);

// Iterate the recursion from G(2) (or the deepest cached stage) up to stage k.
// Intermediate stages are persisted when a cache is supplied.
GapCycle build_cycle_to(std::uint32_t k, const BuildBudget& budget = {},
                        CycleCache* cache = nullptr);

inline constexpr std::uint64_t kDefaultOracleSpanCeiling = 223092870;  // Pi_9

// Independent construction: enumerate the integers coprime to the primorial by
// trial division against the first k primes and take consecutive differences.
GapCycle oracle_cycle(std::uint32_t k,
                      std::uint64_t span_ceiling = kDefaultOracleSpanCeiling);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::uint32_t stage = 0;
  std::vector<ValidationCheck> checks;

  bool valid() const;
  std::vector<std::string> violations() const;
};

// Runtime checks of the structural facts about a cycle: sum/length identities,
// first gap, trailing 2, symmetry, equal-run divisibility, the powers-of-two
// middle constellation, duplicated 2*p_{k-1} entries, and removal of p_k^2.
ValidationReport validate_structure(const GapCycle& cycle);

// Smallest j with 2^(j+1) > p_next.
std::uint32_t middle_exponent(std::uint64_t p_next);
// The palindrome [2^j, ..., 4, 2, 4, 2, 4, ..., 2^j] centered on the cycle.
std::vector<gap_t> middle_pattern(std::uint32_t j);

}  // namespace pgap

#endif
