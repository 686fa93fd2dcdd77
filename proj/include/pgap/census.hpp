#ifndef PGAP_CENSUS_HPP
#define PGAP_CENSUS_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pgap/common.hpp"
#include "pgap/gapcycle.hpp"

namespace pgap {

// A finite sequence of even positive gaps; the unit of census and counting.
class Constellation {
 public:
  Constellation() = default;
  explicit Constellation(std::vector<gap_t> gaps);

  // Text form is comma-separated decimal gaps, e.g. "2,10,2".
  static Constellation parse(std::string_view text);
  std::string str() const;

  const std::vector<gap_t>& gaps() const { return gaps_; }
  std::uint32_t gap_count() const { return static_cast<std::uint32_t>(gaps_.size()); }
  std::uint64_t gap_sum() const;
  Constellation reversed() const;

  auto operator<=>(const Constellation&) const = default;

 private:
  std::vector<gap_t> gaps_;
};

// All start indices i (1-based) whose j-gap window equals s; windows wrap
// cyclically past the end of the cycle.  Ascending order.
std::vector<std::uint64_t> cyclic_occurrences(const GapCycle& cycle,
                                              const Constellation& s);
std::vector<std::uint64_t> cyclic_occurrences_serial(const GapCycle& cycle,
                                                     const Constellation& s);

// N_p(s): the size of cyclic_occurrences, without materializing it.
std::uint64_t count_occurrences(const GapCycle& cycle, const Constellation& s);
std::uint64_t count_occurrences_serial(const GapCycle& cycle,
                                       const Constellation& s);

// Every constellation that yields s when one adjacent pair of gaps is added
// together: each gap a is replaced by an ordered even split (b, a-b).
std::set<Constellation> predecessors(const Constellation& s);

inline constexpr std::uint64_t kDefaultClosureSumBound = 60;

// Smallest set containing s and closed under predecessors.  Finite because
// splits preserve the gap sum.
std::set<Constellation> predecessor_closure(
    const Constellation& s, std::uint64_t max_sum = kDefaultClosureSumBound);

struct ValidityIssue {
  Constellation member;
  std::string condition;
};

struct RecurrenceValidity {
  bool valid = false;
  std::vector<ValidityIssue> issues;
};

// Preconditions of the counting recurrence at the transition k -> k+1, for s
// and every member of its predecessor closure: the gap sum must be below
// 2 p_{k+1} and each member must have fewer than p_{k+1} - 1 gaps.
RecurrenceValidity recurrence_validity(
    const Constellation& s, std::uint32_t k,
    std::uint64_t max_sum = kDefaultClosureSumBound);

// Exact occurrence counts per stage for a constellation and its predecessor
// closure.  Counts are arbitrary-precision integers.
class CensusLedger {
 public:
  CensusLedger() = default;
  CensusLedger(Constellation target, std::vector<Constellation> members,
               std::uint32_t base_stage, std::uint64_t base_prime,
               std::vector<BigInt> base_counts);

  const Constellation& target() const { return target_; }
  const std::vector<Constellation>& members() const { return members_; }
  std::uint32_t base_stage() const { return stages_.front(); }
  std::uint32_t last_stage() const { return stages_.back(); }
  const std::vector<std::uint32_t>& stages() const { return stages_; }
  std::uint64_t stage_prime(std::uint32_t k) const;

  const BigInt& count(const Constellation& member, std::uint32_t k) const;
  const BigInt& target_count(std::uint32_t k) const { return count(target_, k); }

  std::size_t member_index(const Constellation& member) const;

  void append_stage(std::uint64_t prime, std::vector<BigInt> counts);

 private:
  Constellation target_;
  std::vector<Constellation> members_;   // sorted; includes target
  std::vector<std::uint32_t> stages_;    // contiguous ascending k
  std::vector<std::uint64_t> primes_;    // p_k per stage
  // counts_[i][m] = N at stages_[i] of members_[m]
  std::vector<std::vector<BigInt>> counts_;
};

// Seed a ledger by direct census of the whole closure on a materialized cycle.
CensusLedger seed_census(const GapCycle& cycle, const Constellation& target,
                         std::uint64_t max_sum = kDefaultClosureSumBound);

// Extend the ledger from its last stage k to k+1 using the exact recurrence
//   N_{p_{k+1}}(s) = (p_{k+1} - (j+1)) N_{p_k}(s) + sum over drivers N_{p_k}.
// Refuses (ValidityError) when a member violates the preconditions.
CensusLedger recurrence_step(const CensusLedger& ledger, std::uint32_t k);

// Smallest stage from which the recurrence is valid for the whole closure.
std::uint32_t choose_seed_stage(const Constellation& s,
                                std::uint64_t max_sum = kDefaultClosureSumBound);

// Seed by direct census at k_seed, then iterate the recurrence to k_target.
CensusLedger project_counts(const Constellation& s, std::uint32_t k_seed,
                            std::uint32_t k_target, const BuildBudget& budget = {},
                            CycleCache* cache = nullptr,
                            std::uint64_t max_sum = kDefaultClosureSumBound);

// Smallest k <= k_max with at least one occurrence in G(p_k), if any.
std::optional<std::uint32_t> find_first_stage(const Constellation& s,
                                              std::uint32_t k_max,
                                              const BuildBudget& budget = {},
                                              CycleCache* cache = nullptr);

}  // namespace pgap

#endif
