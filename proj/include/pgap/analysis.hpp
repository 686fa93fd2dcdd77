#ifndef PGAP_ANALYSIS_HPP
#define PGAP_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pgap/census.hpp"
#include "pgap/gapcycle.hpp"

namespace pgap {

// Histogram of occurrence start positions over [1, Pi_k], with a chi-square
// statistic against the uniform expectation.  Descriptive output only: no
// pass/fail verdict is attached.
struct UniformityReport {
  Constellation s;
  std::uint32_t stage = 0;
  std::uint32_t bins = 0;
  std::vector<std::uint64_t> histogram;
  std::uint64_t total = 0;  // equals N_{p_k}(s)
  double chi_square = 0.0;
  std::uint32_t dof = 0;
  bool degenerate = false;  // fewer occurrences than bins

  // Occurrences starting in [p_{k+1}, p_{k+1}^2] versus the sieve estimate.
  std::uint64_t observed_in_square = 0;
  double expected_in_square = 0.0;
};

UniformityReport uniformity_histogram(const GapCycle& cycle,
                                      const Constellation& s, std::uint32_t bins);

// Offsets (0, a_1, a_1+a_2, ...) realized by a constellation.
std::vector<std::uint64_t> constellation_offsets(const Constellation& s);

// Consecutive differences of a strictly ascending tuple.
Constellation tuple_to_constellation(std::span<const std::uint64_t> tuple);

struct Admissibility {
  bool admissible = false;
  std::uint64_t blocking_prime = 0;  // smallest prime whose residues are covered
};

// A tuple is admissible iff its offsets avoid covering all residue classes
// modulo every prime; only primes up to the tuple length can block.
Admissibility admissible(std::span<const std::uint64_t> offsets);

struct SpikeWitness {
  gap_t gap = 0;        // maximal g such that [g, 2] occurs
  std::uint64_t index = 0;  // 1-based index of g (the 2 follows cyclically)
};

SpikeWitness spike_witness(const GapCycle& cycle);

struct IncreasingRun {
  std::uint64_t index = 0;  // 1-based start index
  std::vector<gap_t> run;
};

// First strictly increasing run of m consecutive gaps.  Existence is
// guaranteed by the middle constellation when 2^{m+1} <= p_{k+1}.
IncreasingRun superlinear_witness(const GapCycle& cycle, std::uint32_t m);

struct OscillationFinding {
  Constellation proposed;           // the gap pattern 2,4,6,8,2
  bool proposed_found = false;
  std::uint32_t proposed_stage = 0;
  Admissibility proposed_admissibility;
  Constellation witness;            // monotone triple incompatible with oscillation
  std::uint32_t witness_stage = 0;
  std::uint64_t witness_index = 0;
};

// Searches stages up to k_max for the proposed pattern [2,4,6,8,2] (it is
// inadmissible, so the search fails) and returns the smallest-stage monotone
// triple of consecutive gaps as the alternative counterexample.
OscillationFinding oscillation_counterexample(std::uint32_t k_max,
                                              const BuildBudget& budget = {},
                                              CycleCache* cache = nullptr);

struct CompositeRun {
  std::uint64_t gap_index = 0;    // 1-based index in the cycle
  std::uint64_t start_value = 0;  // left endpoint 1 + partial sum
  std::uint64_t gap = 0;
  std::uint64_t run_length = 0;   // gap - 1 consecutive composites
};

// Gaps >= threshold and the composite runs between their endpoints.  The
// first gap of the cycle is skipped: its interior contains the small primes.
std::vector<CompositeRun> composite_runs_at(const GapCycle& cycle,
                                            std::uint64_t threshold);
// Threshold 2 p_{k-1}, the duplicated entries guaranteed at every stage.
std::vector<CompositeRun> composite_run_locator(const GapCycle& cycle);

struct KTupleStageCheck {
  Constellation s;
  Admissibility adm;
  std::optional<std::uint32_t> first_stage;
  std::uint64_t stage_prime = 0;   // p at the found stage
  bool span_condition = false;     // 2p > b_k - b_1
};

// Constellation form of a tuple conjecture: find a stage whose cycle contains
// the associated constellation with 2p exceeding the tuple's span.
KTupleStageCheck ktuple_stage_check(std::span<const std::uint64_t> tuple,
                                    std::uint32_t k_max,
                                    const BuildBudget& budget = {},
                                    CycleCache* cache = nullptr);

}  // namespace pgap

#endif
