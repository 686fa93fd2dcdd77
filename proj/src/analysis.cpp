#include "pgap/analysis.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pgap/cycle_cache.hpp"
#include "pgap/estimates.hpp"
#include "pgap/primes.hpp"

namespace pgap {

UniformityReport uniformity_histogram(const GapCycle& cycle,
                                      const Constellation& s, std::uint32_t bins) {
  if (bins < 2) throw InputError("analysis: at least two bins are required");
  UniformityReport report;
  report.s = s;
  report.stage = cycle.stage();
  report.bins = bins;
  report.histogram.assign(bins, 0);

  const auto& gaps = cycle.gaps();
  const auto& pat = s.gaps();
  const std::uint64_t n = gaps.size();
  const std::uint64_t j = pat.size();
  const std::uint64_t span = cycle.span();
  const std::uint64_t p_next = cycle.next_prime();
  const std::uint64_t square = p_next * p_next;
  const std::uint64_t window_lo = p_next;
  const std::uint64_t window_hi = std::min(square, span);

  const auto bin_of = [&](std::uint64_t start_value) {
    // start_value is the left endpoint 1 + partial_sum(i-1), in [1, span].
    const auto idx = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(start_value - 1) * bins) / span);
    return std::min<std::uint64_t>(idx, bins - 1);
  };

  const auto matches_from = [&](std::uint64_t i0) {
    for (std::size_t t = 0; t < j; ++t)
      if (gaps[(i0 + t) % n] != pat[t]) return false;
    return true;
  };

  // Chunked scan; each chunk re-derives its base partial sum once.
  int chunks = 1;
#ifdef _OPENMP
  if (n >= (1u << 16)) chunks = std::max(1, omp_get_max_threads() * 4);
#endif
  const std::uint64_t per = n / static_cast<std::uint64_t>(chunks) + 1;
  std::vector<std::uint64_t> chunk_base(static_cast<std::size_t>(chunks) + 1, 0);
  {
    std::vector<std::uint64_t> chunk_sum(static_cast<std::size_t>(chunks), 0);
#pragma omp parallel for schedule(static, 1)
    for (int c = 0; c < chunks; ++c) {
      const std::uint64_t lo = per * static_cast<std::uint64_t>(c);
      const std::uint64_t hi = std::min(n, lo + per);
      std::uint64_t sum = 0;
      for (std::uint64_t i = lo; i < hi; ++i) sum += gaps[i];
      chunk_sum[static_cast<std::size_t>(c)] = sum;
    }
    for (int c = 0; c < chunks; ++c)
      chunk_base[static_cast<std::size_t>(c) + 1] =
          chunk_base[static_cast<std::size_t>(c)] +
          chunk_sum[static_cast<std::size_t>(c)];
  }

  std::uint64_t total = 0;
  std::uint64_t observed = 0;
  std::vector<std::vector<std::uint64_t>> local_bins(
      static_cast<std::size_t>(chunks), std::vector<std::uint64_t>(bins, 0));
#pragma omp parallel for schedule(static, 1) reduction(+ : total, observed)
  for (int c = 0; c < chunks; ++c) {
    const std::uint64_t lo = per * static_cast<std::uint64_t>(c);
    const std::uint64_t hi = std::min(n, lo + per);
    auto& mine = local_bins[static_cast<std::size_t>(c)];
    std::uint64_t start_value = 1 + chunk_base[static_cast<std::size_t>(c)];
    for (std::uint64_t i = lo; i < hi; ++i) {
      if (matches_from(i)) {
        ++total;
        mine[bin_of(start_value)] += 1;
        if (start_value >= window_lo && start_value <= window_hi) ++observed;
      }
      start_value += gaps[i];
    }
  }
  for (const auto& mine : local_bins)
    for (std::uint32_t b = 0; b < bins; ++b) report.histogram[b] += mine[b];

  if (total == 0) throw InputError("analysis: zero occurrences at this stage");
  report.total = total;
  report.observed_in_square = observed;
  report.expected_in_square =
      to_double(expected_below_square(BigInt(total), cycle.stage()));
  report.degenerate = total < bins;

  const double expected_per_bin =
      static_cast<double>(total) / static_cast<double>(bins);
  double chi = 0.0;
  for (const std::uint64_t count : report.histogram) {
    const double delta = static_cast<double>(count) - expected_per_bin;
    chi += delta * delta / expected_per_bin;
  }
  report.chi_square = chi;
  report.dof = bins - 1;
  return report;
}

std::vector<std::uint64_t> constellation_offsets(const Constellation& s) {
  std::vector<std::uint64_t> offsets{0};
  std::uint64_t sum = 0;
  for (const gap_t g : s.gaps()) {
    sum += g;
    offsets.push_back(sum);
  }
  return offsets;
}

Constellation tuple_to_constellation(std::span<const std::uint64_t> tuple) {
  if (tuple.size() < 2)
    throw InputError("analysis: a tuple needs at least two offsets");
  std::vector<gap_t> gaps;
  gaps.reserve(tuple.size() - 1);
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    if (tuple[i] <= tuple[i - 1])
      throw InputError("analysis: tuple offsets must be strictly ascending");
    const std::uint64_t diff = tuple[i] - tuple[i - 1];
    if (diff > 0xffff) throw InputError("analysis: tuple difference exceeds 16 bits");
    gaps.push_back(static_cast<gap_t>(diff));
  }
  return Constellation(std::move(gaps));
}

Admissibility admissible(std::span<const std::uint64_t> offsets) {
  Admissibility result;
  // Residue coverage is impossible once q exceeds the number of offsets.
  for (std::uint64_t q = 2; q <= offsets.size() + 1; q = next_prime_after(q)) {
    std::vector<char> seen(q, 0);
    std::size_t distinct = 0;
    for (const std::uint64_t b : offsets) {
      if (!seen[b % q]) {
        seen[b % q] = 1;
        ++distinct;
      }
    }
    if (distinct == q) {
      result.admissible = false;
      result.blocking_prime = q;
      return result;
    }
  }
  result.admissible = true;
  return result;
}

SpikeWitness spike_witness(const GapCycle& cycle) {
  const auto& gaps = cycle.gaps();
  const std::uint64_t n = gaps.size();
  SpikeWitness best;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (gaps[(i + 1) % n] != 2) continue;
    if (gaps[i] > best.gap) {
      best.gap = gaps[i];
      best.index = i + 1;
    }
  }
  return best;
}

IncreasingRun superlinear_witness(const GapCycle& cycle, std::uint32_t m) {
  if (m < 1) throw InputError("analysis: run length must be at least 1");
  if ((1ull << (m + 1)) > cycle.next_prime())
    throw BudgetError("analysis: 2^(m+1) exceeds p_{k+1}; no middle run of length " +
                      std::to_string(m) + " is guaranteed at stage " +
                      std::to_string(cycle.stage()));
  const auto& gaps = cycle.gaps();
  const std::uint64_t n = gaps.size();
  for (std::uint64_t i = 0; i < n; ++i) {
    bool increasing = true;
    for (std::uint32_t t = 1; t < m; ++t) {
      if (gaps[(i + t) % n] <= gaps[(i + t - 1) % n]) {
        increasing = false;
        break;
      }
    }
    if (increasing) {
      IncreasingRun run;
      run.index = i + 1;
      for (std::uint32_t t = 0; t < m; ++t)
        run.run.push_back(gaps[(i + t) % n]);
      return run;
    }
  }
  throw Error("analysis: no increasing run found despite the middle guarantee");
}

OscillationFinding oscillation_counterexample(std::uint32_t k_max,
                                              const BuildBudget& budget,
                                              CycleCache* cache) {
  OscillationFinding finding;
  finding.proposed = Constellation({2, 4, 6, 8, 2});
  const auto offsets = constellation_offsets(finding.proposed);
  finding.proposed_admissibility = admissible(offsets);

  GapCycle cycle = GapCycle::base();
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    if (k > 1) cycle = build_next_cycle(cycle, budget);
    if (cache) cache->store(cycle);
    if (!finding.proposed_found && finding.proposed.gap_count() <= cycle.length() &&
        count_occurrences(cycle, finding.proposed) > 0) {
      finding.proposed_found = true;
      finding.proposed_stage = k;
    }
    if (finding.witness_stage == 0 && cycle.length() >= 3) {
      // Any monotone triple of consecutive gaps breaks the alternation.
      const auto& gaps = cycle.gaps();
      const std::uint64_t n = gaps.size();
      for (std::uint64_t i = 0; i < n; ++i) {
        const gap_t a = gaps[i];
        const gap_t b = gaps[(i + 1) % n];
        const gap_t c = gaps[(i + 2) % n];
        if ((a < b && b < c) || (a > b && b > c)) {
          finding.witness = Constellation({a, b, c});
          finding.witness_stage = k;
          finding.witness_index = i + 1;
          break;
        }
      }
    }
  }
  return finding;
}

std::vector<CompositeRun> composite_runs_at(const GapCycle& cycle,
                                            std::uint64_t threshold) {
  std::vector<CompositeRun> runs;
  const auto& gaps = cycle.gaps();
  std::uint64_t value = 1;
  for (std::uint64_t i = 0; i < gaps.size(); ++i) {
    // Skip the first gap: its interior holds the sieving primes themselves.
    if (i > 0 && gaps[i] >= threshold)
      runs.push_back({i + 1, value, gaps[i], std::uint64_t{gaps[i]} - 1});
    value += gaps[i];
  }
  return runs;
}

std::vector<CompositeRun> composite_run_locator(const GapCycle& cycle) {
  if (cycle.stage() < 3)
    throw InputError("analysis: composite runs need stage 3 or later");
  const std::uint64_t p_prev = nth_prime(cycle.stage() - 1);
  return composite_runs_at(cycle, 2 * p_prev);
}

KTupleStageCheck ktuple_stage_check(std::span<const std::uint64_t> tuple,
                                    std::uint32_t k_max, const BuildBudget& budget,
                                    CycleCache* cache) {
  KTupleStageCheck check;
  check.s = tuple_to_constellation(tuple);
  check.adm = admissible(tuple);
  check.first_stage = find_first_stage(check.s, k_max, budget, cache);
  if (check.first_stage) {
    check.stage_prime = nth_prime(*check.first_stage);
    check.span_condition = 2 * check.stage_prime > tuple.back() - tuple.front();
  }
  return check;
}

}  // namespace pgap
