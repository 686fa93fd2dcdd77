#include "pgap/gapcycle.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pgap/cycle_cache.hpp"
#include "pgap/primes.hpp"

namespace pgap {

GapCycle::GapCycle(std::uint32_t stage, std::uint64_t sieving_prime,
                   std::uint64_t span, std::vector<gap_t> gaps)
    : stage_(stage), prime_(sieving_prime), span_(span), gaps_(std::move(gaps)) {
  if (stage_ == 0 || gaps_.empty()) throw InputError("gapcycle: empty cycle");
}

GapCycle GapCycle::base() { return GapCycle(1, 2, 2, {gap_t{2}}); }

std::uint64_t GapCycle::partial_sum(std::uint64_t j) const {
  if (j > gaps_.size()) throw InputError("gapcycle: partial sum index out of range");
  std::uint64_t sum = 0;
  for (std::uint64_t i = 0; i < j; ++i) sum += gaps_[i];
  return sum;
}

std::uint64_t next_prime(const GapCycle& cycle) { return cycle.next_prime(); }

namespace {

struct NextStagePlan {
  std::uint64_t p_next = 0;
  std::uint64_t phi_next = 0;
  std::uint64_t span_next = 0;
  std::uint64_t extended = 0;  // p_next * Phi_k gaps before closures
};

NextStagePlan plan_next_stage(const GapCycle& cycle, const BuildBudget& budget) {
  NextStagePlan plan;
  plan.p_next = cycle.next_prime();
  const std::uint64_t phi = cycle.length();
  plan.phi_next = phi * (plan.p_next - 1);
  plan.span_next = cycle.span() * plan.p_next;
  plan.extended = phi * plan.p_next;

  const std::uint32_t k_next = cycle.stage() + 1;
  if (k_next > kMaxSupportedStage)
    throw BudgetError("gapcycle: stage " + std::to_string(k_next) +
                      " exceeds the 16-bit gap ceiling (k <= 12)");
  if (k_next > budget.stage_ceiling)
    throw BudgetError("gapcycle: stage " + std::to_string(k_next) +
                      " exceeds the configured stage ceiling " +
                      std::to_string(budget.stage_ceiling));
  // Output gaps + prefix sums of the source + closure positions.
  const std::uint64_t bytes =
      2 * plan.phi_next + 8 * (phi + 1) + 8 * phi + 2 * phi;
  if (bytes > budget.mem_bytes)
    throw BudgetError("gapcycle: building stage " + std::to_string(k_next) +
                      " needs about " + std::to_string(bytes) +
                      " bytes, over the budget of " +
                      std::to_string(budget.mem_bytes));
  return plan;
}

// Prefix sums S[0..phi] of the source gaps; S[phi] equals the span.
std::vector<std::uint64_t> prefix_sums(const GapCycle& cycle) {
  const auto& gaps = cycle.gaps();
  std::vector<std::uint64_t> sums(gaps.size() + 1);
  sums[0] = 0;
  for (std::size_t i = 0; i < gaps.size(); ++i) sums[i + 1] = sums[i] + gaps[i];
  return sums;
}

// Closure positions: the n-th struck value is p' * (1 + S[n]); the boundary
// it closes sits at extended index c * Phi_k + t with c = pos / Pi_k and
// S[t] = pos mod Pi_k.  Positions are strictly increasing in n.
std::vector<std::uint64_t> closure_positions(const GapCycle& cycle,
                                             const std::vector<std::uint64_t>& sums,
                                             std::uint64_t p_next, bool parallel,
                                             BuildStats* stats) {
  const std::uint64_t phi = cycle.length();
  const std::uint64_t span = cycle.span();
  std::vector<std::uint64_t> closures(phi);

  const auto position_of = [&](std::uint64_t n) {
    const std::uint64_t value = p_next * (1 + sums[n]);
    const std::uint64_t pos = value - 1;
    const std::uint64_t copy = pos / span;
    const std::uint64_t rem = pos % span;
    const auto it = std::lower_bound(sums.begin(), sums.end() - 1, rem);
    // Every struck value is coprime to the span, so rem is an exact prefix sum.
    if (it == sums.end() - 1 || *it != rem)
      throw Error("gapcycle: struck value does not land on a boundary");
    const auto t = static_cast<std::uint64_t>(it - sums.begin());
    return copy * phi + t;
  };

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t n = 0; n < static_cast<std::int64_t>(phi); ++n)
      closures[static_cast<std::uint64_t>(n)] =
          position_of(static_cast<std::uint64_t>(n));
  } else {
    for (std::uint64_t n = 0; n < phi; ++n) closures[n] = position_of(n);
  }

  if (stats) {
    stats->closures = phi;
    stats->removed_first = p_next;
    // The first gap is p' - 1, so the second struck value is always p'^2.
    stats->removed_second = p_next * (1 + sums[1]);
  }

  // Each boundary of the source cycle is closed in exactly one copy; anything
  // else means the construction went wrong.
  std::vector<std::uint64_t> seen((phi + 63) / 64, 0);
  for (std::uint64_t n = 0; n < phi; ++n) {
    const std::uint64_t base = closures[n] % phi;  // boundary class
    if (seen[base / 64] & (1ull << (base % 64)))
      throw Error("gapcycle: a boundary was closed twice during the recursion");
    seen[base / 64] |= 1ull << (base % 64);
    if (n > 0 && closures[n] <= closures[n - 1])
      throw Error("gapcycle: closure positions are not increasing");
  }
  return closures;
}

gap_t checked_gap(std::uint64_t value) {
  if (value > 0xffff)
    throw Error("gapcycle: merged gap exceeds 16 bits");
  return static_cast<gap_t>(value);
}

// Emit merged gaps for extended boundaries (from, to], writing output starting
// at out_index.  closures must be sorted; boundaries listed there are closed.
void emit_range(const GapCycle& cycle, const std::vector<std::uint64_t>& closures,
                std::uint64_t from, std::uint64_t to, std::uint64_t out_index,
                std::vector<gap_t>& out) {
  const auto& gaps = cycle.gaps();
  const std::uint64_t phi = cycle.length();
  auto next_closure = std::upper_bound(closures.begin(), closures.end(), from);
  std::uint64_t acc = 0;
  std::uint64_t o = out_index;
  for (std::uint64_t e = from + 1; e <= to; ++e) {
    acc += gaps[(e - 1) % phi];
    if (next_closure != closures.end() && *next_closure == e) {
      ++next_closure;
      continue;
    }
    out[o++] = checked_gap(acc);
    acc = 0;
  }
  if (acc != 0) throw Error("gapcycle: emit range ended inside a merged gap");
}

// Extended boundary of the (rank+1)-th surviving boundary: smallest e with
// e - |closures <= e| == rank + 1.
std::uint64_t survivor_boundary(const std::vector<std::uint64_t>& closures,
                                std::uint64_t extended, std::uint64_t rank) {
  std::uint64_t lo = 1, hi = extended;
  const std::uint64_t want = rank + 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const auto closed = static_cast<std::uint64_t>(
        std::upper_bound(closures.begin(), closures.end(), mid) -
        closures.begin());
    if (mid - closed >= want)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

GapCycle build_next_impl(const GapCycle& cycle, const BuildBudget& budget,
                         BuildStats* stats, bool parallel) {
  const NextStagePlan plan = plan_next_stage(cycle, budget);
  const auto sums = prefix_sums(cycle);
  const auto closures =
      closure_positions(cycle, sums, plan.p_next, parallel, stats);

  std::vector<gap_t> out(plan.phi_next);
  if (!parallel || plan.phi_next < (1u << 16)) {
    emit_range(cycle, closures, 0, plan.extended, 0, out);
  } else {
    int chunks = 1;
#ifdef _OPENMP
    chunks = std::max(1, omp_get_max_threads() * 4);
#endif
    const std::uint64_t per =
        (plan.phi_next + static_cast<std::uint64_t>(chunks) - 1) /
        static_cast<std::uint64_t>(chunks);
#pragma omp parallel for schedule(static, 1)
    for (std::int64_t c = 0; c < chunks; ++c) {
      const std::uint64_t out_lo = static_cast<std::uint64_t>(c) * per;
      if (out_lo >= plan.phi_next) continue;
      const std::uint64_t out_hi = std::min(out_lo + per, plan.phi_next);
      const std::uint64_t from =
          out_lo == 0 ? 0 : survivor_boundary(closures, plan.extended, out_lo - 1);
      const std::uint64_t to =
          survivor_boundary(closures, plan.extended, out_hi - 1);
      emit_range(cycle, closures, from, to, out_lo, out);
    }
  }

  return GapCycle(cycle.stage() + 1, plan.p_next, plan.span_next, std::move(out));
}

}  // namespace

GapCycle build_next_cycle(const GapCycle& cycle, const BuildBudget& budget,
                          BuildStats* stats) {
  return build_next_impl(cycle, budget, stats, true);
}

GapCycle build_next_cycle_serial(const GapCycle& cycle, const BuildBudget& budget,
                                 BuildStats* stats) {
  return build_next_impl(cycle, budget, stats, false);
}

GapCycle build_cycle_to(std::uint32_t k, const BuildBudget& budget,
                        CycleCache* cache) {
  if (k < 1) throw InputError("gapcycle: stage must be at least 1");
  if (k > budget.stage_ceiling)
    throw BudgetError("gapcycle: stage " + std::to_string(k) +
                      " exceeds the configured stage ceiling " +
                      std::to_string(budget.stage_ceiling));

  GapCycle cycle = GapCycle::base();
  if (cache) {
    if (const auto deepest = cache->deepest_cached(k)) {
      if (auto loaded = cache->load(*deepest)) cycle = std::move(*loaded);
    }
  }
  while (cycle.stage() < k) {
    cycle = build_next_cycle(cycle, budget);
    if (cache) cache->store(cycle);
  }
  return cycle;
}

GapCycle oracle_cycle(std::uint32_t k, std::uint64_t span_ceiling) {
  if (k < 1) throw InputError("gapcycle: stage must be at least 1");
  std::vector<std::uint64_t> primes;
  std::uint64_t span = 1;
  std::uint64_t phi = 1;
  std::uint64_t p = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    p = next_prime_after(p);
    primes.push_back(p);
    span *= p;
    phi *= p - 1;
    if (span > span_ceiling)
      throw BudgetError("gapcycle: oracle span " + std::to_string(span) +
                        " exceeds the ceiling " + std::to_string(span_ceiling));
  }

  std::vector<gap_t> gaps;
  gaps.reserve(phi);
  std::uint64_t prev = 1;
  // Candidates are odd: 2 divides everything else once k >= 1.
  for (std::uint64_t v = 3; v <= span + 1; v += 2) {
    bool coprime = true;
    for (std::size_t i = 1; i < primes.size(); ++i) {
      if (v % primes[i] == 0) {
        coprime = false;
        break;
      }
    }
    if (!coprime) continue;
    gaps.push_back(checked_gap(v - prev));
    prev = v;
  }
  if (gaps.size() != phi)
    throw Error("gapcycle: oracle produced the wrong number of gaps");
  return GapCycle(k, primes.back(), span, std::move(gaps));
}

bool ValidationReport::valid() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::violations() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name + ": " + c.detail);
  return out;
}

std::uint32_t middle_exponent(std::uint64_t p_next) {
  std::uint32_t j = 0;
  while ((1ull << (j + 1)) <= p_next) ++j;
  return j;
}

std::vector<gap_t> middle_pattern(std::uint32_t j) {
  std::vector<gap_t> pattern;
  for (std::uint32_t i = j; i >= 1; --i)
    pattern.push_back(static_cast<gap_t>(1u << i));
  pattern.push_back(4);
  for (std::uint32_t i = 1; i <= j; ++i)
    pattern.push_back(static_cast<gap_t>(1u << i));
  return pattern;
}

ValidationReport validate_structure(const GapCycle& cycle) {
  ValidationReport report;
  report.stage = cycle.stage();
  const auto& gaps = cycle.gaps();
  const std::uint64_t phi = cycle.length();
  const std::uint64_t span = cycle.span();
  const std::uint32_t k = cycle.stage();

  auto add = [&](std::string name, bool passed, std::string detail) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };

  // Length and span identities against the defining products.
  {
    std::uint64_t want_phi = 1, want_span = 1, p = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      p = next_prime_after(p);
      want_phi *= p - 1;
      want_span *= p;
    }
    add("length", phi == want_phi,
        "cycle has " + std::to_string(phi) + " gaps, expected " +
            std::to_string(want_phi));
    add("sieving_prime", cycle.sieving_prime() == p,
        "stage prime " + std::to_string(cycle.sieving_prime()) + ", expected " +
            std::to_string(p));
    std::uint64_t sum = 0;
    for (const gap_t g : gaps) sum += g;
    add("span_sum", sum == span && span == want_span,
        "gaps sum to " + std::to_string(sum) + ", span " + std::to_string(span) +
            ", expected " + std::to_string(want_span));
  }

  {
    const std::uint64_t q = next_prime_after(cycle.sieving_prime());
    add("first_gap_next_prime", std::uint64_t{gaps.front()} + 1 == q,
        "first gap " + std::to_string(gaps.front()) + " + 1 should be " +
            std::to_string(q));
  }

  add("trailing_two", gaps.back() == 2,
      "last gap is " + std::to_string(gaps.back()));

  {
    bool all_even = true;
    for (const gap_t g : gaps)
      if (g % 2 != 0 || g == 0) {
        all_even = false;
        break;
      }
    add("all_even", all_even, "every gap must be a positive even number");
  }

  {
    // g_j = g_{Phi-j} for 1 <= j <= Phi-1.
    bool symmetric = true;
    std::uint64_t bad = 0;
    for (std::uint64_t j = 1; j + j <= phi; ++j) {
      if (gaps[j - 1] != gaps[phi - j - 1]) {
        symmetric = false;
        bad = j;
        break;
      }
    }
    add("symmetry", symmetric,
        symmetric ? "" : "g_" + std::to_string(bad) + " differs from its mirror");
  }

  {
    // A run of m+1 equal gaps g forces p | g for every prime p <= m+2.
    bool ok = true;
    std::string detail;
    std::uint64_t run_start = 0;
    for (std::uint64_t i = 1; i <= phi && ok; ++i) {
      const bool run_ends = i == phi || gaps[i] != gaps[i - 1];
      if (!run_ends) continue;
      const std::uint64_t run_len = i - run_start;
      if (run_len >= 2) {
        const std::uint64_t g = gaps[run_start];
        for (std::uint64_t p = 2; p <= run_len + 1 && ok; p = next_prime_after(p)) {
          if (g % p != 0) {
            ok = false;
            detail = "run of " + std::to_string(run_len) + " gaps of " +
                     std::to_string(g) + " not divisible by " + std::to_string(p);
          }
        }
      }
      run_start = i;
    }
    add("equal_run_divisibility", ok, detail);
  }

  if (k >= 2) {
    // The cycle is centered: the gap at index Phi/2 straddles Pi/2, and the
    // surrounding gaps form the powers-of-two palindrome.  Read cyclically so
    // the tiny stages are covered as well.
    const std::uint32_t j = middle_exponent(cycle.next_prime());
    const auto pattern = middle_pattern(j);
    const std::uint64_t center = phi / 2;  // 1-based index of the central gap
    bool match = true;
    for (std::size_t t = 0; t < pattern.size(); ++t) {
      const std::int64_t idx =
          static_cast<std::int64_t>(center) - static_cast<std::int64_t>(j) +
          static_cast<std::int64_t>(t);
      const std::uint64_t wrapped =
          static_cast<std::uint64_t>(((idx - 1) % static_cast<std::int64_t>(phi) +
                                      static_cast<std::int64_t>(phi)) %
                                     static_cast<std::int64_t>(phi));
      if (gaps[wrapped] != pattern[t]) {
        match = false;
        break;
      }
    }
    std::string want;
    for (const gap_t g : pattern) want += std::to_string(g) + " ";
    add("middle_constellation", match,
        "expected " + want + "around index " + std::to_string(center));
  }

  if (k >= 3) {
    // At least two entries equal to twice the previous stage prime.
    std::uint64_t p_prev = 1, p = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      p_prev = p;
      p = next_prime_after(p);
    }
    const std::uint64_t want = 2 * p_prev;
    std::uint64_t found = 0;
    for (const gap_t g : gaps)
      if (g == want) ++found;
    add("two_gaps_twice_previous_prime", found >= 2,
        "found " + std::to_string(found) + " gaps of " + std::to_string(want));
  }

  {
    // p_k^2 was struck while this cycle was formed, so its residue must not
    // appear among the cycle's values.
    const std::uint64_t target = (cycle.sieving_prime() * cycle.sieving_prime()) % span;
    bool absent = true;
    std::uint64_t value = 1;
    for (std::uint64_t i = 0; i < phi && absent; ++i) {
      if (value == target) absent = false;
      value += gaps[i];
    }
    add("square_removed", absent,
        "p_k^2 = " + std::to_string(cycle.sieving_prime() * cycle.sieving_prime()) +
            " still present modulo the span");
  }

  return report;
}

}  // namespace pgap
