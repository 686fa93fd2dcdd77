#include "pgap/primes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pgap {

std::vector<std::uint64_t> PrimeGapStream::gaps() const {
  std::vector<std::uint64_t> out;
  if (primes.size() < 2) return out;
  out.reserve(primes.size() - 1);
  for (std::size_t i = 1; i < primes.size(); ++i)
    out.push_back(primes[i] - primes[i - 1]);
  return out;
}

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<char> composite(limit + 1, 0);
  for (std::uint64_t i = 2; i * i <= limit; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i)
    if (!composite[i]) primes.push_back(i);
  return primes;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t next_prime_after(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime_u64(c)) ++c;
  return c;
}

namespace {

// Shared ascending prime list, grown on demand for stage lookups.
std::vector<std::uint64_t>& stage_primes(std::uint64_t need_count,
                                         std::uint64_t need_value) {
  static std::vector<std::uint64_t> primes;
  static std::uint64_t sieved_to = 0;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  while (primes.size() < need_count ||
         (need_value > 0 && (primes.empty() || primes.back() < need_value))) {
    sieved_to = std::max<std::uint64_t>({sieved_to * 2, 1 << 16, need_value + 1});
    primes = small_primes(sieved_to);
  }
  return primes;
}

}  // namespace

std::uint64_t nth_prime(std::uint32_t k) {
  if (k == 0) throw InputError("primes: stage indices are 1-based");
  const auto& primes = stage_primes(k, 0);
  return primes[k - 1];
}

std::uint32_t prime_index(std::uint64_t p) {
  const auto& primes = stage_primes(0, p);
  const auto it = std::lower_bound(primes.begin(), primes.end(), p);
  if (it == primes.end() || *it != p)
    throw InputError("primes: " + std::to_string(p) + " is not prime");
  return static_cast<std::uint32_t>(it - primes.begin()) + 1;
}

namespace {

// Odd-only segmented sieve over [low, high]; calls fn(p) for each prime in
// ascending order.  base_primes must cover sqrt(high).
template <typename Fn>
void sieve_range(std::uint64_t low, std::uint64_t high,
                 const std::vector<std::uint64_t>& base_primes,
                 std::uint32_t segment_bits, Fn&& fn) {
  if (high < low) return;
  if (low <= 2 && 2 <= high) fn(2);

  const std::uint64_t slots_per_segment = 1ull << segment_bits;
  std::uint64_t from = std::max<std::uint64_t>(low, 3);
  if (from % 2 == 0) ++from;
  std::vector<char> sieve(slots_per_segment);

  while (from <= high) {
    const std::uint64_t to =
        std::min(high, from + 2 * (slots_per_segment - 1));
    const std::uint64_t slots = (to - from) / 2 + 1;
    std::fill(sieve.begin(), sieve.begin() + slots, 1);

    for (const std::uint64_t p : base_primes) {
      if (p == 2) continue;
      if (p * p > to) break;
      std::uint64_t start = std::max(p * p, ((from + p - 1) / p) * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t m = start; m <= to; m += 2 * p)
        sieve[(m - from) / 2] = 0;
    }

    for (std::uint64_t i = 0; i < slots; ++i)
      if (sieve[i]) fn(from + 2 * i);
    from = to + 2 - (to - from) % 2;  // next odd after to
  }
}

std::vector<std::uint64_t> base_primes_for(std::uint64_t high) {
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(high)));
  return small_primes(root + 2);
}

void check_ceiling(std::uint64_t hi, const SieveConfig& config) {
  if (hi > config.ceiling)
    throw BudgetError("primes: bound " + std::to_string(hi) +
                      " exceeds the sieve ceiling " +
                      std::to_string(config.ceiling));
}

// Count (or record) start-anchored occurrences with starting prime in
// [lo, hi].  Scans primes from lo upward and keeps a rolling window; the
// window may extend past hi, so sieving continues until it drains.
template <typename OnMatch>
void scan_constellations(std::span<const Constellation> targets,
                         std::uint64_t lo, std::uint64_t hi,
                         const SieveConfig& config, OnMatch&& on_match) {
  std::size_t max_j = 0;
  for (const auto& s : targets) max_j = std::max<std::size_t>(max_j, s.gap_count());
  if (max_j == 0) return;

  // Ring of the last max_j+1 primes seen.
  std::vector<std::uint64_t> window;
  window.reserve(max_j + 1);
  bool done = false;

  auto feed = [&](std::uint64_t p) {
    if (done) return;
    window.push_back(p);
    if (window.size() > max_j + 1) window.erase(window.begin());
    if (window.front() > hi) {
      done = true;
      return;
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto& gaps = targets[t].gaps();
      const std::size_t j = gaps.size();
      if (window.size() < j + 1) continue;
      const std::size_t anchor = window.size() - j - 1;
      const std::uint64_t start = window[anchor];
      if (start < lo || start > hi) continue;
      bool match = true;
      for (std::size_t i = 0; i < j; ++i) {
        if (window[anchor + i + 1] - window[anchor + i] != gaps[i]) {
          match = false;
          break;
        }
      }
      if (match) on_match(t, start);
    }
  };

  // Trailing primes of the last windows lie past hi; gaps below 2^32 are far
  // smaller than this slack.
  const std::uint64_t slack = 4096 * max_j;
  const std::vector<std::uint64_t> base = base_primes_for(hi + slack);
  std::uint64_t from = lo;
  while (!done) {
    if (from > hi + slack)
      throw Error("primes: ran off the sieve looking for trailing primes");
    const std::uint64_t to = from + (1ull << 22);
    sieve_range(from, to, base, config.segment_bits, feed);
    from = to + 1;
  }
}

}  // namespace

PrimeGapStream segmented_primes(std::uint64_t a, std::uint64_t b,
                                const SieveConfig& config) {
  if (a < 2 || a > b) throw InputError("primes: interval must satisfy 2 <= a <= b");
  check_ceiling(b, config);
  PrimeGapStream stream;
  stream.lo = a;
  stream.hi = b;
  const auto base = base_primes_for(b);
  sieve_range(a, b, base, config.segment_bits,
              [&](std::uint64_t p) { stream.primes.push_back(p); });
  return stream;
}

std::uint64_t count_constellations_in_serial(const Constellation& s,
                                             std::uint64_t lo, std::uint64_t hi,
                                             const SieveConfig& config) {
  check_ceiling(hi, config);
  std::uint64_t count = 0;
  const Constellation targets[] = {s};
  scan_constellations(targets, lo, hi, config,
                      [&](std::size_t, std::uint64_t) { ++count; });
  return count;
}

std::uint64_t count_constellations_in(const Constellation& s, std::uint64_t lo,
                                      std::uint64_t hi, const SieveConfig& config) {
  check_ceiling(hi, config);
  if (hi - lo < (1u << 22)) return count_constellations_in_serial(s, lo, hi, config);

  int blocks = 1;
#ifdef _OPENMP
  blocks = std::max(1, omp_get_max_threads());
#endif
  const std::uint64_t per = (hi - lo) / static_cast<std::uint64_t>(blocks) + 1;
  std::uint64_t total = 0;
#pragma omp parallel for schedule(static, 1) reduction(+ : total)
  for (int b = 0; b < blocks; ++b) {
    const std::uint64_t block_lo = lo + per * static_cast<std::uint64_t>(b);
    if (block_lo > hi) continue;
    const std::uint64_t block_hi = std::min(hi, block_lo + per - 1);
    total += count_constellations_in_serial(s, block_lo, block_hi, config);
  }
  return total;
}

std::uint64_t count_prime_constellations(const Constellation& s, std::uint64_t p,
                                         const SieveConfig& config) {
  if (!is_prime_u64(p)) throw InputError("primes: anchor must be prime");
  return count_constellations_in(s, p, p * p, config);
}

std::vector<std::vector<std::uint64_t>> constellation_starts(
    std::span<const Constellation> targets, std::uint64_t lo, std::uint64_t hi,
    const SieveConfig& config) {
  check_ceiling(hi, config);
  std::vector<std::vector<std::uint64_t>> starts(targets.size());

  int blocks = 1;
#ifdef _OPENMP
  blocks = std::max(1, omp_get_max_threads());
#endif
  const std::uint64_t per = (hi - lo) / static_cast<std::uint64_t>(blocks) + 1;
  std::vector<std::vector<std::vector<std::uint64_t>>> partial(
      static_cast<std::size_t>(blocks),
      std::vector<std::vector<std::uint64_t>>(targets.size()));

#pragma omp parallel for schedule(static, 1)
  for (int b = 0; b < blocks; ++b) {
    const std::uint64_t block_lo = lo + per * static_cast<std::uint64_t>(b);
    if (block_lo > hi) continue;
    const std::uint64_t block_hi = std::min(hi, block_lo + per - 1);
    scan_constellations(targets, block_lo, block_hi, config,
                        [&](std::size_t t, std::uint64_t start) {
                          partial[static_cast<std::size_t>(b)][t].push_back(start);
                        });
  }
  for (int b = 0; b < blocks; ++b)
    for (std::size_t t = 0; t < targets.size(); ++t)
      starts[t].insert(starts[t].end(), partial[static_cast<std::size_t>(b)][t].begin(),
                       partial[static_cast<std::size_t>(b)][t].end());
  return starts;
}

PrimeGapStream prime_gaps_in_cycle_window(const GapCycle& cycle) {
  const std::uint64_t p_next = cycle.next_prime();
  const std::uint64_t square = p_next * p_next;
  PrimeGapStream stream;
  stream.lo = p_next;

  // Rough numbers below the square are prime.  At the smallest stages the
  // square outruns one period, so the gaps are read cyclically.
  std::uint64_t value = 1;
  for (std::uint64_t i = 0;; ++i) {
    value += cycle.gaps()[i % cycle.length()];
    if (value >= square) break;
    stream.primes.push_back(value);
  }
  stream.hi = stream.primes.empty() ? p_next : stream.primes.back();
  return stream;
}

}  // namespace pgap
