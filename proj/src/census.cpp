#include "pgap/census.hpp"

#include <algorithm>
#include <charconv>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pgap/cycle_cache.hpp"
#include "pgap/primes.hpp"

namespace pgap {

Constellation::Constellation(std::vector<gap_t> gaps) : gaps_(std::move(gaps)) {
  if (gaps_.empty()) throw InputError("census: a constellation needs at least one gap");
  for (const gap_t g : gaps_)
    if (g < 2 || g % 2 != 0)
      throw InputError("census: constellation gaps must be even and at least 2");
}

Constellation Constellation::parse(std::string_view text) {
  std::vector<gap_t> gaps;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (p < end) {
    unsigned value = 0;
    const auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || value > 0xffff)
      throw InputError("census: cannot parse constellation '" + std::string(text) + "'");
    gaps.push_back(static_cast<gap_t>(value));
    p = next;
    if (p < end) {
      if (*p != ',')
        throw InputError("census: expected ',' in constellation '" +
                         std::string(text) + "'");
      ++p;
    }
  }
  return Constellation(std::move(gaps));
}

std::string Constellation::str() const {
  std::string out;
  for (std::size_t i = 0; i < gaps_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(gaps_[i]);
  }
  return out;
}

std::uint64_t Constellation::gap_sum() const {
  std::uint64_t sum = 0;
  for (const gap_t g : gaps_) sum += g;
  return sum;
}

Constellation Constellation::reversed() const {
  std::vector<gap_t> r(gaps_.rbegin(), gaps_.rend());
  return Constellation(std::move(r));
}

namespace {

// Window comparison helpers.  The bulk region needs no wrapping; the last
// j-1 start positions read across the seam.
bool matches_at(const std::vector<gap_t>& gaps, const std::vector<gap_t>& s,
                std::uint64_t start0) {
  for (std::size_t t = 0; t < s.size(); ++t)
    if (gaps[start0 + t] != s[t]) return false;
  return true;
}

bool matches_at_wrapped(const std::vector<gap_t>& gaps, const std::vector<gap_t>& s,
                        std::uint64_t start0) {
  const std::uint64_t n = gaps.size();
  for (std::size_t t = 0; t < s.size(); ++t)
    if (gaps[(start0 + t) % n] != s[t]) return false;
  return true;
}

}  // namespace

std::uint64_t count_occurrences_serial(const GapCycle& cycle,
                                       const Constellation& s) {
  const auto& gaps = cycle.gaps();
  const auto& pat = s.gaps();
  const std::uint64_t n = gaps.size();
  const std::uint64_t j = pat.size();

  std::uint64_t count = 0;
  if (j == 1) {
    const gap_t g = pat[0];
    for (const gap_t x : gaps) count += x == g;
    return count;
  }
  // A window longer than the cycle wraps more than once.
  const std::uint64_t bulk = j <= n ? n - j + 1 : 0;
  for (std::uint64_t i = 0; i < bulk; ++i) count += matches_at(gaps, pat, i);
  for (std::uint64_t i = bulk; i < n; ++i)
    count += matches_at_wrapped(gaps, pat, i);
  return count;
}

std::uint64_t count_occurrences(const GapCycle& cycle, const Constellation& s) {
  const auto& gaps = cycle.gaps();
  const auto& pat = s.gaps();
  const auto n = static_cast<std::int64_t>(gaps.size());
  const std::uint64_t j = pat.size();
  if (gaps.size() < (1u << 16) || j > gaps.size())
    return count_occurrences_serial(cycle, s);

  std::uint64_t count = 0;
  if (j == 1) {
    const gap_t g = pat[0];
#pragma omp parallel for schedule(static) reduction(+ : count)
    for (std::int64_t i = 0; i < n; ++i)
      count += gaps[static_cast<std::uint64_t>(i)] == g;
    return count;
  }
  const auto bulk = n - static_cast<std::int64_t>(j) + 1;
#pragma omp parallel for schedule(static) reduction(+ : count)
  for (std::int64_t i = 0; i < bulk; ++i)
    count += matches_at(gaps, pat, static_cast<std::uint64_t>(i));
  for (std::int64_t i = bulk; i < n; ++i)
    count += matches_at_wrapped(gaps, pat, static_cast<std::uint64_t>(i));
  return count;
}

std::vector<std::uint64_t> cyclic_occurrences_serial(const GapCycle& cycle,
                                                     const Constellation& s) {
  const auto& gaps = cycle.gaps();
  const auto& pat = s.gaps();
  const std::uint64_t n = gaps.size();
  const std::uint64_t j = pat.size();
  std::vector<std::uint64_t> out;
  const std::uint64_t bulk = j <= n ? n - j + 1 : 0;
  for (std::uint64_t i = 0; i < bulk; ++i)
    if (matches_at(gaps, pat, i)) out.push_back(i + 1);
  for (std::uint64_t i = bulk; i < n; ++i)
    if (matches_at_wrapped(gaps, pat, i)) out.push_back(i + 1);
  return out;
}

std::vector<std::uint64_t> cyclic_occurrences(const GapCycle& cycle,
                                              const Constellation& s) {
  const auto& gaps = cycle.gaps();
  if (gaps.size() < (1u << 16) || s.gap_count() > gaps.size())
    return cyclic_occurrences_serial(cycle, s);

  const auto& pat = s.gaps();
  const std::uint64_t n = gaps.size();
  const std::uint64_t j = pat.size();
  const std::uint64_t bulk = n - j + 1;

  int chunks = 1;
#ifdef _OPENMP
  chunks = std::max(1, omp_get_max_threads() * 4);
#endif
  const std::uint64_t per = bulk / static_cast<std::uint64_t>(chunks) + 1;
  std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(static, 1)
  for (int c = 0; c < chunks; ++c) {
    const std::uint64_t lo = per * static_cast<std::uint64_t>(c);
    const std::uint64_t hi = std::min(bulk, lo + per);
    auto& mine = partial[static_cast<std::size_t>(c)];
    for (std::uint64_t i = lo; i < hi; ++i)
      if (matches_at(gaps, pat, i)) mine.push_back(i + 1);
  }

  std::vector<std::uint64_t> out;
  for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
  for (std::uint64_t i = bulk; i < n; ++i)
    if (matches_at_wrapped(gaps, pat, i)) out.push_back(i + 1);
  return out;
}

std::set<Constellation> predecessors(const Constellation& s) {
  std::set<Constellation> out;
  const auto& gaps = s.gaps();
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    for (gap_t b = 2; b + 2 <= gaps[i]; b = static_cast<gap_t>(b + 2)) {
      std::vector<gap_t> split;
      split.reserve(gaps.size() + 1);
      split.insert(split.end(), gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(i));
      split.push_back(b);
      split.push_back(static_cast<gap_t>(gaps[i] - b));
      split.insert(split.end(), gaps.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                   gaps.end());
      out.insert(Constellation(std::move(split)));
    }
  }
  return out;
}

std::set<Constellation> predecessor_closure(const Constellation& s,
                                            std::uint64_t max_sum) {
  if (s.gap_sum() > max_sum)
    throw BudgetError("census: gap sum " + std::to_string(s.gap_sum()) +
                      " exceeds the closure bound " + std::to_string(max_sum));
  std::set<Constellation> closure{s};
  std::vector<Constellation> frontier{s};
  while (!frontier.empty()) {
    std::vector<Constellation> next;
    for (const auto& member : frontier) {
      for (auto& pred : predecessors(member)) {
        if (closure.insert(pred).second) next.push_back(pred);
      }
    }
    frontier = std::move(next);
  }
  return closure;
}

RecurrenceValidity recurrence_validity(const Constellation& s, std::uint32_t k,
                                       std::uint64_t max_sum) {
  RecurrenceValidity result;
  const std::uint64_t p_next = nth_prime(k + 1);
  for (const auto& member : predecessor_closure(s, max_sum)) {
    if (member.gap_sum() >= 2 * p_next)
      result.issues.push_back(
          {member, "gap sum " + std::to_string(member.gap_sum()) +
                       " is not below 2 p_{k+1} = " + std::to_string(2 * p_next)});
    if (member.gap_count() + 1 >= p_next)
      result.issues.push_back(
          {member, "gap count " + std::to_string(member.gap_count()) +
                       " is not below p_{k+1} - 1 = " + std::to_string(p_next - 1)});
  }
  result.valid = result.issues.empty();
  return result;
}

CensusLedger::CensusLedger(Constellation target, std::vector<Constellation> members,
                           std::uint32_t base_stage, std::uint64_t base_prime,
                           std::vector<BigInt> base_counts)
    : target_(std::move(target)), members_(std::move(members)) {
  stages_.push_back(base_stage);
  primes_.push_back(base_prime);
  counts_.push_back(std::move(base_counts));
}

std::uint64_t CensusLedger::stage_prime(std::uint32_t k) const {
  if (k < stages_.front() || k > stages_.back())
    throw InputError("census: stage not present in the ledger");
  return primes_[k - stages_.front()];
}

std::size_t CensusLedger::member_index(const Constellation& member) const {
  const auto it = std::lower_bound(members_.begin(), members_.end(), member);
  if (it == members_.end() || *it != member)
    throw InputError("census: constellation not in the ledger closure");
  return static_cast<std::size_t>(it - members_.begin());
}

const BigInt& CensusLedger::count(const Constellation& member,
                                  std::uint32_t k) const {
  if (k < stages_.front() || k > stages_.back())
    throw InputError("census: stage not present in the ledger");
  return counts_[k - stages_.front()][member_index(member)];
}

void CensusLedger::append_stage(std::uint64_t prime, std::vector<BigInt> counts) {
  stages_.push_back(stages_.back() + 1);
  primes_.push_back(prime);
  counts_.push_back(std::move(counts));
}

CensusLedger seed_census(const GapCycle& cycle, const Constellation& target,
                         std::uint64_t max_sum) {
  const auto closure = predecessor_closure(target, max_sum);
  std::vector<Constellation> members(closure.begin(), closure.end());
  std::vector<BigInt> counts;
  counts.reserve(members.size());
  for (const auto& member : members)
    counts.emplace_back(count_occurrences(cycle, member));
  return CensusLedger(target, std::move(members), cycle.stage(),
                      cycle.sieving_prime(), std::move(counts));
}

CensusLedger recurrence_step(const CensusLedger& ledger, std::uint32_t k) {
  if (ledger.last_stage() != k)
    throw InputError("census: ledger is at stage " +
                     std::to_string(ledger.last_stage()) + ", not " +
                     std::to_string(k));
  const std::uint64_t p_next = nth_prime(k + 1);
  for (const auto& member : ledger.members()) {
    if (member.gap_sum() >= 2 * p_next)
      throw ValidityError("census: at stage " + std::to_string(k) + ", [" +
                          member.str() + "] has gap sum " +
                          std::to_string(member.gap_sum()) +
                          ", not below 2 p_{k+1} = " + std::to_string(2 * p_next));
    if (member.gap_count() + 1 >= p_next)
      throw ValidityError("census: at stage " + std::to_string(k) + ", [" +
                          member.str() + "] has " +
                          std::to_string(member.gap_count()) +
                          " gaps, not below p_{k+1} - 1 = " +
                          std::to_string(p_next - 1));
  }
  const auto& members = ledger.members();
  std::vector<BigInt> next(members.size());
  for (std::size_t m = 0; m < members.size(); ++m) {
    const auto& member = members[m];
    const BigInt& current = ledger.count(member, k);
    BigInt value = current * (p_next - (member.gap_count() + 1));
    for (const auto& driver : predecessors(member))
      value += ledger.count(driver, k);  // drivers stay inside the closure
    next[m] = std::move(value);
  }

  CensusLedger extended = ledger;
  extended.append_stage(p_next, std::move(next));
  return extended;
}

std::uint32_t choose_seed_stage(const Constellation& s, std::uint64_t max_sum) {
  const auto closure = predecessor_closure(s, max_sum);
  std::uint32_t j_max = 0;
  for (const auto& member : closure) j_max = std::max(j_max, member.gap_count());
  const std::uint64_t sum = s.gap_sum();
  // Validity at stage k governs the transition to k+1 and, since the stage
  // primes increase, holds at every later stage too.
  for (std::uint32_t k = 1;; ++k) {
    const std::uint64_t p_next = nth_prime(k + 1);
    if (sum < 2 * p_next && j_max + 1 < p_next) return k;
  }
}

CensusLedger project_counts(const Constellation& s, std::uint32_t k_seed,
                            std::uint32_t k_target, const BuildBudget& budget,
                            CycleCache* cache, std::uint64_t max_sum) {
  if (k_target < k_seed)
    throw InputError("census: target stage is below the seed stage");
  const GapCycle seed_cycle = build_cycle_to(k_seed, budget, cache);
  CensusLedger ledger = seed_census(seed_cycle, s, max_sum);
  for (std::uint32_t k = k_seed; k < k_target; ++k)
    ledger = recurrence_step(ledger, k);
  return ledger;
}

std::optional<std::uint32_t> find_first_stage(const Constellation& s,
                                              std::uint32_t k_max,
                                              const BuildBudget& budget,
                                              CycleCache* cache) {
  GapCycle cycle = GapCycle::base();
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    if (k > 1) cycle = build_next_cycle(cycle, budget);
    if (cache) cache->store(cycle);
    if (s.gap_count() <= cycle.length() && count_occurrences(cycle, s) > 0)
      return k;
  }
  return std::nullopt;
}

}  // namespace pgap
