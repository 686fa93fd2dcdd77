#include "pgap/estimates.hpp"

#include <cmath>
#include <mutex>

#include "pgap/primes.hpp"

namespace pgap {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606;

}  // namespace

Constants compute_constants(std::uint64_t q) {
  Constants constants;
  constants.euler_gamma = kEulerGamma;
  constants.truncation_q = q;

  long double c2 = 1.0L;
  long double c4 = 1.0L;
  for (const std::uint64_t p : small_primes(q)) {
    if (p < 3) continue;
    const auto pd = static_cast<long double>(p);
    c2 *= pd * (pd - 2) / ((pd - 1) * (pd - 1));
    if (p >= 5) c4 *= pd * pd * pd * (pd - 4) / ((pd - 1) * (pd - 1) * (pd - 1) * (pd - 1));
  }
  constants.c2 = static_cast<double>(c2);
  constants.c4 = static_cast<double>(c4);

  // Dropped factors are 1 - O(1/p^2); the log of the tail is below the prime
  // zeta tail, about 1/(q ln q).
  const double zeta_tail = 1.0 / (static_cast<double>(q) * std::log(static_cast<double>(q)));
  constants.c2_tail_rel = 2.0 * zeta_tail;
  constants.c4_tail_rel = 8.0 * zeta_tail;
  return constants;
}

const Constants& default_constants() {
  static const Constants constants = compute_constants();
  return constants;
}

BigInt primorial(std::uint32_t k) {
  BigInt product = 1;
  for (std::uint32_t i = 1; i <= k; ++i) product *= nth_prime(i);
  return product;
}

BigInt totient_primorial(std::uint32_t k) {
  BigInt product = 1;
  for (std::uint32_t i = 1; i <= k; ++i) product *= nth_prime(i) - 1;
  return product;
}

BigRat mean_gap(std::uint32_t k) {
  if (k < 1) throw InputError("estimates: stage must be at least 1");
  return BigRat(primorial(k), totient_primorial(k));
}

double mean_gap_asymptotic(std::uint32_t k, const Constants& constants) {
  return std::exp(constants.euler_gamma) *
         std::log(static_cast<double>(nth_prime(k)));
}

BigRat expected_in_interval(const BigInt& occurrences, std::uint32_t k,
                            std::uint64_t interval_len) {
  return BigRat(occurrences * interval_len, primorial(k));
}

BigRat expected_below_square(const BigInt& occurrences, std::uint32_t k) {
  const std::uint64_t p_next = nth_prime(k + 1);
  return expected_in_interval(occurrences, k, p_next * p_next - p_next);
}

BigRat expected_below_square(const Constellation& s, std::uint32_t k,
                             const BuildBudget& budget) {
  const std::uint32_t seed = std::min(choose_seed_stage(s), k);
  const auto ledger = project_counts(s, seed, k, budget);
  return expected_below_square(ledger.target_count(k), k);
}

double twin_closed_form(std::uint32_t k, const Constants& constants) {
  const auto p_next = static_cast<double>(nth_prime(k + 1));
  const double log_p = std::log(static_cast<double>(nth_prime(k)));
  return 2.0 * std::exp(-2.0 * constants.euler_gamma) * constants.c2 *
         (p_next * p_next - p_next) / (log_p * log_p);
}

namespace {

double count_integral(std::uint64_t p, unsigned log_power) {
  // F(p^2) - F(p) with F(x) = x / ln^power x.
  const auto integral_point = [log_power](double x) {
    return x / std::pow(std::log(x), static_cast<double>(log_power));
  };
  const auto pd = static_cast<double>(p);
  return integral_point(pd * pd) - integral_point(pd);
}

}  // namespace

double hl_difference_estimate(std::uint64_t d, std::uint64_t p,
                              const Constants& constants) {
  if (d < 2 || d % 2 != 0)
    throw InputError("estimates: differences must be even and at least 2");
  double product = 1.0;
  std::uint64_t rest = d;
  for (std::uint64_t q = 3; q * q <= rest; q += 2) {
    if (rest % q) continue;
    product *= static_cast<double>(q - 1) / static_cast<double>(q - 2);
    while (rest % q == 0) rest /= q;
  }
  if (rest > 2) product *= static_cast<double>(rest - 1) / static_cast<double>(rest - 2);
  return 2.0 * constants.c2 * product * count_integral(p, 2);
}

double hl_quadruplet_estimate(std::uint64_t p, const Constants& constants) {
  return 13.5 * constants.c4 * count_integral(p, 4);
}

KTupleEstimate hl_ktuple_estimate(std::span<const std::uint64_t> offsets,
                                  std::uint64_t p, const Constants& constants) {
  if (offsets.size() < 2 || offsets.front() != 0)
    throw InputError("estimates: offsets must start at 0 and have length >= 2");
  for (std::size_t i = 1; i < offsets.size(); ++i)
    if (offsets[i] <= offsets[i - 1])
      throw InputError("estimates: offsets must be strictly ascending");

  KTupleEstimate result;
  const auto k = static_cast<unsigned>(offsets.size() - 1);

  long double product = 1.0L;
  for (const std::uint64_t q : small_primes(constants.truncation_q)) {
    if (q == 2) continue;
    std::size_t distinct;
    if (q > offsets.back()) {
      // Offsets differ by less than q, so their residues are all distinct.
      distinct = offsets.size();
    } else {
      std::vector<char> residue(q, 0);
      distinct = 0;
      for (const std::uint64_t b : offsets) {
        if (!residue[b % q]) {
          residue[b % q] = 1;
          ++distinct;
        }
      }
      if (distinct == q) {
        result.admissible = false;
        result.blocking_prime = q;
        result.value = 0.0;
        return result;
      }
    }
    const auto qd = static_cast<long double>(q);
    product *= std::pow(qd / (qd - 1), static_cast<int>(k + 1)) *
               (1.0L - static_cast<long double>(distinct) / qd);
  }
  result.admissible = true;
  result.truncation_rel_bound =
      static_cast<double>((k + 1) * (k + 1)) /
      (static_cast<double>(constants.truncation_q) *
       std::log(static_cast<double>(constants.truncation_q)));
  result.value = static_cast<double>(
      std::pow(2.0L, static_cast<int>(k)) * product *
      static_cast<long double>(count_integral(p, k + 1)));
  return result;
}

BigRat refined_expected(const BigInt& occurrences, std::uint32_t k,
                        bool exclude_final_two) {
  const std::uint64_t p_k = nth_prime(k);
  const std::uint64_t p_next = nth_prime(k + 1);
  const std::uint32_t j = middle_exponent(p_next);
  // Sample space [p_k, Pi_k/2 - 2^{j+1}] on one symmetric half of the cycle.
  const BigInt denominator =
      primorial(k) - (BigInt(1) << (j + 2)) - 2 * BigInt(p_k);
  if (denominator <= 0)
    throw InputError("estimates: refined sample space is empty at this stage");
  const BigInt numerator =
      (exclude_final_two ? occurrences - 1 : occurrences) *
      (p_next * p_next - p_next);
  return BigRat(numerator, denominator);
}

BigRat refined_expected(const Constellation& s, std::uint32_t k,
                        const BuildBudget& budget) {
  const std::uint32_t seed = std::min(choose_seed_stage(s), k);
  const auto ledger = project_counts(s, seed, k, budget);
  const bool is_single_two = s.gaps().size() == 1 && s.gaps()[0] == 2;
  return refined_expected(ledger.target_count(k), k, is_single_two);
}

}  // namespace pgap
