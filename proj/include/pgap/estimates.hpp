#ifndef PGAP_ESTIMATES_HPP
#define PGAP_ESTIMATES_HPP

#include <cstdint>
#include <span>

#include "pgap/census.hpp"
#include "pgap/common.hpp"

namespace pgap {

// Constants of the singular-series estimates.  c2 is the twin prime constant,
// c4 its quadruplet analogue; both are truncated products over primes <= q
// with a multiplicative tail bound.
struct Constants {
  double euler_gamma = 0.0;
  double c2 = 0.0;
  double c4 = 0.0;
  std::uint64_t truncation_q = 0;
  double c2_tail_rel = 0.0;
  double c4_tail_rel = 0.0;
};

Constants compute_constants(std::uint64_t q = 1'000'000);
const Constants& default_constants();

BigInt primorial(std::uint32_t k);          // Pi_k
BigInt totient_primorial(std::uint32_t k);  // Phi_k

// Average gap length Pi_k / Phi_k, exact.
BigRat mean_gap(std::uint32_t k);
// Mertens asymptotic e^gamma ln p_k for comparison.
double mean_gap_asymptotic(std::uint32_t k,
                           const Constants& constants = default_constants());

// Expected occurrences in an interval of the given length: N |I| / Pi_k.
BigRat expected_in_interval(const BigInt& occurrences, std::uint32_t k,
                            std::uint64_t interval_len);

// Expected occurrences in [p_{k+1}, p_{k+1}^2]: N (p^2 - p) / Pi_k, exact.
BigRat expected_below_square(const BigInt& occurrences, std::uint32_t k);
// Convenience form that projects the census count itself.
BigRat expected_below_square(const Constellation& s, std::uint32_t k,
                             const BuildBudget& budget = {});

// Asymptotic closed form 2 e^{-2 gamma} c2 (p^2 - p) / ln^2 p_k for the
// expected twins below the square; sanity comparisons only.
double twin_closed_form(std::uint32_t k,
                        const Constants& constants = default_constants());

// 2 c2 prod_{q | d, q odd} (q-1)/(q-2) * (F(p^2) - F(p)), F(x) = x / ln^2 x.
double hl_difference_estimate(std::uint64_t d, std::uint64_t p,
                              const Constants& constants = default_constants());

// (27/2) c4 (G(p^2) - G(p)) with G(x) = x / ln^4 x.
double hl_quadruplet_estimate(std::uint64_t p,
                              const Constants& constants = default_constants());

struct KTupleEstimate {
  double value = 0.0;
  bool admissible = false;
  std::uint64_t blocking_prime = 0;   // 0 when admissible
  double truncation_rel_bound = 0.0;  // relative bound on the dropped tail
};

// General tuple estimate: for offsets (0, b_2, ..., b_m) with k = m - 1,
//   2^k prod_{q odd <= Q} (q/(q-1))^{k+1} (1 - phi_q/q) * (H(p^2) - H(p)),
// H(x) = x / ln^{k+1} x, phi_q = distinct residues of the offsets mod q.
// Inadmissible tuples return exactly 0 with the blocking prime set.
KTupleEstimate hl_ktuple_estimate(std::span<const std::uint64_t> offsets,
                                  std::uint64_t p,
                                  const Constants& constants = default_constants());

// Estimate over the symmetry-reduced sample space [p_k, Pi_k/2 - 2^{j+1}],
// with the self-symmetric trailing occurrence removed for the single gap 2.
BigRat refined_expected(const BigInt& occurrences, std::uint32_t k,
                        bool exclude_final_two);
BigRat refined_expected(const Constellation& s, std::uint32_t k,
                        const BuildBudget& budget = {});

}  // namespace pgap

#endif
