#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <vector>

#include "pgap/gapcycle.hpp"
#include "pgap/primes.hpp"
#include "reference_data.hpp"

using namespace pgap;

namespace {

std::vector<gap_t> gaps_of(const GapCycle& c) { return c.gaps(); }

}  // namespace

TEST_CASE("base cycle G(2)") {
  const GapCycle base = GapCycle::base();
  CHECK(base.stage() == 1);
  CHECK(base.sieving_prime() == 2);
  CHECK(base.span() == 2);
  CHECK(base.length() == 1);
  CHECK(gaps_of(base) == std::vector<gap_t>{2});
  CHECK(base.next_prime() == 3);
}

TEST_CASE("next prime comes from the first gap") {
  CHECK(next_prime(GapCycle::base()) == 3);
  const GapCycle g3 = build_next_cycle(GapCycle::base());
  CHECK(next_prime(g3) == 5);
  const GapCycle g5 = build_next_cycle(g3);
  CHECK(next_prime(g5) == 7);
}

TEST_CASE("recursion reproduces the small cycles") {
  const GapCycle g3 = build_next_cycle(GapCycle::base());
  CHECK(gaps_of(g3) == std::vector<gap_t>{4, 2});
  CHECK(g3.span() == 6);

  const GapCycle g5 = build_next_cycle(g3);
  CHECK(gaps_of(g5) == std::vector<gap_t>(refdata::kCycle5.begin(),
                                          refdata::kCycle5.end()));

  const GapCycle g7 = build_next_cycle(g5);
  CHECK(gaps_of(g7) == std::vector<gap_t>(refdata::kCycle7.begin(),
                                          refdata::kCycle7.end()));
  CHECK(g7.length() == 48);
  CHECK(g7.span() == 210);
}

TEST_CASE("build statistics") {
  const GapCycle g5 = build_cycle_to(3);
  BuildStats stats;
  const GapCycle g7 = build_next_cycle(g5, {}, &stats);
  CHECK(stats.closures == g5.length());
  CHECK(stats.removed_first == 7);
  CHECK(stats.removed_second == 49);  // the next prime squared
  CHECK(g7.length() == (7 - 1) * g5.length());
}

TEST_CASE("serial and parallel builds agree bit for bit") {
  GapCycle serial = GapCycle::base();
  GapCycle parallel = GapCycle::base();
  for (std::uint32_t k = 2; k <= 8; ++k) {
    serial = build_next_cycle_serial(serial);
    parallel = build_next_cycle(parallel);
    REQUIRE(serial == parallel);
  }
  // Repeated builds are bit-identical.
  const GapCycle again = build_cycle_to(8);
  CHECK(again == parallel);
}

TEST_CASE("oracle equivalence at small stages") {
  CHECK(gaps_of(oracle_cycle(2)) == std::vector<gap_t>{4, 2});
  CHECK(gaps_of(oracle_cycle(3)) == std::vector<gap_t>(refdata::kCycle5.begin(),
                                                       refdata::kCycle5.end()));
  CHECK(gaps_of(oracle_cycle(4)) == std::vector<gap_t>(refdata::kCycle7.begin(),
                                                       refdata::kCycle7.end()));
  for (std::uint32_t k = 1; k <= 6; ++k)
    CHECK(build_cycle_to(k) == oracle_cycle(k));
}

TEST_CASE("stage products") {
  // Phi_9 and Pi_9 as products over the first nine primes.
  std::uint64_t phi = 1, span = 1;
  for (std::uint32_t i = 1; i <= 9; ++i) {
    phi *= nth_prime(i) - 1;
    span *= nth_prime(i);
  }
  CHECK(phi == 36495360);
  CHECK(span == 223092870);

  const GapCycle g5 = build_cycle_to(3);
  CHECK(g5.length() == 8);
  CHECK(g5.span() == 30);
  CHECK(build_cycle_to(1).span() == 2);
}

TEST_CASE("partial sums") {
  const GapCycle g5 = build_cycle_to(3);
  CHECK(g5.partial_sum(0) == 0);
  CHECK(g5.partial_sum(1) == 6);
  CHECK(g5.partial_sum(2) == 10);
  CHECK(g5.partial_sum(8) == 30);
  CHECK_THROWS_AS((void)g5.partial_sum(9), InputError);
}

TEST_CASE("budget limits are enforced") {
  BuildBudget tight;
  tight.stage_ceiling = 4;
  CHECK_THROWS_AS((void)build_cycle_to(5, tight), BudgetError);

  BuildBudget tiny;
  tiny.mem_bytes = 16;
  CHECK_THROWS_AS((void)build_next_cycle(build_cycle_to(3), tiny), BudgetError);

  CHECK_THROWS_AS((void)oracle_cycle(5, 100), BudgetError);
}

TEST_CASE("validate_structure accepts the built stages") {
  GapCycle cycle = GapCycle::base();
  for (std::uint32_t k = 2; k <= 7; ++k) {
    cycle = build_next_cycle(cycle);
    const auto report = validate_structure(cycle);
    INFO("stage ", k);
    for (const auto& violation : report.violations()) INFO(violation);
    CHECK(report.valid());
  }
}

TEST_CASE("validate_structure spots injected faults") {
  const GapCycle g5 = build_cycle_to(3);

  SUBCASE("trailing gap altered") {
    auto gaps = g5.gaps();
    gaps.back() = 4;
    gaps.front() = 4;  // keep the span intact
    const GapCycle broken(3, 5, 30, gaps);
    const auto report = validate_structure(broken);
    CHECK_FALSE(report.valid());
    bool trailing = false;
    for (const auto& v : report.violations())
      if (v.starts_with("trailing_two")) trailing = true;
    CHECK(trailing);
  }

  SUBCASE("symmetry broken") {
    auto gaps = g5.gaps();
    std::swap(gaps[1], gaps[2]);  // 6,2,4,4,2,4,6,2
    const GapCycle broken(3, 5, 30, gaps);
    const auto report = validate_structure(broken);
    CHECK_FALSE(report.valid());
    bool symmetry = false;
    for (const auto& v : report.violations())
      if (v.starts_with("symmetry")) symmetry = true;
    CHECK(symmetry);
  }

  SUBCASE("wrong length for the stage") {
    const GapCycle broken(4, 7, 30, g5.gaps());
    CHECK_FALSE(validate_structure(broken).valid());
  }
}

TEST_CASE("middle constellation") {
  // Smallest j with 2^{j+1} beyond the next prime.
  CHECK(middle_exponent(5) == 2);
  CHECK(middle_exponent(7) == 2);
  CHECK(middle_exponent(11) == 3);
  CHECK(middle_exponent(13) == 3);
  CHECK(middle_exponent(17) == 4);
  CHECK(middle_pattern(2) == std::vector<gap_t>{4, 2, 4, 2, 4});
  CHECK(middle_pattern(3) == std::vector<gap_t>{8, 4, 2, 4, 2, 4, 8});

  // The G(7) middle is the j=3 palindrome, centered at index Phi/2.
  const GapCycle g7 = build_cycle_to(4);
  const auto pattern = middle_pattern(3);
  for (std::size_t t = 0; t < pattern.size(); ++t)
    CHECK(g7.gap(24 - 3 + t) == pattern[t]);
}

TEST_CASE("two entries of twice the previous prime") {
  const GapCycle g7 = build_cycle_to(4);
  std::uint64_t tens = 0;
  for (const gap_t g : g7.gaps()) tens += g == 10;
  CHECK(tens == 2);
}
