#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "pgap/census.hpp"
#include "pgap/gapcycle.hpp"
#include "reference_data.hpp"

using namespace pgap;

namespace {

// Independent matcher: counts cyclic windows on a plain array, one index at
// a time.  Kept separate from the library scan paths on purpose.
std::uint64_t naive_count(const std::vector<gap_t>& gaps,
                          const std::vector<gap_t>& pattern) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    bool match = true;
    for (std::size_t t = 0; t < pattern.size(); ++t)
      if (gaps[(i + t) % gaps.size()] != pattern[t]) {
        match = false;
        break;
      }
    count += match;
  }
  return count;
}

Constellation c(std::initializer_list<gap_t> gaps) {
  return Constellation(std::vector<gap_t>(gaps));
}

}  // namespace

TEST_CASE("constellation text form") {
  CHECK(Constellation::parse("2,10,2").gaps() == std::vector<gap_t>{2, 10, 2});
  CHECK(Constellation::parse("2").gap_count() == 1);
  CHECK(c({2, 10, 2}).str() == "2,10,2");
  CHECK(c({2, 10, 2}).gap_sum() == 14);
  CHECK(c({2, 4}).reversed() == c({4, 2}));
  CHECK_THROWS_AS(Constellation::parse("2,3"), InputError);
  CHECK_THROWS_AS(Constellation::parse(""), InputError);
  CHECK_THROWS_AS(Constellation::parse("2,,2"), InputError);
}

TEST_CASE("occurrence indices in G(5)") {
  const GapCycle g5 = build_cycle_to(3);
  CHECK(cyclic_occurrences(g5, c({2})) == std::vector<std::uint64_t>{3, 5, 8});
  // 2,6 exists only as the wrap from the last gap to the first.
  CHECK(cyclic_occurrences(g5, c({2, 6})) == std::vector<std::uint64_t>{8});
  CHECK(count_occurrences(g5, c({2, 4, 2})) == 1);
}

TEST_CASE("counts in G(7)") {
  const GapCycle g7 = build_cycle_to(4);
  CHECK(count_occurrences(g7, c({2})) == 15);
  CHECK(count_occurrences(g7, c({8})) == 2);
  CHECK(count_occurrences(g7, c({2, 4, 2, 4, 2})) == 0);
  // Window wrapping the seam: 2,10,2 occurs at 46 and again starting at the
  // final gap.
  CHECK(cyclic_occurrences(g7, c({2, 10, 2})) ==
        std::vector<std::uint64_t>{46, 48});
  CHECK(cyclic_occurrences(g7, c({4, 6, 8})) == std::vector<std::uint64_t>{19});
}

TEST_CASE("library scan matches the naive matcher on the reference cycle") {
  const std::vector<gap_t> reference(refdata::kCycle7.begin(),
                                     refdata::kCycle7.end());
  const GapCycle g7 = build_cycle_to(4);
  REQUIRE(g7.gaps() == reference);

  std::mt19937 rng(20240211);
  std::uniform_int_distribution<int> len(1, 5);
  std::uniform_int_distribution<int> val(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<gap_t> pattern;
    const int j = len(rng);
    for (int t = 0; t < j; ++t)
      pattern.push_back(static_cast<gap_t>(2 * val(rng)));
    const Constellation s{pattern};
    const std::uint64_t want = naive_count(reference, pattern);
    CHECK(count_occurrences(g7, s) == want);
    CHECK(count_occurrences_serial(g7, s) == want);
    CHECK(cyclic_occurrences(g7, s).size() == want);
    CHECK(cyclic_occurrences(g7, s) == cyclic_occurrences_serial(g7, s));
  }
}

TEST_CASE("predecessors") {
  CHECK(predecessors(c({2})).empty());
  CHECK(predecessors(c({6})) ==
        std::set<Constellation>{c({2, 4}), c({4, 2})});
  CHECK(predecessors(c({4})) == std::set<Constellation>{c({2, 2})});
  CHECK(predecessors(c({2, 10, 2})) ==
        std::set<Constellation>{c({2, 2, 8, 2}), c({2, 4, 6, 2}),
                                c({2, 6, 4, 2}), c({2, 8, 2, 2})});
}

TEST_CASE("predecessor closure") {
  CHECK(predecessor_closure(c({2})) == std::set<Constellation>{c({2})});
  CHECK(predecessor_closure(c({6})) ==
        std::set<Constellation>{c({6}), c({2, 4}), c({4, 2}), c({2, 2, 2})});
  CHECK(predecessor_closure(c({2, 4, 2})) ==
        std::set<Constellation>{c({2, 4, 2}), c({2, 2, 2, 2})});
  CHECK_THROWS_AS((void)predecessor_closure(c({64}), 60), BudgetError);

  SUBCASE("splits preserve the gap sum") {
    for (const auto& member : predecessor_closure(c({2, 10, 2})))
      CHECK(member.gap_sum() == 14);
    CHECK(predecessor_closure(c({2, 10, 2})).size() == 16);
  }
}

TEST_CASE("recurrence preconditions") {
  // Sum 14 is exactly 2*7: the cautionary case.
  const auto bad = recurrence_validity(c({2, 4, 6, 2}), 3);
  CHECK_FALSE(bad.valid);
  CHECK(recurrence_validity(c({2}), 1).valid);
  CHECK(recurrence_validity(c({2}), 5).valid);
  // Valid at the transition to 11: sum 14 < 22 and longest member has 7 gaps.
  CHECK(recurrence_validity(c({2, 10, 2}), 4).valid);
  CHECK_FALSE(recurrence_validity(c({2, 10, 2}), 3).valid);
}

TEST_CASE("recurrence steps reproduce the table cells") {
  const GapCycle g5 = build_cycle_to(3);

  SUBCASE("N_7(2,4,2) = (7-4)*1") {
    auto ledger = seed_census(g5, c({2, 4, 2}));
    ledger = recurrence_step(ledger, 3);
    CHECK(ledger.target_count(4) == 3);
  }

  SUBCASE("N_7(6) = 5*2 + 2 + 2") {
    auto ledger = seed_census(g5, c({6}));
    CHECK(ledger.count(c({2, 4}), 3) == 2);
    ledger = recurrence_step(ledger, 3);
    CHECK(ledger.target_count(4) == 14);
    CHECK(ledger.count(c({2, 4}), 4) == 8);
  }

  SUBCASE("N_11(8) = 9*2 + 5 + 5 + 0") {
    auto ledger = seed_census(g5, c({8}));
    ledger = recurrence_step(ledger, 3);
    CHECK(ledger.target_count(4) == 2);
    CHECK(ledger.count(c({2, 6}), 4) == 5);
    CHECK(ledger.count(c({4, 4}), 4) == 0);
    ledger = recurrence_step(ledger, 4);
    CHECK(ledger.target_count(5) == 28);
  }

  SUBCASE("stepping from the wrong stage is refused") {
    auto ledger = seed_census(g5, c({2}));
    CHECK_THROWS_AS((void)recurrence_step(ledger, 4), InputError);
  }

  SUBCASE("validity violations are refused with the failing member") {
    auto ledger = seed_census(g5, c({2, 10, 2}));
    CHECK_THROWS_AS((void)recurrence_step(ledger, 3), ValidityError);
    try {
      (void)recurrence_step(ledger, 3);
    } catch (const ValidityError& error) {
      CHECK(std::string(error.what()).find("2,4,6,2") != std::string::npos);
    }
  }
}

TEST_CASE("seed stage choice") {
  CHECK(choose_seed_stage(c({2})) == 1);
  CHECK(choose_seed_stage(c({6})) == 2);
  CHECK(choose_seed_stage(c({8})) == 3);
  CHECK(choose_seed_stage(c({2, 4, 2})) == 3);
  CHECK(choose_seed_stage(c({2, 10, 2})) == 4);
  CHECK(choose_seed_stage(c({2, 10, 2, 10, 2})) == 6);
}

TEST_CASE("projected counts match the printed table") {
  for (const auto& row : refdata::kCountTable) {
    const std::uint32_t k = row.p == 5    ? 3
                            : row.p == 7  ? 4
                            : row.p == 11 ? 5
                            : row.p == 13 ? 6
                                          : 7;
    const auto check_one = [&](const Constellation& s, std::uint64_t want) {
      const std::uint32_t seed = std::min(choose_seed_stage(s), k);
      const auto ledger = project_counts(s, seed, k);
      CHECK(ledger.target_count(k) == want);
    };
    check_one(c({2}), row.n2);
    check_one(c({2, 4}), row.n24);
    check_one(c({6}), row.n6);
    check_one(c({2, 4, 2}), row.n242);
    check_one(c({2, 6}), row.n26);
    check_one(c({8}), row.n8);
    check_one(c({2, 10, 2}), row.n2_10_2);
  }
}

TEST_CASE("projection agrees with direct scans") {
  GapCycle cycle = GapCycle::base();
  std::vector<GapCycle> cycles{cycle};
  for (std::uint32_t k = 2; k <= 7; ++k) {
    cycle = build_next_cycle(cycle);
    cycles.push_back(cycle);
  }
  for (const char* text : {"2", "6", "2,4,2", "2,6"}) {
    const Constellation s = Constellation::parse(text);
    const std::uint32_t seed = choose_seed_stage(s);
    const auto ledger = project_counts(s, seed, 7);
    for (std::uint32_t k = seed; k <= 7; ++k) {
      INFO(text, " at stage ", k);
      CHECK(ledger.target_count(k) == count_occurrences(cycles[k - 1], s));
    }
  }
}

TEST_CASE("mirror counts coincide") {
  const GapCycle g7 = build_cycle_to(4);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(1, 4);
  std::uniform_int_distribution<int> val(1, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<gap_t> pattern;
    const int j = len(rng);
    for (int t = 0; t < j; ++t)
      pattern.push_back(static_cast<gap_t>(2 * val(rng)));
    const Constellation s{pattern};
    CHECK(count_occurrences(g7, s) == count_occurrences(g7, s.reversed()));
  }
}

TEST_CASE("gap abundance ordering") {
  // N(2) = N(4) < N(6) < N(8) from stage 5 on.
  const auto n2 = project_counts(c({2}), 1, 10);
  const auto n4 = project_counts(c({4}), 1, 10);
  const auto n6 = project_counts(c({6}), 2, 10);
  const auto n8 = project_counts(c({8}), 3, 10);
  for (std::uint32_t k = 5; k <= 10; ++k) {
    CHECK(n2.target_count(k) == n4.target_count(k));
    CHECK(n2.target_count(k) < n6.target_count(k));
    CHECK(n6.target_count(k) < n8.target_count(k));
  }
}

TEST_CASE("first stages") {
  CHECK(find_first_stage(c({2, 4, 2}), 6) == 3);
  CHECK_FALSE(find_first_stage(c({2, 2}), 6).has_value());
  CHECK(find_first_stage(c({4, 6, 8}), 6) == 4);
  CHECK(find_first_stage(c({2}), 6) == 1);
}

TEST_CASE("overlapping occurrences count separately") {
  const GapCycle g7 = build_cycle_to(4);
  // The two 2,10,2 windows share the final 10,2.
  const auto found = cyclic_occurrences(g7, c({2, 10, 2}));
  REQUIRE(found.size() == 2);
  CHECK(found[1] - found[0] == 2);
}
