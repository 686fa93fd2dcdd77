// pgap: build and verify gap cycles, census constellations across sieve
// stages, count prime constellations, and emit comparison tables.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pgap/analysis.hpp"
#include "pgap/census.hpp"
#include "pgap/common.hpp"
#include "pgap/cycle_cache.hpp"
#include "pgap/estimates.hpp"
#include "pgap/gapcycle.hpp"
#include "pgap/primes.hpp"

namespace {

using namespace pgap;

struct RunConfig {
  std::string cache_dir;
  std::uint64_t mem_budget = 2ull << 30;
  std::uint32_t stage_ceiling = 9;
  std::uint64_t sieve_ceiling = 1ull << 31;
  std::string rounding = "half-up";
  std::uint64_t trunc_q = 1'000'000;
  std::string format = "csv";

  BuildBudget budget() const { return {stage_ceiling, mem_budget}; }
  SieveConfig sieve() const { return {sieve_ceiling, 20}; }
  std::unique_ptr<CycleCache> cache() const {
    if (cache_dir.empty()) return nullptr;
    return std::make_unique<CycleCache>(cache_dir);
  }
};

std::int64_t rounded(const BigRat& x, const RunConfig& config) {
  if (config.rounding == "half-up")
    return round_half_up(x).convert_to<std::int64_t>();
  if (config.rounding == "half-even") {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    const BigInt twice = numerator(x) * 2;
    const BigInt den = denominator(x);
    BigInt q = round_half_up(x);
    if (twice % den == 0 && (numerator(x) % den) * 2 == den && q % 2 != 0) --q;
    return q.convert_to<std::int64_t>();
  }
  throw InputError("cli: unknown rounding mode '" + config.rounding + "'");
}

std::int64_t rounded(double x, const RunConfig& config) {
  if (config.rounding == "half-up") return round_half_up(x);
  if (config.rounding == "half-even")
    return static_cast<std::int64_t>(std::llrint(x));
  throw InputError("cli: unknown rounding mode '" + config.rounding + "'");
}

// Minimal table writer for the two output formats.
class Table {
 public:
  Table(std::vector<std::string> header, bool markdown)
      : header_(std::move(header)), markdown_(markdown) {}

  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  void print() const {
    if (!markdown_) {
      print_delimited(",");
      return;
    }
    std::cout << "| ";
    for (std::size_t i = 0; i < header_.size(); ++i)
      std::cout << header_[i] << (i + 1 < header_.size() ? " | " : " |\n");
    std::cout << "|";
    for (std::size_t i = 0; i < header_.size(); ++i) std::cout << " --- |";
    std::cout << "\n";
    for (const auto& r : rows_) {
      std::cout << "| ";
      for (std::size_t i = 0; i < r.size(); ++i)
        std::cout << r[i] << (i + 1 < r.size() ? " | " : " |\n");
    }
  }

 private:
  static std::string csv_cell(const std::string& cell) {
    if (cell.find(',') == std::string::npos) return cell;
    return '"' + cell + '"';
  }

  void print_delimited(const std::string& sep) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
      std::cout << header_[i] << (i + 1 < header_.size() ? sep : "\n");
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i)
        std::cout << csv_cell(r[i]) << (i + 1 < r.size() ? sep : "\n");
    }
  }

  std::vector<std::string> header_;
  bool markdown_ = false;
  std::vector<std::vector<std::string>> rows_;
};

std::string fixed(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

int cmd_cycle_build(const RunConfig& config, std::uint32_t k) {
  auto cache = config.cache();
  const GapCycle cycle = build_cycle_to(k, config.budget(), cache.get());
  std::filesystem::path path;
  if (cache) {
    cache->store(cycle);
    path = cache->path_for(k);
  } else {
    path = "gapcycle." + std::to_string(k) + ".pgc";
    if (!std::filesystem::exists(path)) write_pgc(path, cycle);
  }
  std::cout << "wrote " << path.string() << " (k=" << k
            << " p=" << cycle.sieving_prime() << " phi=" << cycle.length()
            << " span=" << cycle.span() << ")\n";
  return 0;
}

int cmd_cycle_verify(const RunConfig& config, std::uint32_t k, bool force_oracle) {
  auto cache = config.cache();
  const GapCycle cycle = build_cycle_to(k, config.budget(), cache.get());
  const auto report = validate_structure(cycle);
  for (const auto& check : report.checks)
    std::cout << (check.passed ? "ok   " : "FAIL ") << check.name
              << (check.passed ? "" : ": " + check.detail) << "\n";
  bool ok = report.valid();

  const bool oracle_in_budget = k <= 9;
  if (oracle_in_budget || force_oracle) {
    const GapCycle reference =
        oracle_cycle(k, force_oracle ? cycle.span() : kDefaultOracleSpanCeiling);
    const bool equal = reference == cycle;
    std::cout << (equal ? "ok   " : "FAIL ") << "oracle_equivalence\n";
    ok = ok && equal;
  } else {
    std::cout << "skip oracle_equivalence (stage above the oracle budget; "
                 "pass --oracle to force)\n";
  }
  return ok ? 0 : 1;
}

int cmd_cycle_info(const RunConfig& config, std::uint32_t k) {
  auto cache = config.cache();
  const GapCycle cycle = build_cycle_to(k, config.budget(), cache.get());
  gap_t max_gap = 0;
  for (const gap_t g : cycle.gaps()) max_gap = std::max(max_gap, g);
  std::cout << "k=" << k << "\n"
            << "p_k=" << cycle.sieving_prime() << "\n"
            << "phi_k=" << cycle.length() << "\n"
            << "pi_k=" << cycle.span() << "\n"
            << "next_prime=" << cycle.next_prime() << "\n"
            << "max_gap=" << max_gap << "\n";
  return 0;
}

int cmd_census(const RunConfig& config, const std::string& s_text,
               std::uint64_t to_p, bool scan_only, bool recurrence_only) {
  const Constellation s = Constellation::parse(s_text);
  const std::uint32_t k_to = prime_index(to_p);
  const std::uint32_t k_from = std::min<std::uint32_t>(3, k_to);
  const bool do_scan = !recurrence_only;
  const bool do_recurrence = !scan_only;

  const std::uint32_t seed = choose_seed_stage(s);
  std::optional<CensusLedger> ledger;
  if (do_recurrence && k_to >= seed)
    ledger = project_counts(s, seed, k_to, config.budget(), config.cache().get());

  const std::uint32_t scan_to = std::min(k_to, config.stage_ceiling);
  std::vector<BigInt> scans;
  if (do_scan) {
    GapCycle cycle = GapCycle::base();
    for (std::uint32_t k = 1; k <= scan_to; ++k) {
      if (k > 1) cycle = build_next_cycle(cycle, config.budget());
      if (k >= k_from) scans.emplace_back(count_occurrences(cycle, s));
    }
  }

  Table table({"k", "p", "N_scan", "N_recurrence", "agree"},
              config.format == "markdown");
  bool all_agree = true;
  for (std::uint32_t k = k_from; k <= k_to; ++k) {
    std::string scan_cell = "-";
    std::string rec_cell = "-";
    std::string agree_cell = "-";
    const bool have_scan = do_scan && k <= scan_to;
    const bool have_rec = do_recurrence && ledger && k >= seed;
    if (have_scan) scan_cell = scans[k - k_from].str();
    if (have_rec) rec_cell = ledger->target_count(k).str();
    if (have_scan && have_rec) {
      const bool agree = scan_cell == rec_cell;
      agree_cell = agree ? "yes" : "NO";
      all_agree = all_agree && agree;
    }
    table.row({std::to_string(k), std::to_string(nth_prime(k)), scan_cell,
               rec_cell, agree_cell});
  }
  table.print();
  if (!all_agree) {
    std::cerr << "census: scan and recurrence disagree\n";
    return 1;
  }
  return 0;
}

struct ReportTarget {
  Constellation s;
  // How the comparison column is computed for this constellation.
  enum class Hl { difference, quadruplet, ktuple } hl;
};

int cmd_report(const RunConfig& config, std::vector<std::string> s_texts,
               std::string rows_text, const std::string& which_table) {
  const Constants constants = compute_constants(config.trunc_q);

  std::vector<ReportTarget> targets;
  auto add_target = [&](const std::string& text) {
    const Constellation s = Constellation::parse(text);
    ReportTarget target{s, ReportTarget::Hl::ktuple};
    if (s.gap_count() == 1)
      target.hl = ReportTarget::Hl::difference;
    else if (s.gaps() == std::vector<gap_t>{2, 4, 2})
      target.hl = ReportTarget::Hl::quadruplet;
    targets.push_back(std::move(target));
  };
  if (!s_texts.empty()) {
    for (const auto& text : s_texts) add_target(text);
  } else {
    if (which_table == "twins" || which_table == "both")
      for (const char* text : {"2", "6", "8"}) add_target(text);
    if (which_table == "quads" || which_table == "both")
      for (const char* text : {"2,4,2", "2,10,2", "2,10,2,10,2"}) add_target(text);
  }

  std::vector<std::uint64_t> rows;
  {
    std::stringstream ss(rows_text);
    std::string item;
    while (std::getline(ss, item, ',')) rows.push_back(std::stoull(item));
  }
  for (const std::uint64_t p : rows)
    if (!is_prime_u64(p)) throw InputError("cli: report row " + std::to_string(p) +
                                           " is not prime");

  const std::uint64_t max_row = *std::max_element(rows.begin(), rows.end());
  if (max_row * max_row > config.sieve_ceiling)
    throw BudgetError("cli: report row " + std::to_string(max_row) +
                      " squared exceeds the sieve ceiling");

  // One sieve pass for all targets, then per-row interval counts.
  std::vector<Constellation> plain;
  for (const auto& t : targets) plain.push_back(t.s);
  const std::uint64_t min_row = *std::min_element(rows.begin(), rows.end());
  const auto starts = constellation_starts(plain, min_row, max_row * max_row,
                                           config.sieve());

  // Census projections reach the stage just before the largest row.  Rows
  // below a target's seed stage fall back to a direct scan of that cycle.
  const std::uint32_t k_max = prime_index(max_row) - 1;
  std::vector<CensusLedger> ledgers;
  std::vector<std::uint32_t> seeds;
  for (const auto& t : targets) {
    const std::uint32_t seed = std::min(choose_seed_stage(t.s), k_max);
    seeds.push_back(seed);
    ledgers.push_back(project_counts(t.s, seed, k_max, config.budget(),
                                     config.cache().get()));
  }

  Table table({"p", "constellation", "C_actual", "E_sieve", "HL", "relerr_E",
               "relerr_HL"},
              config.format == "markdown");
  for (const std::uint64_t p : rows) {
    const std::uint32_t k = prime_index(p) - 1;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto& target = targets[t];
      const auto& start_list = starts[t];
      const auto lo = std::lower_bound(start_list.begin(), start_list.end(), p);
      const auto hi = std::upper_bound(start_list.begin(), start_list.end(), p * p);
      const auto c_actual = static_cast<std::uint64_t>(hi - lo);

      const BigInt n_count =
          k >= seeds[t]
              ? ledgers[t].target_count(k)
              : project_counts(target.s, k, k, config.budget()).target_count(k);
      const BigRat e_exact = expected_below_square(n_count, k);
      const std::int64_t e_rounded = rounded(e_exact, config);
      const double e_value = to_double(e_exact);

      double hl_value = 0.0;
      switch (target.hl) {
        case ReportTarget::Hl::difference:
          hl_value = hl_difference_estimate(target.s.gaps()[0], p, constants);
          break;
        case ReportTarget::Hl::quadruplet:
          hl_value = hl_quadruplet_estimate(p, constants);
          break;
        case ReportTarget::Hl::ktuple: {
          const auto offsets = constellation_offsets(target.s);
          hl_value = hl_ktuple_estimate(offsets, p, constants).value;
          break;
        }
      }
      const std::int64_t hl_rounded = rounded(hl_value, config);

      const double c = static_cast<double>(c_actual);
      table.row({std::to_string(p), target.s.str(), std::to_string(c_actual),
                 std::to_string(e_rounded), std::to_string(hl_rounded),
                 c_actual ? fixed((e_value - c) / c) : "inf",
                 c_actual ? fixed((hl_value - c) / c) : "inf"});
    }
  }
  table.print();
  return 0;
}

int cmd_analysis_uniformity(const RunConfig& config, const std::string& s_text,
                            std::uint32_t k, std::uint32_t bins) {
  const Constellation s = Constellation::parse(s_text);
  const GapCycle cycle = build_cycle_to(k, config.budget(), config.cache().get());
  const auto report = uniformity_histogram(cycle, s, bins);

  Table table({"bin_index", "count", "expected"}, config.format == "markdown");
  const double expected = static_cast<double>(report.total) / report.bins;
  for (std::uint32_t b = 0; b < report.bins; ++b)
    table.row({std::to_string(b), std::to_string(report.histogram[b]),
               fixed(expected)});
  table.print();
  std::cout << "{ statistic: " << fixed(report.chi_square) << ", dof: " << report.dof
            << ", total: " << report.total
            << ", degenerate: " << (report.degenerate ? "true" : "false")
            << ", observed_in_square: " << report.observed_in_square
            << ", expected_in_square: " << fixed(report.expected_in_square)
            << " }\n";
  return 0;
}

int cmd_analysis_erdos_turan(const RunConfig& config, const std::string& question,
                             std::uint32_t to_k, std::uint32_t m) {
  auto cache = config.cache();
  if (question == "spikes") {
    Table table({"k", "p", "gap", "index"}, config.format == "markdown");
    bool increasing = true;
    gap_t previous = 0;
    GapCycle cycle = GapCycle::base();
    for (std::uint32_t k = 1; k <= to_k; ++k) {
      if (k > 1) cycle = build_next_cycle(cycle, config.budget());
      if (k < 3) continue;
      const auto witness = spike_witness(cycle);
      table.row({std::to_string(k), std::to_string(cycle.sieving_prime()),
                 std::to_string(witness.gap), std::to_string(witness.index)});
      if (k > 3 && witness.gap <= previous) increasing = false;
      previous = witness.gap;
    }
    table.print();
    if (!increasing) {
      std::cerr << "analysis: spike gaps failed to increase strictly\n";
      return 1;
    }
    return 0;
  }
  if (question == "oscillation") {
    const auto finding = oscillation_counterexample(to_k, config.budget(), cache.get());
    std::cout << "proposed " << finding.proposed.str() << ": "
              << (finding.proposed_found
                      ? "found at stage " + std::to_string(finding.proposed_stage)
                      : "not found in any scanned stage")
              << "\n";
    if (!finding.proposed_admissibility.admissible)
      std::cout << "proposed tuple inadmissible, blocking prime "
                << finding.proposed_admissibility.blocking_prime << "\n";
    std::cout << "monotone witness " << finding.witness.str() << " at stage "
              << finding.witness_stage << ", index " << finding.witness_index
              << "\n";
    return 0;
  }
  if (question == "superlinearity") {
    const GapCycle cycle = build_cycle_to(to_k, config.budget(), cache.get());
    const auto run = superlinear_witness(cycle, m);
    std::cout << "increasing run of " << m << " gaps at index " << run.index << ":";
    for (const gap_t g : run.run) std::cout << " " << g;
    std::cout << "\n";
    return 0;
  }
  throw InputError("cli: unknown erdos-turan question '" + question + "'");
}

int cmd_analysis_admissible(const RunConfig& config, const std::string& tuple_text,
                            std::uint32_t to_k) {
  std::vector<std::uint64_t> tuple;
  std::stringstream ss(tuple_text);
  std::string item;
  while (std::getline(ss, item, ',')) tuple.push_back(std::stoull(item));

  const auto verdict = admissible(tuple);
  if (verdict.admissible)
    std::cout << "admissible\n";
  else
    std::cout << "inadmissible, blocking prime " << verdict.blocking_prime << "\n";

  if (to_k > 0) {
    auto cache = config.cache();
    const auto check = ktuple_stage_check(tuple, to_k, config.budget(), cache.get());
    std::cout << "constellation " << check.s.str() << ": ";
    if (check.first_stage)
      std::cout << "first occurs at stage " << *check.first_stage << " (p="
                << check.stage_prime << "), 2p > span: "
                << (check.span_condition ? "yes" : "no") << "\n";
    else
      std::cout << "not found up to stage " << to_k << "\n";
  }
  return 0;
}

int cmd_analysis_composite_runs(const RunConfig& config, std::uint32_t k) {
  const GapCycle cycle = build_cycle_to(k, config.budget(), config.cache().get());
  const auto runs = composite_run_locator(cycle);
  Table table({"gap_index", "start_value", "gap", "run_length"},
              config.format == "markdown");
  for (const auto& run : runs)
    table.row({std::to_string(run.gap_index), std::to_string(run.start_value),
               std::to_string(run.gap), std::to_string(run.run_length)});
  table.print();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prime gap cycle toolkit"};
  app.require_subcommand(1);

  RunConfig config;
  if (const char* env = std::getenv("PGAP_CACHE_DIR")) config.cache_dir = env;

  // key=value lines with '#' comments; command-line flags override the file.
  app.set_config("--config", "", "key=value configuration file");
  app.add_option("--cache-dir", config.cache_dir, "cycle cache directory");
  app.add_option("--mem-budget", config.mem_budget, "memory budget in bytes");
  app.add_option("--stage-ceiling", config.stage_ceiling,
                 "largest stage built in memory (opt-in up to 12)");
  app.add_option("--sieve-ceiling", config.sieve_ceiling, "largest sieved value");
  app.add_option("--rounding", config.rounding, "half-up or half-even");
  app.add_option("--trunc-q", config.trunc_q, "singular product truncation");
  app.add_option("--format", config.format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));

  // cycle
  auto* cycle = app.add_subcommand("cycle", "build, verify, or describe cycles");
  cycle->require_subcommand(1);
  std::uint32_t cycle_k = 1;
  bool force_oracle = false;
  auto* cycle_build = cycle->add_subcommand("build", "build and persist a stage");
  cycle_build->add_option("--k", cycle_k, "stage index")->required();
  auto* cycle_verify =
      cycle->add_subcommand("verify", "validate a stage against the oracle");
  cycle_verify->add_option("--k", cycle_k, "stage index")->required();
  cycle_verify->add_flag("--oracle", force_oracle, "force the oracle comparison");
  auto* cycle_info = cycle->add_subcommand("info", "print stage facts");
  cycle_info->add_option("--k", cycle_k, "stage index")->required();

  // census
  std::string census_s;
  std::uint64_t census_to_p = 17;
  bool census_scan = false;
  bool census_recurrence = false;
  auto* census = app.add_subcommand("census", "count a constellation per stage");
  census->add_option("--s", census_s, "constellation, e.g. 2,10,2")->required();
  census->add_option("--to-p", census_to_p, "last stage prime");
  census->add_flag("--scan", census_scan, "direct scan only");
  census->add_flag("--recurrence", census_recurrence, "recurrence only");

  // report
  std::vector<std::string> report_s;
  std::string report_rows = "11,13,101,199,499,1009,1999,2503,4999,10007,12503,14939";
  std::string report_table = "both";
  auto* report = app.add_subcommand("report", "actual counts vs estimates");
  report->add_option("--s", report_s, "constellations (repeatable)");
  report->add_option("--rows", report_rows, "comma-separated row primes");
  report->add_option("--table", report_table, "twins, quads, or both")
      ->check(CLI::IsMember({"twins", "quads", "both"}));

  // analysis
  auto* analysis = app.add_subcommand("analysis", "diagnostics and witnesses");
  analysis->require_subcommand(1);
  std::string analysis_s = "2";
  std::uint32_t analysis_k = 8;
  std::uint32_t analysis_bins = 64;
  auto* uniformity = analysis->add_subcommand("uniformity", "occurrence histogram");
  uniformity->add_option("--s", analysis_s, "constellation")->required();
  uniformity->add_option("--k", analysis_k, "stage")->required();
  uniformity->add_option("--bins", analysis_bins, "histogram bins");

  std::string et_question = "spikes";
  std::uint32_t et_to_k = 8;
  std::uint32_t et_m = 3;
  auto* erdos = analysis->add_subcommand("erdos-turan", "spikes, oscillation, "
                                                        "superlinearity");
  erdos->add_option("--question", et_question, "which question")
      ->check(CLI::IsMember({"spikes", "oscillation", "superlinearity"}));
  erdos->add_option("--to-k", et_to_k, "deepest stage scanned");
  erdos->add_option("--m", et_m, "run length for superlinearity");

  std::string adm_tuple;
  std::uint32_t adm_to_k = 0;
  auto* adm = analysis->add_subcommand("admissible", "tuple admissibility");
  adm->add_option("--tuple", adm_tuple, "offsets, e.g. 0,2,6,8")->required();
  adm->add_option("--to-k", adm_to_k, "also search stages for the constellation");

  std::uint32_t runs_k = 4;
  auto* runs = analysis->add_subcommand("composite-runs", "long composite runs");
  runs->add_option("--k", runs_k, "stage")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cycle_build->parsed()) return cmd_cycle_build(config, cycle_k);
    if (cycle_verify->parsed())
      return cmd_cycle_verify(config, cycle_k, force_oracle);
    if (cycle_info->parsed()) return cmd_cycle_info(config, cycle_k);
    if (census->parsed())
      return cmd_census(config, census_s, census_to_p, census_scan,
                        census_recurrence);
    if (report->parsed())
      return cmd_report(config, report_s, report_rows, report_table);
    if (uniformity->parsed())
      return cmd_analysis_uniformity(config, analysis_s, analysis_k, analysis_bins);
    if (erdos->parsed())
      return cmd_analysis_erdos_turan(config, et_question, et_to_k, et_m);
    if (adm->parsed()) return cmd_analysis_admissible(config, adm_tuple, adm_to_k);
    if (runs->parsed()) return cmd_analysis_composite_runs(config, runs_k);
  } catch (const std::exception& error) {
    std::cerr << "pgap: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
