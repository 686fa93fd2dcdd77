// Compares the OpenMP kernels against their serial reference implementations
// and reports timings plus an equality check for each pair.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pgap/census.hpp"
#include "pgap/gapcycle.hpp"
#include "pgap/primes.hpp"

using namespace pgap;

namespace {

double seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e100;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, seconds(start));
  }
  return best;
}

void report(const char* kernel, double serial, double parallel, bool equal) {
  std::printf("%-28s %10.3f ms %10.3f ms %7.2fx   %s\n", kernel, serial * 1e3,
              parallel * 1e3, serial / parallel, equal ? "equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  bool smoke = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--smoke") == 0) smoke = true;

  const std::uint32_t build_k = smoke ? 7 : 9;
  const int reps = smoke ? 1 : 3;
  BuildBudget budget;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#endif
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  // Stage recursion: the final build step dominates.
  const GapCycle source = build_cycle_to(build_k - 1, budget);
  GapCycle built_serial, built_parallel;
  const double t_build_serial = time_best_of(
      reps, [&] { built_serial = build_next_cycle_serial(source, budget); });
  const double t_build_parallel =
      time_best_of(reps, [&] { built_parallel = build_next_cycle(source, budget); });
  report(("cycle build k=" + std::to_string(build_k)).c_str(), t_build_serial,
         t_build_parallel, built_serial == built_parallel);

  // Census scans over the built cycle.
  for (const char* text : {"2", "2,4,2"}) {
    const Constellation s = Constellation::parse(text);
    std::uint64_t n_serial = 0, n_parallel = 0;
    const double t_scan_serial = time_best_of(
        reps, [&] { n_serial = count_occurrences_serial(built_serial, s); });
    const double t_scan_parallel = time_best_of(
        reps, [&] { n_parallel = count_occurrences(built_serial, s); });
    report(("census scan s=" + std::string(text)).c_str(), t_scan_serial,
           t_scan_parallel, n_serial == n_parallel);
  }

  // Prime constellation counting over [p, p^2].
  const std::uint64_t anchor = smoke ? 1009 : 4999;
  const Constellation twins = Constellation::parse("2");
  std::uint64_t c_serial = 0, c_parallel = 0;
  const double t_count_serial = time_best_of(reps, [&] {
    c_serial = count_constellations_in_serial(twins, anchor, anchor * anchor);
  });
  const double t_count_parallel = time_best_of(reps, [&] {
    c_parallel = count_constellations_in(twins, anchor, anchor * anchor);
  });
  report(("prime count p=" + std::to_string(anchor)).c_str(), t_count_serial,
         t_count_parallel, c_serial == c_parallel);

  const bool all_equal = built_serial == built_parallel && c_serial == c_parallel;
  return all_equal ? 0 : 1;
}
