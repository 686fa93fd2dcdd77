#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "pgap/cycle_cache.hpp"
#include "pgap/gapcycle.hpp"

using namespace pgap;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<unsigned char> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("pgc layout is bit exact for G(3)") {
  const fs::path dir = temp_dir("pgap-cache-layout");
  const fs::path path = dir / "gapcycle.2.pgc";
  write_pgc(path, build_cycle_to(2));

  const auto bytes = slurp(path);
  // magic, u32 k, u64 p, u64 phi, u64 span lo, u64 span hi, 2 gaps, crc
  REQUIRE(bytes.size() == 4 + 4 + 32 + 2 * 2 + 4);
  const std::vector<unsigned char> expected = {
      'P', 'G', 'C', '1',
      2, 0, 0, 0,                       // k
      3, 0, 0, 0, 0, 0, 0, 0,           // p_k
      2, 0, 0, 0, 0, 0, 0, 0,           // phi
      6, 0, 0, 0, 0, 0, 0, 0,           // span low
      0, 0, 0, 0, 0, 0, 0, 0,           // span high
      4, 0, 2, 0};                      // gaps, little-endian u16
  CHECK(std::vector<unsigned char>(bytes.begin(), bytes.end() - 4) == expected);
}

TEST_CASE("round trip through the cache") {
  const fs::path dir = temp_dir("pgap-cache-roundtrip");
  CycleCache cache(dir);
  const GapCycle g7 = build_cycle_to(4);
  CHECK(cache.store(g7));
  CHECK_FALSE(cache.store(g7));  // append-only: second store is a no-op
  const auto loaded = cache.load(4);
  REQUIRE(loaded.has_value());
  CHECK(*loaded == g7);
  CHECK_FALSE(cache.load(5).has_value());
}

TEST_CASE("corrupt files are rejected") {
  const fs::path dir = temp_dir("pgap-cache-corrupt");
  CycleCache cache(dir);
  cache.store(build_cycle_to(3));
  const fs::path path = cache.path_for(3);

  auto bytes = slurp(path);
  bytes[20] ^= 0xff;  // flip a byte inside the header
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS((void)cache.load(3), CacheError);

  // Truncation is also a checksum failure.
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), 20);
  }
  CHECK_THROWS_AS((void)cache.load(3), CacheError);
}

TEST_CASE("build_cycle_to reuses the deepest cached stage") {
  const fs::path dir = temp_dir("pgap-cache-reuse");
  CycleCache cache(dir);
  const GapCycle direct = build_cycle_to(6);
  (void)build_cycle_to(5, {}, &cache);
  CHECK(cache.deepest_cached(10) == 5);

  // A second build from the cache must give the identical cycle.
  const GapCycle from_cache = build_cycle_to(6, {}, &cache);
  CHECK(from_cache == direct);
  CHECK(cache.deepest_cached(10) == 6);
  CHECK(cache.deepest_cached(3) == 3);
}
