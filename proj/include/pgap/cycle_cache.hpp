#ifndef PGAP_CYCLE_CACHE_HPP
#define PGAP_CYCLE_CACHE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>

#include "pgap/gapcycle.hpp"

namespace pgap {

// One file per stage, named gapcycle.{k}.pgc.  Layout (little-endian):
//   "PGC1" | u32 k | u64 p_k | u64 Phi_k | u64 Pi_k low | u64 Pi_k high |
//   Phi_k x u16 gaps | u32 CRC32 of all preceding bytes
void write_pgc(const std::filesystem::path& path, const GapCycle& cycle);
GapCycle read_pgc(const std::filesystem::path& path);  // throws CacheError

// Append-only stage cache over a directory: stages are never evicted or
// rewritten once stored.
class CycleCache {
 public:
  explicit CycleCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(std::uint32_t k) const;

  bool contains(std::uint32_t k) const;
  // Throws CacheError on checksum or layout mismatch; callers may rebuild.
  std::optional<GapCycle> load(std::uint32_t k) const;
  // Returns false when the stage file already exists (left untouched).
  bool store(const GapCycle& cycle) const;
  std::optional<std::uint32_t> deepest_cached(std::uint32_t k_max) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace pgap

#endif
