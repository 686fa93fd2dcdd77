#include "pgap/cycle_cache.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <vector>

#include <zlib.h>

namespace pgap {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'G', 'C', '1'};

template <typename T>
void put_le(std::vector<unsigned char>& buf, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf.push_back(static_cast<unsigned char>((value >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(const unsigned char* p) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    value |= static_cast<T>(p[i]) << (8 * i);
  return value;
}

std::uint32_t crc_of(const unsigned char* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // crc32 takes uInt lengths; feed large buffers in slices.
  while (size > 0) {
    const auto chunk = static_cast<uInt>(
        std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, data, chunk);
    data += chunk;
    size -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

void write_pgc(const std::filesystem::path& path, const GapCycle& cycle) {
  std::vector<unsigned char> buf;
  buf.reserve(4 + 4 + 8 * 4 + 2 * cycle.length() + 4);
  buf.insert(buf.end(), kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(buf, cycle.stage());
  put_le<std::uint64_t>(buf, cycle.sieving_prime());
  put_le<std::uint64_t>(buf, cycle.length());
  put_le<std::uint64_t>(buf, cycle.span());  // low word of the 128-bit span
  put_le<std::uint64_t>(buf, 0);             // high word; zero for k <= 15
  for (const gap_t g : cycle.gaps()) put_le<std::uint16_t>(buf, g);
  put_le<std::uint32_t>(buf, crc_of(buf.data(), buf.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CacheError("cache: cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw CacheError("cache: short write to " + path.string());
}

GapCycle read_pgc(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw CacheError("cache: cannot open " + path.string());
  const auto size = static_cast<std::size_t>(in.tellg());
  if (size < 4 + 4 + 8 * 4 + 4)
    throw CacheError("cache: " + path.string() + " is truncated");
  std::vector<unsigned char> buf(size);
  in.seekg(0);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(size));
  if (!in) throw CacheError("cache: short read from " + path.string());

  if (std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0)
    throw CacheError("cache: " + path.string() + " has the wrong magic bytes");

  const std::uint32_t stored_crc = get_le<std::uint32_t>(buf.data() + size - 4);
  if (stored_crc != crc_of(buf.data(), size - 4))
    throw CacheError("cache: checksum mismatch in " + path.string());

  std::size_t off = 4;
  const auto k = get_le<std::uint32_t>(buf.data() + off);
  off += 4;
  const auto prime = get_le<std::uint64_t>(buf.data() + off);
  off += 8;
  const auto phi = get_le<std::uint64_t>(buf.data() + off);
  off += 8;
  const auto span_lo = get_le<std::uint64_t>(buf.data() + off);
  off += 8;
  const auto span_hi = get_le<std::uint64_t>(buf.data() + off);
  off += 8;
  if (span_hi != 0)
    throw CacheError("cache: " + path.string() + " spans beyond 64 bits");
  if (size != off + 2 * phi + 4)
    throw CacheError("cache: " + path.string() + " has an inconsistent length");

  std::vector<gap_t> gaps(phi);
  for (std::uint64_t i = 0; i < phi; ++i)
    gaps[i] = get_le<std::uint16_t>(buf.data() + off + 2 * i);
  return GapCycle(k, prime, span_lo, std::move(gaps));
}

CycleCache::CycleCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path CycleCache::path_for(std::uint32_t k) const {
  return dir_ / ("gapcycle." + std::to_string(k) + ".pgc");
}

bool CycleCache::contains(std::uint32_t k) const {
  return std::filesystem::exists(path_for(k));
}

std::optional<GapCycle> CycleCache::load(std::uint32_t k) const {
  if (!contains(k)) return std::nullopt;
  return read_pgc(path_for(k));
}

bool CycleCache::store(const GapCycle& cycle) const {
  if (contains(cycle.stage())) return false;  // append-only, never rewritten
  write_pgc(path_for(cycle.stage()), cycle);
  return true;
}

std::optional<std::uint32_t> CycleCache::deepest_cached(std::uint32_t k_max) const {
  for (std::uint32_t k = k_max; k >= 1; --k)
    if (contains(k)) return k;
  return std::nullopt;
}

}  // namespace pgap
