#pragma once

#include <cstdint>
#include <initializer_list>

namespace olp {

// Purpose tags keep streams for different consumers disjoint.
enum class StreamTag : std::uint64_t {
  kInstance = 1,
  kPopulation = 2,
  kDeltaPath = 3,
  kBootstrap = 4,
  kZProbe = 5,
  kDualConvergence = 6,
  kValidation = 7,
  kTest = 8,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream: output i is a bijective mix of (key, i), where the
// key hashes (seed, tag, replication, path, index). Any draw is reproducible
// in isolation and results never depend on the platform's <random>.
class Stream {
 public:
  Stream(std::uint64_t seed, StreamTag tag, std::uint64_t replication,
         std::uint64_t path, std::uint64_t index)
      : key_(derive_key({seed, static_cast<std::uint64_t>(tag), replication,
                         path, index})) {}

  static constexpr std::uint64_t derive_key(
      std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
  }

  std::uint64_t next_u64() {
    return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_));
  }

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace olp
