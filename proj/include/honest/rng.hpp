#pragma once

#include <cstdint>
#include <random>

namespace honest {

// Stable 64-bit mixer (splitmix64 finalizer). Used to derive independent
// per-replication / per-stream seeds from a master seed so that results do
// not depend on thread scheduling.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t d) {
    return mix_seed(mix_seed(a, b, c), d);
}

// Stream labels keep draws for different purposes decorrelated even when
// they share a replication seed.
namespace stream {
inline constexpr std::uint64_t noise = 0x6e6f697365ULL;
inline constexpr std::uint64_t split = 0x73706c6974ULL;
inline constexpr std::uint64_t quantile = 0x7175616e74ULL;
inline constexpr std::uint64_t points = 0x706f696e74ULL;
}  // namespace stream

// Seeded generator producing uniforms in the open interval (0,1).
// mt19937_64 output is fully specified by the standard, so all draws are
// bit-reproducible across platforms and thread counts.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // 53-bit uniform, strictly inside (0,1) so it is safe to feed through
    // inverse CDFs.
    double uniform() {
        const std::uint64_t x = eng_();
        return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

}  // namespace honest
