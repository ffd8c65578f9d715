#pragma once

#include <cstdint>
#include <utility>

namespace retsurv {

// Counter-based generator (Philox2x64-10). A draw is a pure function of
// (seed, path, draw index), so path-level parallelism cannot change the
// numbers: every worker partition sees identical streams.
struct Philox2x64 {
    static constexpr std::uint64_t multiplier = 0xD2B74407B1CE6E93ULL;
    static constexpr std::uint64_t key_bump = 0x9E3779B97F4A7C15ULL;

    static std::pair<std::uint64_t, std::uint64_t>
    block(std::uint64_t key, std::uint64_t c0, std::uint64_t c1) {
        std::uint64_t x0 = c0, x1 = c1;
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 prod =
                static_cast<unsigned __int128>(multiplier) * x0;
            const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
            const std::uint64_t lo = static_cast<std::uint64_t>(prod);
            x0 = hi ^ key ^ x1;
            x1 = lo;
            key += key_bump;
        }
        return {x0, x1};
    }
};

// One logical random stream per simulated path. Draws are consumed in
// strict order; the stream never shares state across paths.
class PathStream {
  public:
    PathStream(std::uint64_t seed, std::uint64_t path_index)
        : seed_(seed), path_(path_index) {}

    std::uint64_t next_u64() {
        return Philox2x64::block(seed_, path_, draw_++).first;
    }

    // Uniform on the open interval (0,1): never 0, never 1.
    double next_uniform() {
        const std::uint64_t bits = next_u64();
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t draws_consumed() const { return draw_; }

  private:
    std::uint64_t seed_;
    std::uint64_t path_;
    std::uint64_t draw_ = 0;
};

}  // namespace retsurv
