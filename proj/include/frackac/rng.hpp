#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace frackac {

// A master seed plus a stream index. Streams are derived by hashing, and
// every (master, stream, counter) triple maps to its own Philox block, so
// draws never depend on how work is split across threads.
struct RngSeed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;

    RngSeed child(std::uint64_t k) const;
    friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

std::uint64_t splitmix64(std::uint64_t x);

// Philox4x32-10 (Salmon et al. 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// Sequential view over one stream: uniforms in (0,1) and Box-Muller normals.
class NormalStream {
public:
    explicit NormalStream(RngSeed seed, std::uint64_t start_block = 0);

    double uniform();
    double normal();
    void fill(std::span<double> out);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_;
    std::array<double, 2> uni_{};
    std::array<double, 2> norm_{};
    int uni_left_ = 0;
    int norm_left_ = 0;
};

}  // namespace frackac
