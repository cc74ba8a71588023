#include "frackac/rng.hpp"

#include <cmath>
#include <numbers>

namespace frackac {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngSeed RngSeed::child(std::uint64_t k) const {
    return RngSeed{master, splitmix64(stream ^ splitmix64(k + 0x632BE59BD9B4E019ULL))};
}

namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    // 53 random bits, shifted off zero so log() is always finite
    std::uint64_t v = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(v) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(M0, c[0], hi0, lo0);
        mulhilo(M1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += W0;
        k[1] += W1;
    }
    return c;
}

NormalStream::NormalStream(RngSeed seed, std::uint64_t start_block)
    : key_{static_cast<std::uint32_t>(seed.master), static_cast<std::uint32_t>(seed.master >> 32)},
      stream_lo_(static_cast<std::uint32_t>(seed.stream)),
      stream_hi_(static_cast<std::uint32_t>(seed.stream >> 32)),
      block_(start_block) {}

void NormalStream::refill() {
    auto r = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                         stream_lo_, stream_hi_},
                        key_);
    ++block_;
    uni_[0] = to_unit(r[0], r[1]);
    uni_[1] = to_unit(r[2], r[3]);
}

double NormalStream::uniform() {
    if (uni_left_ == 0) {
        refill();
        uni_left_ = 2;
    }
    return uni_[2 - uni_left_--];
}

double NormalStream::normal() {
    if (norm_left_ == 0) {
        refill();
        double rad = std::sqrt(-2.0 * std::log(uni_[0]));
        double ang = 2.0 * std::numbers::pi * uni_[1];
        norm_[0] = rad * std::cos(ang);
        norm_[1] = rad * std::sin(ang);
        norm_left_ = 2;
    }
    return norm_[2 - norm_left_--];
}

void NormalStream::fill(std::span<double> out) {
    for (auto& v : out) v = normal();
}

}  // namespace frackac
