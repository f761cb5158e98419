#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace rbm {

// Philox4x32-10 counter-based generator.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key)
    {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
            const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
            const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += W0;
            key[1] += W1;
        }
        return ctr;
    }
};

// A reproducible substream identified by (master_seed, stream_index).
// Satisfies UniformRandomBitGenerator with 64-bit output.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_seed_(master_seed), stream_index_(stream_index),
          key_{std::uint32_t(master_seed), std::uint32_t(master_seed >> 32)}
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        if (pos_ >= 2) refill();
        const std::uint64_t v = (std::uint64_t(buffer_[2 * pos_ + 1]) << 32) | buffer_[2 * pos_];
        ++pos_;
        return v;
    }

    double normal() { return normal_(*this); }
    double uniform() { return uniform_(*this); }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

private:
    void refill()
    {
        const Philox4x32::Counter ctr{std::uint32_t(block_), std::uint32_t(block_ >> 32),
                                      std::uint32_t(stream_index_), std::uint32_t(stream_index_ >> 32)};
        buffer_ = Philox4x32::block(ctr, key_);
        ++block_;
        pos_ = 0;
    }

    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    Philox4x32::Key key_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int pos_ = 2;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

} // namespace rbm
