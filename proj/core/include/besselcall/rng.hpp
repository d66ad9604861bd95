#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011), one
// instance per Monte Carlo stream. The stream id lives in the counter block,
// so streams drawn from the same seed never collide and results do not
// depend on how streams are scheduled across threads.

#include <cstdint>
#include <limits>

namespace besselcall::mc {

class Philox {
public:
    using result_type = std::uint64_t;

    Philox(std::uint64_t seed, std::uint32_t stream) {
        key_[0] = static_cast<std::uint32_t>(seed);
        key_[1] = static_cast<std::uint32_t>(seed >> 32);
        ctr_[0] = 0;
        ctr_[1] = 0;
        ctr_[2] = stream;
        ctr_[3] = 0x9e3779b9u;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (have_ == 0) {
            block();
            have_ = 2;
        }
        --have_;
        const std::uint64_t hi = out_[2 * have_ + 1];
        return (hi << 32) | out_[2 * have_];
    }

    // Uniform in (0,1): 53 mantissa bits, never exactly 0.
    double uniform() {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    static void round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
        constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t r0 = hi1 ^ ctr[1] ^ key[0];
        const std::uint32_t r2 = hi0 ^ ctr[3] ^ key[1];
        ctr[0] = r0;
        ctr[1] = lo1;
        ctr[2] = r2;
        ctr[3] = lo0;
    }

    void block() {
        constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
        std::uint32_t c[4] = {ctr_[0], ctr_[1], ctr_[2], ctr_[3]};
        std::uint32_t k[2] = {key_[0], key_[1]};
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                k[0] += kW0;
                k[1] += kW1;
            }
            round(c, k);
        }
        out_[0] = c[0];
        out_[1] = c[1];
        out_[2] = c[2];
        out_[3] = c[3];
        if (++ctr_[0] == 0 && ++ctr_[1] == 0) ++ctr_[3];
    }

    std::uint32_t key_[2];
    std::uint32_t ctr_[4];
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int have_ = 0;
};

} // namespace besselcall::mc
