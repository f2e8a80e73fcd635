#pragma once

#include <cstdint>
#include <random>

#include "texmix/grid.hpp"

namespace texmix {

// Deterministic standard-normal stream with a fixed layout: mt19937_64 raw
// 64-bit words mapped to (0,1] uniforms, paired through Box-Muller. The
// mt19937_64 word sequence is fully specified by the standard, so the stream
// does not depend on the standard library's distribution implementations.
class NormalSampler {
public:
    explicit NormalSampler(uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit_open_closed();
        const double u2 = next_unit_open_closed();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    // (0, 1]: never zero, so the log above is always finite.
    double next_unit_open_closed() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
    }

    static constexpr double kPi = 3.14159265358979323846;

    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// i.i.d. mean + stddev * N(0,1) field, filled in storage order (channel-major,
// then row-major).
inline FeatureMap normal_field(long rows, long cols, int channels, uint64_t seed,
                               double mean = 0.0, double stddev = 1.0) {
    FeatureMap f(rows, cols, channels);
    NormalSampler sampler(seed);
    for (double& x : f.values()) x = mean + stddev * sampler.next();
    return f;
}

}  // namespace texmix
