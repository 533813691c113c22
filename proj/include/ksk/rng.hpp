#pragma once

#include <cmath>
#include <cstdint>

namespace ksk {

// Counter-based stream: output i of stream (seed, stream_id) is a SplitMix64
// hash of a per-stream key plus the counter. Streams indexed by path give
// byte-identical samples regardless of how paths are distributed over
// workers.
class CounterRng {
 public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_id)
        : key_(mix(seed ^ mix(stream_id + 0x9e3779b97f4a7c15ULL))), counter_(0) {}

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    // uniform in (0,1), never returns 0 or 1
    double uniform() {
        double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return u == 0.0 ? 0x1.0p-54 : u;
    }

    // uniform in (lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate = 1.0) { return -std::log(uniform()) / rate; }

    // Marsaglia polar; consumes a variable number of uniforms (fine: streams
    // are strictly sequential per path).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        for (;;) {
            double a = 2.0 * uniform() - 1.0;
            double b = 2.0 * uniform() - 1.0;
            double s = a * a + b * b;
            if (s > 0.0 && s < 1.0) {
                double m = std::sqrt(-2.0 * std::log(s) / s);
                spare_ = b * m;
                have_spare_ = true;
                return a * m;
            }
        }
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

 private:
    std::uint64_t key_;
    std::uint64_t counter_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace ksk
