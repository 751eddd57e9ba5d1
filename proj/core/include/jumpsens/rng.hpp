#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace jumpsens {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream seed for path `index` under run seed `seed`. Paths own disjoint
// streams, so results do not depend on how paths are assigned to workers.
inline std::uint64_t path_stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed2701a1b2c3d4ULL));
}

// Per-path random stream. Draw order is part of the reproducibility contract;
// distributions are hand-mapped from 64-bit words so that sequences do not
// depend on the standard library's <random> distribution internals.
class PathRng {
  public:
    explicit PathRng(std::uint64_t stream_seed) : engine_(stream_seed) {}

    // uniform on (0,1), never returns an exact 0 or 1
    double uniform() {
        const std::uint64_t x = engine_();
        return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace jumpsens
