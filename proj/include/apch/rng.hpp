#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace apch {

/// Sub-seed derivation: splitmix64 finalizer applied to base + stream * phi.
/// Every parallel unit (replicate, scenario segment run, ...) draws its own
/// engine from (base_seed, stream_index) so results do not depend on thread
/// count or evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// mt19937_64 plus a polar-method normal sampler. The sampler is pinned here
/// (instead of std::normal_distribution) so identical seeds give identical
/// streams independent of the standard library build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    Rng(std::uint64_t base, std::uint64_t stream) : eng_(derive_seed(base, stream)) {}

    /// Uniform on (0, 1).
    double uniform() {
        // 53-bit mantissa; never returns 0 or 1.
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Marsaglia's polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace apch
