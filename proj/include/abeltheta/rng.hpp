#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace abeltheta {

// Seeded generator used by every randomized routine.  Distributions are
// implemented by hand so identical seeds give identical draws on any
// platform (std:: distributions are not portable across libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed = default_seed) : eng_(seed) {}

    static constexpr std::uint64_t default_seed = 0x5eed0abe17e7a000ULL;

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // uniform integer in [lo, hi] inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    double normal() {
        // Box-Muller; cache the second value.
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace abeltheta
