#pragma once

#include <cstdint>
#include <random>

namespace nlds {

/// Seeded generator with a portable uniform draw (std distributions are
/// implementation-defined, which would break output reproducibility).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1); }

private:
    std::mt19937_64 engine_;
};

}  // namespace nlds
