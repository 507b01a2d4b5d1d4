#include "sllbar/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sllbar {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// 53-bit uniform in (0, 1].
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
    return (static_cast<double>(bits & ((1ULL << 53) - 1)) + 1.0) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

double keyed_normal(std::uint64_t seed, std::uint64_t path, std::uint32_t j, std::uint64_t step) {
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                              static_cast<std::uint32_t>(seed >> 32)};
    // Path and step share the upper 64 bits; 2^32 paths and 2^32 steps suffice.
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(step), j,
                                  static_cast<std::uint32_t>(path),
                                  static_cast<std::uint32_t>(step >> 32) ^
                                      (static_cast<std::uint32_t>(path >> 32) << 16)};
    const auto r = Philox4x32::generate(ctr, key);
    const double u1 = to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    // Box-Muller, cosine branch.
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

WienerIncrement sample_increments(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                                  int J, double dt) {
    return IncrementSource(seed, path, J, dt).at(step);
}

IncrementSource::IncrementSource(std::uint64_t seed, std::uint64_t path, int J, double dt,
                                 std::uint64_t substeps)
    : seed_(seed), path_(path), J_(J), dt_(dt), substeps_(substeps) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("increments: dt must be > 0");
    if (J < 0) throw std::invalid_argument("increments: negative J");
    if (substeps == 0) throw std::invalid_argument("increments: substeps must be >= 1");
}

void IncrementSource::fill(std::uint64_t step, std::vector<double>& dw) const {
    dw.assign(J_, 0.0);
    const double scale = std::sqrt(dt_ / static_cast<double>(substeps_));
    for (int j = 0; j < J_; ++j) {
        double s = 0.0;
        for (std::uint64_t i = 0; i < substeps_; ++i)
            s += keyed_normal(seed_, path_, static_cast<std::uint32_t>(j), step * substeps_ + i);
        dw[j] = scale * s;
    }
}

WienerIncrement IncrementSource::at(std::uint64_t step) const {
    WienerIncrement w;
    w.step = step;
    fill(step, w.dw);
    return w;
}

}  // namespace sllbar
