#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace sllbar {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
/// the output is a pure function of (key, counter).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key);
};

/// Standard normal draw keyed on (seed, path, j, step).
double keyed_normal(std::uint64_t seed, std::uint64_t path, std::uint32_t j, std::uint64_t step);

/// Per-mode Wiener increments for one step.
struct WienerIncrement {
    std::uint64_t step = 0;
    std::vector<double> dw;
};

/// N(0, dt) increments for modes j = 0..J-1 of `path` at `step`.
/// Throws std::invalid_argument for dt <= 0.
WienerIncrement sample_increments(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                                  int J, double dt);

/// Increments of one Brownian path on a step of size dt that is split into
/// `substeps` keyed sub-increments of size dt/substeps. Runs whose
/// dt * 2^r agree and whose substeps are 2^r see the same underlying path,
/// which is what dt-refinement studies rely on.
class IncrementSource {
public:
    IncrementSource(std::uint64_t seed, std::uint64_t path, int J, double dt,
                    std::uint64_t substeps = 1);

    WienerIncrement at(std::uint64_t step) const;
    void fill(std::uint64_t step, std::vector<double>& dw) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t path() const { return path_; }
    int modes() const { return J_; }
    double dt() const { return dt_; }
    std::uint64_t substeps() const { return substeps_; }

private:
    std::uint64_t seed_;
    std::uint64_t path_;
    int J_;
    double dt_;
    std::uint64_t substeps_;
};

}  // namespace sllbar
