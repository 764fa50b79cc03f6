#pragma once

#include <cstdint>
#include <random>

namespace rnmf {

/// Deterministic random source. The core generator is MT19937-64, which the
/// C++ standard pins bit-exactly, so an identical seed produces an identical
/// stream on every platform. All variate transforms are implemented here
/// rather than with std:: distributions, whose output is
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Deterministic child-seed derivation (SplitMix64 mix of seed and
    /// stream index). Used to give each column / trial / restart its own
    /// independent stream regardless of execution order.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

    Rng child(std::uint64_t stream) const { return Rng(derive(seed_, stream)); }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01();

    /// Uniform on the open interval (0, 1); safe input for inverse-CDF
    /// transforms that diverge at the endpoints.
    double uniform01_open();

    double uniform(double lo, double hi);

    /// Unbiased integer in [0, n); rejection sampling. n must be > 0.
    std::uint64_t below(std::uint64_t n);

    /// Laplace(0, scale) via inverse CDF.
    double laplace(double scale);

    /// Cauchy(0, scale) via inverse CDF.
    double cauchy(double scale);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace rnmf
