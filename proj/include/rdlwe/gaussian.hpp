#pragma once

#include <vector>

#include "rdlwe/field.hpp"
#include "rdlwe/rng.hpp"

namespace rdlwe {

/// Zero-mean discrete Gaussian over the integers, sampled by inverse-CDF
/// lookup.  The table covers [-ceil(10*sigma), ceil(10*sigma)] with
/// probabilities proportional to exp(-k^2 / (2 sigma^2)), renormalized;
/// mass beyond the tail cut is below 1e-21.  sigma = 0 always yields 0
/// and consumes no randomness.
class GaussianSampler {
public:
    explicit GaussianSampler(double sigma);

    double sigma() const { return sigma_; }
    i64 support_bound() const { return bound_; }

    i64 sample(RngStream& rng) const;

private:
    double sigma_;
    i64 bound_;
    std::vector<u64> cdt_; // cumulative probabilities scaled to 2^63
};

} // namespace rdlwe
