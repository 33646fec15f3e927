#include "rdlwe/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "rdlwe/errors.hpp"

namespace rdlwe {

GaussianSampler::GaussianSampler(double sigma) : sigma_(sigma), bound_(0) {
    if (sigma < 0) throw Error("sigma must be non-negative");
    if (sigma == 0) return;
    bound_ = static_cast<i64>(std::ceil(10.0 * sigma));
    std::vector<long double> pdf;
    pdf.reserve(2 * bound_ + 1);
    long double mass = 0;
    for (i64 k = -bound_; k <= bound_; ++k) {
        long double p = std::exp(-static_cast<long double>(k) * k / (2.0L * sigma * sigma));
        pdf.push_back(p);
        mass += p;
    }
    const long double scale = std::exp2(63.0L);
    cdt_.reserve(pdf.size());
    long double cum = 0;
    for (long double p : pdf) {
        cum += p / mass;
        cdt_.push_back(static_cast<u64>(std::min(cum, 1.0L) * scale));
    }
    cdt_.back() = u64{1} << 63; // exact upper edge
}

i64 GaussianSampler::sample(RngStream& rng) const {
    if (sigma_ == 0) return 0;
    const u64 u = rng.next_bits63();
    auto it = std::upper_bound(cdt_.begin(), cdt_.end(), u);
    i64 index = static_cast<i64>(it - cdt_.begin());
    return index - bound_;
}

} // namespace rdlwe
