#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gtr/model.hpp"
#include "gtr/reconstruct.hpp"

namespace gtr {

/// Error report between a truth string and a set of estimates. Indices with
/// zero coverage are excluded from both norms and listed instead; imputing a
/// value there would silently bias every aggregate.
struct ErrorReport {
    double l1 = 0.0;
    double linf = 0.0;
    double mean_abs = 0.0;
    std::vector<std::uint32_t> indices;     // 1-based truth indices that were compared
    std::vector<double> per_index;          // absolute error per compared index
    std::vector<std::uint32_t> missing;     // in-range indices with no estimate
    std::uint32_t range_lo = 0, range_hi = 0;
};

/// Compare truth_{lo..hi} (1-based) against estimates. `offset` maps truth
/// index k to estimate source index k + offset (0 when both live in the same
/// coordinate system; the pad width when estimates are in padded coordinates).
inline ErrorReport compare(const ProbabilityString& truth, const AveragedEstimates& est,
                           std::uint32_t lo, std::uint32_t hi, std::uint32_t offset = 0) {
    if (lo < 1 || hi > truth.size() || lo > hi)
        throw std::invalid_argument("compare: range outside truth string");
    ErrorReport rep;
    rep.range_lo = lo;
    rep.range_hi = hi;
    double sum = 0.0;
    for (std::uint32_t k = lo; k <= hi; ++k) {
        const std::uint32_t src = k + offset;
        if (src < est.first_index ||
            src >= est.first_index + est.estimates.size() ||
            est.coverage[src - est.first_index] == 0) {
            rep.missing.push_back(k);
            continue;
        }
        const double err = std::fabs(truth[k - 1] - est.estimates[src - est.first_index]);
        rep.indices.push_back(k);
        rep.per_index.push_back(err);
        sum += err;
        if (err > rep.linf) rep.linf = err;
    }
    if (rep.indices.empty()) throw std::invalid_argument("compare: no covered indices in range");
    rep.l1 = sum;
    rep.mean_abs = sum / double(rep.indices.size());
    return rep;
}

}  // namespace gtr
