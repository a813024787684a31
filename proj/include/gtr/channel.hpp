#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtr/model.hpp"

namespace gtr {

/// Exact distribution over all binary outputs of length 0..n, for small n.
/// Outputs are indexed canonically: a string of length L with MSB-first
/// integer value v lives at index (2^L - 1) + v, so the table has 2^(n+1)-1
/// entries. The empty trace is entry 0 and is always represented.
struct TraceDistribution {
    int n = 0;                     // source length
    std::vector<double> p;         // size 2^(n+1) - 1

    static std::size_t index_of(const BitVec& o) {
        std::size_t v = 0;
        for (std::size_t j = 0; j < o.size(); ++j) v = (v << 1) | (o.get(j) ? 1u : 0u);
        return ((std::size_t{1} << o.size()) - 1) + v;
    }

    /// Inverse of index_of: reconstructs the output string at a table slot.
    static BitVec string_at(std::size_t idx) {
        std::size_t len = 0;
        while (((std::size_t{1} << (len + 1)) - 1) <= idx) ++len;
        std::size_t v = idx - ((std::size_t{1} << len) - 1);
        BitVec o;
        for (std::size_t j = 0; j < len; ++j)
            o.push_back((v >> (len - 1 - j)) & 1u);
        return o;
    }

    double prob(const BitVec& o) const { return p[index_of(o)]; }
};

/// One pass of the channel: flip coin i with bias p_i, then delete each bit
/// independently with probability delta. Both uniforms are always consumed,
/// so the stream layout does not depend on outcomes.
inline ProvenancedTrace sample_trace_provenanced(const ProbabilityString& s,
                                                 const ChannelParams& params, Rng& rng) {
    ProvenancedTrace t;
    t.bits.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool bit = rng.uniform01() < s[i];
        const bool keep = rng.uniform01() >= params.delta;
        if (keep) {
            t.bits.push_back(bit);
            t.sources.push_back(static_cast<std::uint32_t>(i + 1));
        }
    }
    return t;
}

inline Trace sample_trace(const ProbabilityString& s, const ChannelParams& params, Rng& rng) {
    return sample_trace_provenanced(s, params, rng).bits;
}

/// P[channel output == o], by dynamic programming over (source prefix,
/// output prefix): A[j][k] = delta*A[j-1][k] + (1-delta)*q_j(o_k)*A[j-1][k-1]
/// with q_j(1)=p_j, q_j(0)=1-p_j. O(n*|o|) time, O(|o|) space.
inline double trace_probability(const ProbabilityString& s, const ChannelParams& params,
                                const Trace& o) {
    const std::size_t n = s.size(), m = o.size();
    if (m > n) throw std::invalid_argument("trace_probability: |o| > n");
    const double delta = params.delta;
    std::vector<double> row(m + 1, 0.0);
    row[0] = 1.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double pj = s[j - 1];
        const std::size_t kmax = std::min(j, m);
        for (std::size_t k = kmax; k >= 1; --k) {
            const double q = o.get(k - 1) ? pj : 1.0 - pj;
            row[k] = delta * row[k] + (1.0 - delta) * q * row[k - 1];
        }
        row[0] *= delta;
    }
    return row[m];
}

inline constexpr int kDefaultEnumerationCap = 16;

struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full output distribution by enumerating every binary string of length
/// 0..n through trace_probability. Exact; cost grows as 2^n * n^2, hence the
/// cap (overridable for patient callers).
inline TraceDistribution exact_trace_distribution(const ProbabilityString& s,
                                                  const ChannelParams& params,
                                                  int cap = kDefaultEnumerationCap) {
    const int n = static_cast<int>(s.size());
    if (n > cap)
        throw ResourceLimitError("exact_trace_distribution: n exceeds enumeration cap");
    TraceDistribution d;
    d.n = n;
    d.p.assign((std::size_t{1} << (n + 1)) - 1, 0.0);
    for (std::size_t idx = 0; idx < d.p.size(); ++idx)
        d.p[idx] = trace_probability(s, params, TraceDistribution::string_at(idx));
    return d;
}

/// Total variation distance, (1/2) sum |D1 - D2|, with compensated summation.
inline double tv_distance(const TraceDistribution& d1, const TraceDistribution& d2) {
    if (d1.n != d2.n) throw std::invalid_argument("tv_distance: source lengths differ");
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < d1.p.size(); ++i) {
        const double term = std::fabs(d1.p[i] - d2.p[i]);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return 0.5 * sum;
}

/// Kahan-compensated sum of all probabilities (normalization diagnostic).
inline double total_mass(const TraceDistribution& d) {
    double sum = 0.0, comp = 0.0;
    for (double v : d.p) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace gtr
