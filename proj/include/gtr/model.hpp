#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gtr/bitvec.hpp"
#include "gtr/rng.hpp"

namespace gtr {

/// The hidden instance: a string of coin biases p_1..p_n. Indices are 1-based
/// on every external surface (files, reports); storage is 0-based.
class ProbabilityString {
public:
    explicit ProbabilityString(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty()) throw std::invalid_argument("ProbabilityString: empty");
        for (double p : probs_)
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("ProbabilityString: entry outside [0,1]");
    }

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }  // 0-based
    const std::vector<double>& probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

struct ChannelParams {
    double delta = 0.0;  // per-bit deletion probability

    explicit ChannelParams(double d) : delta(d) {
        if (!(d >= 0.0 && d <= 1.0))
            throw std::invalid_argument("ChannelParams: delta outside [0,1]");
    }
};

using Trace = BitVec;

/// Trace plus the 1-based source index of each surviving bit. Test-only
/// ground truth; the reconstruction algorithms never read `sources`.
struct ProvenancedTrace {
    BitVec bits;
    std::vector<std::uint32_t> sources;  // strictly increasing, in {1,...,n}
};

/// n independent uniform [0,1] draws. Deterministic given the stream.
inline ProbabilityString draw_random_instance(std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("draw_random_instance: n must be >= 1");
    std::vector<double> p(n);
    for (auto& v : p) v = rng.uniform01();
    return ProbabilityString(std::move(p));
}

/// Surround S with w fresh uniform draws on each side. The middle n entries
/// of the result equal S exactly; downstream estimates of the pad positions
/// are discarded, they exist only so the interior windows are reachable.
inline ProbabilityString pad_instance(const ProbabilityString& s, std::size_t w, Rng& rng) {
    if (w == 0) throw std::invalid_argument("pad_instance: w must be >= 1");
    std::vector<double> out;
    out.reserve(s.size() + 2 * w);
    for (std::size_t i = 0; i < w; ++i) out.push_back(rng.uniform01());
    out.insert(out.end(), s.probs().begin(), s.probs().end());
    for (std::size_t i = 0; i < w; ++i) out.push_back(rng.uniform01());
    return ProbabilityString(std::move(out));
}

}  // namespace gtr
