#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtr/bitvec.hpp"
#include "gtr/model.hpp"
#include "gtr/parallel.hpp"
#include "gtr/rng.hpp"

namespace gtr {

/// Knobs of the chunk pipeline. The match threshold is kept as a rational
/// so the predicate is evaluated in exact integer arithmetic:
/// chunks match iff threshold_den * distance <= threshold_num * w.
struct ReconstructionParams {
    std::uint64_t m = 0;          // scale parameter for diagnostics; 0 = derive from size_x
    std::size_t w = 30;           // chunk width
    std::size_t size_x = 2000;    // traces sampled for chunks
    std::size_t size_y = 20000;   // traces used only to localize
    std::uint64_t threshold_num = 5;
    std::uint64_t threshold_den = 12;

    void validate() const {
        if (w < 1) throw std::invalid_argument("ReconstructionParams: w must be >= 1");
        if (size_x < 1 || size_y < 1)
            throw std::invalid_argument("ReconstructionParams: set sizes must be >= 1");
        if (threshold_den == 0)
            throw std::invalid_argument("ReconstructionParams: zero threshold denominator");
    }

    /// Largest Hamming distance that still matches at width `width`.
    std::size_t match_limit(std::size_t width) const {
        return static_cast<std::size_t>(threshold_num * width / threshold_den);
    }

    double scale_m() const {
        if (m != 0) return double(m);
        return std::sqrt(double(size_x));
    }
};

/// A width-w window of a trace. `start` is the 1-based position within the
/// trace. `true_sources` is the provenance of the covered source window,
/// carried only in instrumented runs and never read by the algorithms.
struct Chunk {
    BitVec bits;
    std::uint32_t trace_id = 0;
    std::uint32_t start = 1;
    std::optional<std::vector<std::uint32_t>> true_sources;
};

/// Ground-truth alignment census of a chunk pair (test instrumentation).
struct AlignmentStats {
    std::size_t aligned = 0;     // positions drawing on the same source bias
    std::size_t misaligned = 0;  // positions drawing on different biases
};

inline AlignmentStats alignment_stats(const Chunk& a, const Chunk& b) {
    if (!a.true_sources || !b.true_sources)
        throw std::invalid_argument("alignment_stats: chunks lack provenance");
    if (a.bits.size() != b.bits.size())
        throw std::invalid_argument("alignment_stats: width mismatch");
    AlignmentStats st;
    for (std::size_t j = 0; j < a.bits.size(); ++j) {
        if ((*a.true_sources)[j] == (*b.true_sources)[j]) ++st.aligned;
        else ++st.misaligned;
    }
    return st;
}

/// Hamming distance between two equal-width chunks. Word-parallel popcount;
/// O(w/64) word operations.
inline std::size_t chunk_distance(const Chunk& a, const Chunk& b) {
    if (a.bits.size() != b.bits.size())
        throw std::invalid_argument("chunk_distance: width mismatch");
    return hamming(a.bits, b.bits);
}

inline bool matches(const Chunk& a, const Chunk& b, const ReconstructionParams& params) {
    const std::size_t d = chunk_distance(a, b);
    return params.threshold_den * d <= params.threshold_num * a.bits.size();
}

/// Offset-1 match: the last w-1 bits of `a` against the first w-1 bits of
/// `b`, thresholded against the full-width budget (5w/12, not 5(w-1)/12).
inline bool matches_offset1(const Chunk& a, const Chunk& b, const ReconstructionParams& params) {
    const std::size_t w = a.bits.size();
    if (w != b.bits.size()) throw std::invalid_argument("matches_offset1: width mismatch");
    if (w < 2) return true;
    const std::size_t limit = params.match_limit(w);
    const std::size_t d = hamming_window(a.bits, 1, b.bits, w - 1, limit);
    return params.threshold_den * d <= params.threshold_num * w;
}

/// Per-trace outcome of the chunk search, kept for every x whether or not a
/// chunk was returned (instrumentation and the non-inspection test need the
/// full decision vector).
struct ChunkDecision {
    std::uint32_t trace_id = 0;
    bool eligible = false;   // |x| >= 3w
    std::uint32_t start = 0; // drawn triple start (1-based), 0 if ineligible
    bool accepted = false;
};

struct FindChunksResult {
    std::vector<Chunk> chunks;
    std::vector<ChunkDecision> decisions;
};

namespace detail {

// Positions (0-based window starts) where `pattern`'s first w bits match a
// window of `hay`, as a bitmask. Early-abort per window once the running
// distance exceeds the limit.
struct WindowMasks {
    std::vector<std::uint64_t> bits;
    std::size_t count = 0;

    void reset(std::size_t n) {
        count = n;
        bits.assign((n + 63) / 64, 0);
    }
    void set(std::size_t i) { bits[i >> 6] |= 1ull << (i & 63); }
    bool any() const {
        for (auto w : bits) if (w) return true;
        return false;
    }
    std::ptrdiff_t first_set() const {
        for (std::size_t q = 0; q < bits.size(); ++q)
            if (bits[q]) return std::ptrdiff_t(q * 64 + std::countr_zero(bits[q]));
        return -1;
    }
    std::ptrdiff_t last_set() const {
        for (std::size_t q = bits.size(); q-- > 0;)
            if (bits[q]) return std::ptrdiff_t(q * 64 + 63 - std::countl_zero(bits[q]));
        return -1;
    }
};

inline void scan_windows(const BitVec& hay, const BitVec& pattern, std::size_t w,
                         std::size_t limit, std::uint64_t threshold_num,
                         std::uint64_t threshold_den, WindowMasks& out) {
    const std::size_t nwin = hay.size() >= w ? hay.size() - w + 1 : 0;
    out.reset(nwin);
    for (std::size_t j = 0; j < nwin; ++j) {
        const std::size_t d = hamming_window(hay, j, pattern, w, limit);
        if (threshold_den * d <= threshold_num * w) out.set(j);
    }
}

// True when mask_l has a set bit j with mask_r set at j + offset.
inline bool shifted_intersects(const WindowMasks& l, const WindowMasks& r, std::size_t offset) {
    const std::size_t q = offset >> 6, s = offset & 63;
    for (std::size_t i = 0; i < l.bits.size(); ++i) {
        std::uint64_t rw = 0;
        if (i + q < r.bits.size()) rw = r.bits[i + q] >> s;
        if (s != 0 && i + q + 1 < r.bits.size()) rw |= r.bits[i + q + 1] << (64 - s);
        if (l.bits[i] & rw) return true;
    }
    return false;
}

}  // namespace detail

/// Find chunks of X traces that are (with the right parameters) deletion
/// free, using only the flanking context. For each eligible x a start i is
/// drawn uniformly and the trace is split into consecutive width-w windows
/// L (at i), M (at i+w), R (at i+2w). M is returned iff
///   (1) some y has L matching at j and R matching at exactly j + 2w, and
///   (2) no y has L matching at j and R matching at j' with j' - j > 2w.
/// M's bits are never read here; decisions depend only on L, R and Y, which
/// is what keeps the returned bits unbiased.
///
/// Start draws come from derive_seed(seed, "chunk-start", x index), so runs
/// are reproducible and independent of the worker count. X traces may carry
/// provenance (instrumented runs); it is copied onto the returned chunks.
inline FindChunksResult find_deletion_free_chunks(
    const std::vector<BitVec>& xs, const std::vector<BitVec>& ys,
    const ReconstructionParams& params, std::uint64_t seed, unsigned workers = 1,
    const std::vector<std::vector<std::uint32_t>>* x_sources = nullptr) {
    params.validate();
    if (xs.empty() || ys.empty())
        throw std::invalid_argument("find_deletion_free_chunks: empty trace set");
    if (x_sources && x_sources->size() != xs.size())
        throw std::invalid_argument("find_deletion_free_chunks: provenance size mismatch");

    const std::size_t w = params.w;
    const std::size_t limit = params.match_limit(w);
    FindChunksResult result;
    result.decisions.assign(xs.size(), {});

    parallel_for_index(xs.size(), workers, [&](std::size_t xi) {
        ChunkDecision& dec = result.decisions[xi];
        dec.trace_id = static_cast<std::uint32_t>(xi);
        const BitVec& x = xs[xi];
        if (x.size() < 3 * w) return;
        dec.eligible = true;

        Rng rng(derive_seed(seed, "chunk-start", xi));
        const std::size_t i =
            static_cast<std::size_t>(rng.uniform_int(1, std::int64_t(x.size() - 3 * w + 1)));
        dec.start = static_cast<std::uint32_t>(i);

        const BitVec left = x.slice(i - 1, w);
        const BitVec right = x.slice(i - 1 + 2 * w, w);

        bool witness = false, violation = false;
        detail::WindowMasks mask_l, mask_r;
        for (const BitVec& y : ys) {
            if (y.size() < w) continue;
            detail::scan_windows(y, left, w, limit, params.threshold_num,
                                 params.threshold_den, mask_l);
            if (!mask_l.any()) continue;
            detail::scan_windows(y, right, w, limit, params.threshold_num,
                                 params.threshold_den, mask_r);
            if (!mask_r.any()) continue;
            if (!witness && detail::shifted_intersects(mask_l, mask_r, 2 * w)) witness = true;
            const std::ptrdiff_t min_l = mask_l.first_set();
            const std::ptrdiff_t max_r = mask_r.last_set();
            if (max_r - min_l > std::ptrdiff_t(2 * w)) {
                violation = true;
                break;  // reject is final; skipping the remaining ys cannot change it
            }
        }
        dec.accepted = witness && !violation;
    });

    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        const ChunkDecision& dec = result.decisions[xi];
        if (!dec.accepted) continue;
        Chunk c;
        c.trace_id = dec.trace_id;
        c.start = dec.start + static_cast<std::uint32_t>(w);
        c.bits = xs[xi].slice(dec.start - 1 + w, w);
        if (x_sources) {
            const auto& src = (*x_sources)[xi];
            c.true_sources.emplace(src.begin() + (dec.start - 1 + w),
                                   src.begin() + (dec.start - 1 + 2 * w));
        }
        result.chunks.push_back(std::move(c));
    }
    return result;
}

/// Output of the grouping stage. Failure is a value, not an exception: the
/// orchestration surfaces it as a structured result with a reason.
struct GroupedChunks {
    std::vector<std::vector<std::size_t>> groups;  // indices into the chunk list, chain order
    std::uint32_t anchor = 0;                      // source index of the first group's window
    bool fail = false;
    std::string fail_reason;
};

/// Partition chunks into groups (connected components of the match relation),
/// order the groups into a chain via offset-1 matches, and anchor the chain.
/// Fails, with a reason, when a component is not a clique ("inconsistent
/// grouping"), when the offset-1 relation does not order the groups into a
/// single undirected path ("not a total order"), when both orientations of
/// that path are supported ("ambiguous orientation"), or when the chain does
/// not cover every window, i.e. the group count differs from n - 3w + 1
/// ("incomplete coverage"). Only full coverage justifies anchoring the first
/// group at source index w + 1, which is why the count check gates it.
inline GroupedChunks group_and_order(const std::vector<Chunk>& chunks, std::size_t n_source,
                                     const ReconstructionParams& params) {
    params.validate();
    const std::size_t w = params.w;
    GroupedChunks out;
    auto fail = [&](std::string reason) {
        out.fail = true;
        out.fail_reason = std::move(reason);
        return out;
    };

    const std::size_t k = chunks.size();
    const std::size_t expected_groups = n_source >= 3 * w ? n_source - 3 * w + 1 : 0;
    if (k == 0) return fail("incomplete coverage");

    // match graph -> components (union-find)
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::vector<bool>> adj(k, std::vector<bool>(k, false));
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (matches(chunks[a], chunks[b], params)) {
                adj[a][b] = adj[b][a] = true;
                parent[find(a)] = find(b);
            }

    std::vector<std::size_t> root_to_group(k, std::size_t(-1));
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t a = 0; a < k; ++a) {
        const std::size_t r = find(a);
        if (root_to_group[r] == std::size_t(-1)) {
            root_to_group[r] = groups.size();
            groups.emplace_back();
        }
        groups[root_to_group[r]].push_back(a);
    }

    for (const auto& g : groups)
        for (std::size_t ia = 0; ia < g.size(); ++ia)
            for (std::size_t ib = ia + 1; ib < g.size(); ++ib)
                if (!adj[g[ia]][g[ib]]) return fail("inconsistent grouping");

    const std::size_t ng = groups.size();

    // directed offset-1 edges between distinct groups
    std::vector<std::vector<bool>> succ(ng, std::vector<bool>(ng, false));
    std::vector<std::size_t> group_of(k);
    for (std::size_t gi = 0; gi < ng; ++gi)
        for (std::size_t c : groups[gi]) group_of[c] = gi;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            if (group_of[a] == group_of[b]) continue;
            if (matches_offset1(chunks[a], chunks[b], params))
                succ[group_of[a]][group_of[b]] = true;
        }

    std::vector<std::size_t> order;
    bool forward_ok = true, backward_ok = true;
    if (ng == 1) {
        order.push_back(0);
        backward_ok = false;
    } else {
        // undirected path check
        std::vector<std::vector<std::size_t>> und(ng);
        for (std::size_t a = 0; a < ng; ++a)
            for (std::size_t b = a + 1; b < ng; ++b)
                if (succ[a][b] || succ[b][a]) {
                    und[a].push_back(b);
                    und[b].push_back(a);
                }
        std::vector<std::size_t> endpoints;
        for (std::size_t g = 0; g < ng; ++g) {
            if (und[g].size() > 2) return fail("not a total order");
            if (und[g].size() == 1) endpoints.push_back(g);
        }
        if (endpoints.size() != 2) return fail("not a total order");
        std::size_t prev = std::size_t(-1), cur = endpoints[0];
        order.push_back(cur);
        while (order.size() < ng) {
            std::size_t nxt = std::size_t(-1);
            for (std::size_t nb : und[cur])
                if (nb != prev) nxt = nb;
            if (nxt == std::size_t(-1)) return fail("not a total order");
            order.push_back(nxt);
            prev = cur;
            cur = nxt;
        }
        for (std::size_t t = 0; t + 1 < ng; ++t) {
            if (!succ[order[t]][order[t + 1]]) forward_ok = false;
            if (!succ[order[t + 1]][order[t]]) backward_ok = false;
        }
        if (!forward_ok && !backward_ok) return fail("not a total order");
        if (forward_ok && backward_ok) return fail("ambiguous orientation");
        if (!forward_ok) std::reverse(order.begin(), order.end());
    }

    if (ng != expected_groups) return fail("incomplete coverage");

    out.anchor = static_cast<std::uint32_t>(w + 1);
    out.groups.reserve(ng);
    for (std::size_t g : order) out.groups.push_back(std::move(groups[g]));
    return out;
}

/// Averaged estimates. Indices run over the interior window
/// [w+1, n_source-w]; positions nothing contributed to are reported missing,
/// never fabricated.
struct AveragedEstimates {
    std::uint32_t first_index = 0;           // 1-based source index of estimates[0]
    std::vector<double> estimates;           // NaN at missing positions
    std::vector<std::uint32_t> coverage;     // contributing bit count per index
    std::vector<std::uint32_t> missing;      // 1-based indices with zero coverage
};

inline AveragedEstimates align_and_average(const GroupedChunks& grouped,
                                           const std::vector<Chunk>& chunks,
                                           std::size_t n_source, std::size_t w) {
    if (grouped.fail)
        throw std::invalid_argument("align_and_average: grouping failed: " + grouped.fail_reason);
    if (n_source < 2 * w + 1)
        throw std::invalid_argument("align_and_average: n_source too small");

    AveragedEstimates out;
    out.first_index = static_cast<std::uint32_t>(w + 1);
    const std::size_t count = n_source - 2 * w;
    std::vector<double> sum(count, 0.0);
    out.coverage.assign(count, 0);

    for (std::size_t gi = 0; gi < grouped.groups.size(); ++gi) {
        const std::size_t window_start = grouped.anchor + gi;  // 1-based source index
        for (std::size_t ci : grouped.groups[gi]) {
            const Chunk& c = chunks[ci];
            for (std::size_t j = 0; j < c.bits.size(); ++j) {
                const std::size_t k = window_start + j;  // source index of this bit
                const std::size_t slot = k - out.first_index;
                if (slot >= count) continue;  // pad-side spill, outside the estimate range
                sum[slot] += c.bits.get(j) ? 1.0 : 0.0;
                out.coverage[slot] += 1;
            }
        }
    }

    out.estimates.resize(count);
    for (std::size_t s = 0; s < count; ++s) {
        if (out.coverage[s] == 0) {
            out.estimates[s] = std::numeric_limits<double>::quiet_NaN();
            out.missing.push_back(static_cast<std::uint32_t>(out.first_index + s));
        } else {
            out.estimates[s] = sum[s] / double(out.coverage[s]);
        }
    }
    return out;
}

/// Full pipeline: find chunks, group, order, average.
struct PipelineResult {
    FindChunksResult find;
    GroupedChunks grouped;
    AveragedEstimates averaged;  // valid only when !grouped.fail
};

inline PipelineResult run_pipeline(const std::vector<BitVec>& xs, const std::vector<BitVec>& ys,
                                   std::size_t n_source, const ReconstructionParams& params,
                                   std::uint64_t seed, unsigned workers = 1,
                                   const std::vector<std::vector<std::uint32_t>>* x_sources = nullptr) {
    PipelineResult r;
    r.find = find_deletion_free_chunks(xs, ys, params, seed, workers, x_sources);
    r.grouped = group_and_order(r.find.chunks, n_source, params);
    if (!r.grouped.fail)
        r.averaged = align_and_average(r.grouped, r.find.chunks, n_source, params.w);
    return r;
}

}  // namespace gtr
