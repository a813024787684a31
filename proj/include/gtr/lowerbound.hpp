#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gtr/model.hpp"

namespace gtr {

/// Binomial pmf C(n,k) p^k (1-p)^(n-k). Out-of-range k yields 0 (callers sum
/// over shifted indices and rely on this convention). Exact integer C(n,k)
/// for n <= 60, log-gamma otherwise so n in the tens of thousands is fine.
inline double binom_pmf(std::int64_t n, double p, std::int64_t k) {
    if (n < 0) throw std::invalid_argument("binom_pmf: n must be nonnegative");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binom_pmf: p outside [0,1]");
    if (k < 0 || k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    if (n <= 60) {
        // C(n,k) fits in uint64 up to n = 61
        std::uint64_t c = 1;
        const std::int64_t kk = std::min(k, n - k);
        for (std::int64_t i = 1; i <= kk; ++i)
            c = c * static_cast<std::uint64_t>(n - kk + i) / static_cast<std::uint64_t>(i);
        return static_cast<double>(c) * std::pow(p, double(k)) * std::pow(1.0 - p, double(n - k));
    }
    const double lc = std::lgamma(double(n + 1)) - std::lgamma(double(k + 1)) -
                      std::lgamma(double(n - k + 1));
    return std::exp(lc + double(k) * std::log(p) + double(n - k) * std::log1p(-p));
}

/// log of binom_pmf for in-range arguments (used where products underflow).
inline double log_binom_pmf(std::int64_t n, double p, std::int64_t k) {
    const double lc = std::lgamma(double(n + 1)) - std::lgamma(double(k + 1)) -
                      std::lgamma(double(n - k + 1));
    return lc + double(k) * std::log(p) + double(n - k) * std::log1p(-p);
}

/// Parameters of the even/odd binomial construction: two strings of n+1
/// probabilities (n odd) carrying alpha-scaled central-binomial mass on even
/// respectively odd indices. They are reflections of each other, with l1
/// distance exactly alpha but tiny per-entry gap, which is what makes the
/// pair a hard case for trace reconstruction.
struct ConstructionParams {
    std::int64_t n = 0;   // odd
    double alpha = 1.0;

    void validate() const {
        if (n < 1 || n % 2 == 0)
            throw std::invalid_argument("ConstructionParams: n must be odd and positive");
        if (!(alpha > 0.0))
            throw std::invalid_argument("ConstructionParams: alpha must be positive");
        if (alpha * binom_pmf(n, 0.5, (n - 1) / 2) >= 1.0)
            throw std::invalid_argument("ConstructionParams: alpha too large for this n");
    }

    /// Largest alpha admitted by the Fourier decay bound checks.
    double fourier_alpha_threshold() const {
        return std::sqrt(double(n)) /
               (4.0 * std::exp(2.0) * std::sqrt(2.0 * std::numbers::pi));
    }
};

struct EvenOddPair {
    ProbabilityString even;  // nonzero on even indices i in {0,...,n}
    ProbabilityString odd;   // nonzero on odd indices; odd[i] == even[n-i]
};

inline EvenOddPair build_even_odd_pair(const ConstructionParams& params) {
    params.validate();
    const std::int64_t n = params.n;
    std::vector<double> e(n + 1, 0.0), o(n + 1, 0.0);
    for (std::int64_t i = 0; i <= n; ++i) {
        const double v = params.alpha * binom_pmf(n, 0.5, i);
        if (v >= 1.0) throw std::invalid_argument("build_even_odd_pair: entry >= 1");
        if (i % 2 == 0) e[i] = v; else o[i] = v;
    }
    return {ProbabilityString(std::move(e)), ProbabilityString(std::move(o))};
}

/// (l1, linf) distance between the pair. Disjoint supports make l1 equal to
/// alpha exactly, while linf is alpha times the central binomial value.
inline std::pair<double, double> l1_linf_gap(const ConstructionParams& params) {
    const EvenOddPair pair = build_even_odd_pair(params);
    double l1 = 0.0, linf = 0.0;
    for (std::size_t i = 0; i < pair.even.size(); ++i) {
        const double d = std::fabs(pair.even[i] - pair.odd[i]);
        l1 += d;
        if (d > linf) linf = d;
    }
    return {l1, linf};
}

namespace detail {

// pmf that also tolerates a negative first argument (empty binomial -> 0).
inline double pmf_or_zero(std::int64_t n, double p, std::int64_t k) {
    if (n < 0) return 0.0;
    return binom_pmf(n, p, k);
}

// log pmf, -inf when out of range.
inline double log_pmf_or_neginf(std::int64_t n, double p, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) return -HUGE_VAL;
    if (p == 0.0) return k == 0 ? 0.0 : -HUGE_VAL;
    if (p == 1.0) return k == n ? 0.0 : -HUGE_VAL;
    return log_binom_pmf(n, p, k);
}

}  // namespace detail

/// Arguments of one alternating-sum evaluation: the nonzero middle-bit
/// locations (strictly increasing, identical parity, within {1,...,n/2}),
/// the two survivor counts for the flanks, and the deletion probability.
struct AlternatingSumArgs {
    std::vector<std::int64_t> ells;
    std::int64_t z_minus = 0;
    std::int64_t z_plus = 0;
    double delta = 0.0;

    void validate(std::int64_t n) const {
        if (z_minus < 0 || z_plus < 0)
            throw std::invalid_argument("AlternatingSumArgs: negative survivor count");
        if (!(delta >= 0.0 && delta <= 1.0))
            throw std::invalid_argument("AlternatingSumArgs: delta outside [0,1]");
        std::int64_t prev = 0;
        for (std::size_t j = 0; j < ells.size(); ++j) {
            if (ells[j] < 1 || ells[j] > n / 2)
                throw std::invalid_argument("AlternatingSumArgs: location out of range");
            if (j > 0 && ells[j] <= prev)
                throw std::invalid_argument("AlternatingSumArgs: locations must increase");
            if (j > 0 && (ells[j] - ells[0]) % 2 != 0)
                throw std::invalid_argument("AlternatingSumArgs: locations must share parity");
            prev = ells[j];
        }
    }
};

namespace detail {

// alpha*b/(1 - alpha*b) for b = bin(n, 1/2, r + floor(n/4) + ell); throws when
// the divisor is nonpositive.
inline double offset_weight(std::int64_t n, double alpha, std::int64_t r, std::int64_t ell) {
    const double b = pmf_or_zero(n, 0.5, r + n / 4 + ell);
    const double denom = 1.0 - alpha * b;
    if (denom <= 0.0)
        throw std::invalid_argument("offset weight: 1 - alpha*bin <= 0, alpha too large");
    return alpha * b / denom;
}

}  // namespace detail

/// | sum_r (-1)^r bin(n,1/2,r+n/2) bin(n/4+r,1-delta,z-) bin(n/4-r,1-delta,z+)
///   prod_j alpha*bin(n,1/2,r+n/4+ell_j) / (1 - alpha*bin(...)) |
/// evaluated by direct summation over every r with a nonzero leading factor.
/// n odd is expected; n/2 and n/4 are floor divisions throughout. Each term
/// is assembled in log space so deep tails do not underflow prematurely.
inline double alternating_sum(std::int64_t n, double alpha, const AlternatingSumArgs& args) {
    args.validate(n);
    double sum = 0.0, comp = 0.0;
    const std::int64_t half = n / 2, quarter = n / 4;
    for (std::int64_t r = -half; r <= n - half; ++r) {
        double lg = detail::log_pmf_or_neginf(n, 0.5, r + half);
        if (lg == -HUGE_VAL) continue;
        lg += detail::log_pmf_or_neginf(quarter + r, 1.0 - args.delta, args.z_minus);
        if (lg == -HUGE_VAL) continue;
        lg += detail::log_pmf_or_neginf(quarter - r, 1.0 - args.delta, args.z_plus);
        if (lg == -HUGE_VAL) continue;
        double term = std::exp(lg);
        for (std::int64_t ell : args.ells) term *= detail::offset_weight(n, alpha, r, ell);
        const double signed_term = (r % 2 == 0) ? term : -term;
        const double y = signed_term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::fabs(sum);
}

/// Closed-form envelope for alternating_sum (per-term bound as a function of
/// the survivor counts). Used as the cross-check the direct sums are tested
/// against.
inline double alternating_sum_bound(std::int64_t n, double delta, std::int64_t z_minus,
                                    std::int64_t z_plus) {
    const double pi = std::numbers::pi;
    const double base = (2.0 * pi) * (2.0 * pi) / ((1.0 - delta) * (1.0 - delta));
    const double m = std::max({std::exp(-delta / 20.0 * double(z_minus)) / (1.0 - delta),
                               std::exp(-delta / 20.0 * double(z_plus)) / (1.0 - delta),
                               std::exp(-double(n) / 150.0)});
    return double(n + 1) * (2.0 * pi - 2.0) * base * m +
           4.0 * base * std::exp(-std::sqrt(double(n)));
}

/// |f(xi)| = | sum_r e^{i xi r} prod_j alpha*bin(n,1/2,r+n/4+ell_j)/(1-...) |.
/// The sum runs over the full support of the product (every r with all
/// binomial factors nonzero), so the value is exact up to rounding. For
/// |xi| >= 2 and alpha at most the Fourier threshold the magnitude decays
/// like 2 e^{-sqrt(n)}, which is what the bound-check grids assert.
inline double fourier_magnitude(std::int64_t n, double alpha,
                                const std::vector<std::int64_t>& ells, double xi) {
    if (ells.empty()) throw std::invalid_argument("fourier_magnitude: needs k >= 1 locations");
    AlternatingSumArgs probe;
    probe.ells = ells;
    probe.validate(n);
    const std::int64_t quarter = n / 4;
    // all factors nonzero: 0 <= r + quarter + ell_j <= n for every j
    std::int64_t lo = -quarter - *std::min_element(ells.begin(), ells.end());
    std::int64_t hi = n - quarter - *std::max_element(ells.begin(), ells.end());
    double re = 0.0, im = 0.0, comp_re = 0.0, comp_im = 0.0;
    for (std::int64_t r = lo; r <= hi; ++r) {
        double term = 1.0;
        for (std::int64_t ell : ells) term *= detail::offset_weight(n, alpha, r, ell);
        const double tr = term * std::cos(xi * double(r));
        const double ti = term * std::sin(xi * double(r));
        double y = tr - comp_re, t = re + y;
        comp_re = (t - re) - y; re = t;
        y = ti - comp_im; t = im + y;
        comp_im = (t - im) - y; im = t;
    }
    return std::hypot(re, im);
}

/// Closed form of g(t) = int_{-pi}^{pi} cos(xi/2)^n e^{t xi} dxi for odd n:
///   2^{n+1} cosh(pi t) / ( C(n,(n-1)/2) * (n+1)/2 * prod_{j=0}^{(n-1)/2}
///   (1 + t^2/(j+1/2)^2) ).
/// Evaluated in log space; cosh(pi t) alone overflows near n ~ 1000.
inline double cos_power_mgf_closed(std::int64_t n, double t) {
    if (n < 1 || n % 2 == 0)
        throw std::invalid_argument("cos_power_mgf_closed: n must be odd");
    const double pi = std::numbers::pi;
    const double x = pi * std::fabs(t);
    const double log_cosh = x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
    double log_den = std::lgamma(double(n + 1)) - 2.0 * std::lgamma(double((n + 1) / 2) + 1.0);
    log_den += std::log(double(n + 1) / 2.0);
    for (std::int64_t j = 0; j <= (n - 1) / 2; ++j) {
        const double h = double(j) + 0.5;
        log_den += std::log1p(t * t / (h * h));
    }
    return std::exp(double(n + 1) * std::log(2.0) + log_cosh - log_den);
}

/// Same integral by adaptive Gauss-Kronrod quadrature; the pair forms the
/// identity test.
inline double cos_power_mgf_quadrature(std::int64_t n, double t, double rel_tol = 1e-9) {
    if (n < 1 || n % 2 == 0)
        throw std::invalid_argument("cos_power_mgf_quadrature: n must be odd");
    const double pi = std::numbers::pi;
    auto integrand = [n, t](double xi) {
        return std::pow(std::cos(xi / 2.0), double(n)) * std::exp(t * xi);
    };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, -pi, pi, 12, rel_tol);
}

/// sum_i sqrt(2^-n C(n,i)), each term via log-gamma. Stays below
/// (2 pi n)^(1/4) for every n.
inline double binomial_sqrt_mass(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("binomial_sqrt_mass: n must be >= 1");
    const double ln2 = std::log(2.0);
    double sum = 0.0, comp = 0.0;
    for (std::int64_t i = 0; i <= n; ++i) {
        const double lc = std::lgamma(double(n + 1)) - std::lgamma(double(i + 1)) -
                          std::lgamma(double(n - i + 1));
        const double term = std::exp(0.5 * (lc - double(n) * ln2));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

/// prod_i (sqrt(S(i)) + sqrt(1-S(i))) over the even-supported construction,
/// in log space. Equals the sum over all 2^(n+1) outcomes of the square root
/// of the outcome probability (tested by enumeration at small n), and is
/// bounded by exp(sqrt(alpha) (2 pi n)^(1/4)).
inline double construction_sqrt_mass(const ConstructionParams& params) {
    const EvenOddPair pair = build_even_odd_pair(params);
    double log_prod = 0.0;
    for (std::size_t i = 0; i < pair.even.size(); ++i) {
        const double s = pair.even[i];
        log_prod += std::log(std::sqrt(s) + std::sqrt(1.0 - s));
    }
    return std::exp(log_prod);
}

/// Diagnostic deletion budget d = 10 log(m) / log(1/delta) (natural logs).
/// Instrumented runs report the empirical max deletions per flank window
/// next to this value; the algorithm itself never uses it.
inline double deletion_budget(double m, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("deletion_budget: delta must lie in (0,1)");
    if (!(m > 1.0)) throw std::invalid_argument("deletion_budget: m must exceed 1");
    return 10.0 * std::log(m) / std::log(1.0 / delta);
}

}  // namespace gtr
