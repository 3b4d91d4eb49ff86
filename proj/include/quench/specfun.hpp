#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace quench::specfun {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double quarter_root_pi_inv = 0.7511255444649425;  // pi^{-1/4}

// Physicists' Hermite polynomial via H_{n+1} = 2x H_n - 2n H_{n-1}.
// Raw H_n overflows for large n at large |x| (H_150(6) ~ 1e250); callers that
// need high orders should go through ho_eigenfunction, which keeps the
// Gaussian weight inside the recurrence.
inline double hermite_phys(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite_phys: n must be >= 0");
    if (n == 0) return 1.0;
    double hm = 1.0;
    double h = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double hp = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = hp;
    }
    return h;
}

namespace detail {

// Cached recurrence coefficients sqrt(2/(k+1)) and sqrt(k/(k+1)); the hot
// loops below run them hundreds of millions of times.
inline constexpr int rec_table_size = 640;

inline double rec_a(int k) {
    static const std::vector<double> table = [] {
        std::vector<double> t(rec_table_size);
        for (int i = 0; i < rec_table_size; ++i) t[(std::size_t)i] = std::sqrt(2.0 / (i + 1));
        return t;
    }();
    return k < rec_table_size ? table[(std::size_t)k] : std::sqrt(2.0 / (k + 1));
}

inline double rec_b(int k) {
    static const std::vector<double> table = [] {
        std::vector<double> t(rec_table_size);
        for (int i = 0; i < rec_table_size; ++i)
            t[(std::size_t)i] = std::sqrt(double(i) / (i + 1));
        return t;
    }();
    return k < rec_table_size ? table[(std::size_t)k] : std::sqrt(double(k) / (k + 1));
}

// H_n(x) / sqrt(2^n n! sqrt(pi)): orthonormal against the weight e^{-x^2}.
// Same normalized recurrence as ho_eigenfunction but without the Gaussian,
// which is the natural integrand unit for Gauss-Hermite sums.
inline double hermite_orthonormal(int n, double x) {
    double pm = 0.0;
    double p = quarter_root_pi_inv;
    for (int k = 0; k < n; ++k) {
        const double pp = x * rec_a(k) * p - rec_b(k) * pm;
        pm = p;
        p = pp;
    }
    return p;
}

// All of L_0..L_nmax at one point (ordinary Laguerre), one upward pass.
inline std::vector<double> laguerre_all(int nmax, double x) {
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
    out[0] = 1.0;
    if (nmax >= 1) out[1] = 1.0 - x;
    for (int k = 1; k < nmax; ++k)
        out[k + 1] = ((2.0 * k + 1.0 - x) * out[k] - k * out[k - 1]) / (k + 1);
    return out;
}

}  // namespace detail

// Normalized oscillator eigenfunction
//   psi_n(x) = pi^{-1/4} (2^n n!)^{-1/2} H_n(x) e^{-x^2/2},
// evaluated with the weight carried inside the recurrence
//   psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1},
// so every intermediate stays of order one and the result is finite well
// past n = 200.
inline double ho_eigenfunction(int n, double x) {
    if (n < 0) throw std::invalid_argument("ho_eigenfunction: n must be >= 0");
    double pm = 0.0;
    double p = quarter_root_pi_inv * std::exp(-0.5 * x * x);
    for (int k = 0; k < n; ++k) {
        const double pp = x * detail::rec_a(k) * p - detail::rec_b(k) * pm;
        pm = p;
        p = pp;
    }
    return p;
}

// Associated Laguerre L_n^{(alpha)}(x); alpha = 0 gives the ordinary L_n.
inline double laguerre(int n, int alpha, double x) {
    if (n < 0 || alpha < 0) throw std::invalid_argument("laguerre: n and alpha must be >= 0");
    if (n == 0) return 1.0;
    double lm = 1.0;
    double l = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double lp = ((2.0 * k + 1.0 + alpha - x) * l - (k + alpha) * lm) / (k + 1);
        lm = l;
        l = lp;
    }
    return l;
}

// sqrt(small!/large!) as a long-double product of 1/sqrt(i), i in
// (small, large].  Stays well inside 1e-14 relative error up to large ~ 170
// and does not underflow until far beyond that.
inline double sqrt_factorial_ratio(int small, int large) {
    if (small < 0 || large < small)
        throw std::invalid_argument("sqrt_factorial_ratio: need 0 <= small <= large");
    long double acc = 1.0L;
    for (int i = small + 1; i <= large; ++i) acc /= std::sqrt(static_cast<long double>(i));
    return static_cast<double>(acc);
}

struct QuadratureRule {
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // positive, for the weight e^{-x^2}
};

namespace detail {

// h_n(x) and h_{n-1}(x) in one pass of the orthonormal recurrence.
struct HermitePair {
    double value;  // h_n
    double below;  // h_{n-1}
};

inline HermitePair hermite_orthonormal_pair(int n, double x) {
    double p1 = quarter_root_pi_inv;
    double p2 = 0.0;
    for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = x * rec_a(j) * p2 - rec_b(j) * p3;
    }
    return {p1, p2};
}

}  // namespace detail

// Gauss-Hermite rule: exact for polynomial integrands of degree <= 2*order-1
// against e^{-x^2}.  Roots of h_n are bracketed by a sign scan at a step
// below the minimal root spacing pi / sqrt(2n+1), then polished by Newton
// with a bisection fallback whenever an iterate leaves its bracket; this
// stays stable at high orders where chained asymptotic guesses derail.
// Weights are the usual 2 / (sqrt(2n) h_{n-1}(x_i))^2.
inline QuadratureRule gauss_hermite(int order) {
    if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    const int n = order;
    const int n_positive = n / 2;

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    const auto push_pair = [&](int i, double root, double weight) {
        // i-th positive root in ascending order; mirror to the negative side
        const int hi = n - n_positive + i;
        const int lo = n_positive - 1 - i;
        rule.nodes[hi] = root;
        rule.weights[hi] = weight;
        rule.nodes[lo] = -root;
        rule.weights[lo] = weight;
    };
    if (n % 2 == 1) {
        const double pp = std::sqrt(2.0 * n) * detail::hermite_orthonormal_pair(n, 0.0).below;
        rule.nodes[n / 2] = 0.0;
        rule.weights[n / 2] = 2.0 / (pp * pp);
    }
    if (n_positive == 0) return rule;

    // consecutive roots are separated by at least pi / sqrt(2n+1), so this
    // step can hold at most one root per scan interval
    const double edge = std::sqrt(2.0 * n + 1.0);
    const double step = 0.8 * pi / edge;
    int found = 0;
    double x_prev = (n % 2 == 1) ? 0.5 * step : 0.0;
    double f_prev = detail::hermite_orthonormal_pair(n, x_prev).value;
    for (double x = x_prev + step; found < n_positive; x += step) {
        const double f = detail::hermite_orthonormal_pair(n, x).value;
        if ((f_prev < 0.0) != (f < 0.0)) {
            double lo = x_prev, hi = x, flo = f_prev;
            double z = 0.5 * (lo + hi);
            double pp = 0.0;
            for (int it = 0; it < 80; ++it) {
                const auto [fz, fz_below] = detail::hermite_orthonormal_pair(n, z);
                pp = std::sqrt(2.0 * n) * fz_below;
                if ((flo < 0.0) != (fz < 0.0))
                    hi = z;
                else {
                    lo = z;
                    flo = fz;
                }
                const double z_newton = z - fz / pp;
                const double z_next =
                    (z_newton > lo && z_newton < hi) ? z_newton : 0.5 * (lo + hi);
                if (std::abs(z_next - z) <= 1e-15 * std::max(1.0, std::abs(z))) {
                    z = z_next;
                    break;
                }
                z = z_next;
            }
            push_pair(found, z, 2.0 / (pp * pp));
            ++found;
        }
        x_prev = x;
        f_prev = f;
        if (x > edge + 1.0 && found < n_positive)
            throw std::runtime_error("gauss_hermite: root scan failed");
    }
    return rule;
}

}  // namespace quench::specfun
