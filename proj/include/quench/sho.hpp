#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "quench/common.hpp"
#include "quench/protocol.hpp"
#include "quench/specfun.hpp"

// Simple harmonic oscillator under sudden changes of velocity and
// acceleration, in units hbar = m = omega = 1.  A basis is labelled by the
// frame (X, T, v, a): eigenfunctions of the potential that sits at X at time
// T and moves with velocity v and acceleration a, carrying the co-moving
// phase; the effective potential of an accelerating frame is displaced by
// -a/omega^2.
//
// Phase convention: with xi = x - X - v(t-T) - a(t-T)^2/2 and
// eps_n = (n + 1/2) - a^2/2, the basis functions are
//   psi_n = phi_n(xi + a) exp(i [ a (a tp^3/6 + xi tp + tp^2 v/2)
//                                 + v (tp v/2 + xi) - tp eps_n ]),  tp = t-T.
// The momentum phase is referenced to the frame anchor (e^{i v xi}), which
// makes every quench matrix independent of the anchor position X; the rebase
// relation below is exact under this convention for any X.
namespace quench::sho {

// Dimensionless quench parameters: kappa = dv, lambda = da, rho = a2 + a1,
// tau = omega * duration.
struct ShoKinematics {
    double kappa = 0.0;
    double lambda = 0.0;
    double rho = 0.0;
    double tau = 0.0;
};

inline ShoKinematics make_kinematics(double v1, double a1, double v2, double a2, double tau = 0.0) {
    return {v2 - v1, a2 - a1, a2 + a1, tau};
}

struct Frame {
    double X = 0.0;
    double T = 0.0;
    double v = 0.0;
    double a = 0.0;
};

struct ShoCoeffState {
    std::vector<complexd> coeffs;  // index l holds level l, starting at 0
    Frame frame;

    double tail_mass() const { return quench::tail_mass(coeffs); }
};

struct ChainOptions {
    double tail_threshold = 1e-3;
    bool allow_leaky = false;
};

namespace detail {

// Exact binomial coefficient, converted to long double after the integer
// arithmetic.  n <= 127 fits unsigned __int128; beyond that the multiplicative
// form in long double is accurate to ~1e-18 relative, far below use.
inline long double binomial(int n, int r) {
    if (r < 0 || r > n) return 0.0L;
    r = std::min(r, n - r);
    if (n <= 127) {
        unsigned __int128 c = 1;
        for (int i = 1; i <= r; ++i)
            c = c * static_cast<unsigned>(n - r + i) / static_cast<unsigned>(i);
        const auto hi = static_cast<unsigned long long>(c >> 64);
        const auto lo = static_cast<unsigned long long>(c & ~0ULL);
        return std::ldexp(static_cast<long double>(hi), 64) + static_cast<long double>(lo);
    }
    long double c = 1.0L;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
}

// Closed-form matrix element given L_0..L_max(k,j) at (kappa^2 + lambda^2)/2.
inline complexd q_closed_with_table(int k, int j, const ShoKinematics& kin,
                                    std::span<const double> laguerre_table) {
    const double z = 0.5 * (kin.kappa * kin.kappa + kin.lambda * kin.lambda);
    const complexd pref = std::exp(complexd(-0.5 * z, 0.5 * kin.kappa * kin.rho));
    if (k == j) return pref * laguerre_table[static_cast<std::size_t>(j)];

    const int d = std::abs(k - j);
    const int lo = std::min(k, j);
    const int hi = std::max(k, j);
    // The product over p of (l - min - p), divided by Gamma(d), is the exact
    // signed rational (-1)^{d-1} C(min - l + d - 1, d - 1); folding its sign
    // with the leading minus turns the prefactor into w^d below.
    const double inv_sqrt2 = 0.70710678118654752440;
    const complexd w = (k > j) ? complexd(kin.lambda, -kin.kappa) * inv_sqrt2
                               : complexd(-kin.lambda, -kin.kappa) * inv_sqrt2;
    long double sum = 0.0L;
    for (int l = 0; l <= lo; ++l)
        sum += binomial(lo - l + d - 1, d - 1) *
               static_cast<long double>(laguerre_table[static_cast<std::size_t>(l)]);
    const double ratio = specfun::sqrt_factorial_ratio(lo, hi);
    return int_pow(w, d) * pref * (ratio * static_cast<double>(sum));
}

}  // namespace detail

// Single-quench amplitude Q_kj(kappa, lambda, rho), closed form:
//   diagonal      e^{-(kappa^2 + lambda^2 - 2 i kappa rho)/4} L_j(z)
//   off-diagonal  w^{|k-j|} sqrt(min!/max!) e^{...} sum_l C(min-l+d-1, d-1) L_l(z)
// with z = (kappa^2 + lambda^2)/2 and w = (lambda - i kappa)/sqrt(2) for
// k > j, (-lambda - i kappa)/sqrt(2) for k < j.  |Q_kj| is symmetric in
// (k, j) and independent of rho; the complex value is symmetric only when
// lambda = 0 (the sign of the lambda shift is tied to which index is the
// post-quench basis).
inline complexd q_closed(int k, int j, const ShoKinematics& kin) {
    if (k < 0 || j < 0) throw std::invalid_argument("sho indices start at 0");
    const double z = 0.5 * (kin.kappa * kin.kappa + kin.lambda * kin.lambda);
    const auto table = specfun::detail::laguerre_all(std::max(k, j), z);
    return detail::q_closed_with_table(k, j, kin, table);
}

// Truncated N x N quench matrix; entry (k, j) maps old level j to new level k.
inline CMatrix q_matrix(int n_states, const ShoKinematics& kin) {
    if (n_states < 1) throw std::invalid_argument("q_matrix: n_states must be >= 1");
    const double z = 0.5 * (kin.kappa * kin.kappa + kin.lambda * kin.lambda);
    const auto table = specfun::detail::laguerre_all(n_states - 1, z);
    CMatrix q(static_cast<std::size_t>(n_states));
    for (int k = 0; k < n_states; ++k)
        for (int j = 0; j < n_states; ++j)
            q(static_cast<std::size_t>(k), static_cast<std::size_t>(j)) =
                detail::q_closed_with_table(k, j, kin, table);
    return q;
}

// Displacement-operator matrix element by the disentangled ladder expansion:
//   Q_mn(alpha, beta) = int psi_m(x + alpha) psi_n(x) e^{beta x} dx
//     = e^{(beta^2 - alpha^2)/4 - alpha beta / 2}
//       sum_{j,k} (alpha+beta)^j (beta-alpha)^k / (2^{(j+k)/2} j! k!) R_mj R_nk delta_{m-j, n-k}
// with R_nj = sqrt(n (n-1) ... (n-j+1)).  The Kronecker delta collapses the
// double sum to min(m, n) + 1 terms, accumulated here as a running product in
// extended precision.
inline complexd q_series(int m, int n, double alpha, complexd beta) {
    if (m < 0 || n < 0) throw std::invalid_argument("sho indices start at 0");
    using cld = std::complex<long double>;
    const cld b{beta.real(), beta.imag()};
    const long double al = alpha;
    const cld ap = al + b;
    const cld bm = b - al;
    const long double sqrt2 = 1.41421356237309504880L;

    const int diff = m - n;
    cld term = 1.0L;
    if (diff >= 0) {
        for (int i = 1; i <= diff; ++i)
            term *= ap * std::sqrt(static_cast<long double>(m - i + 1)) / (sqrt2 * i);
    } else {
        for (int i = 1; i <= -diff; ++i)
            term *= bm * std::sqrt(static_cast<long double>(n - i + 1)) / (sqrt2 * i);
    }
    cld sum = term;
    for (int j = std::max(0, diff) + 1, k = std::max(0, -diff) + 1; j <= m && k <= n; ++j, ++k) {
        term *= ap * bm *
                std::sqrt(static_cast<long double>(m - j + 1) * static_cast<long double>(n - k + 1)) /
                (2.0L * j * k);
        sum += term;
    }
    const cld out = std::exp((b * b - al * al) / 4.0L - al * b / 2.0L) * sum;
    return complexd(static_cast<double>(out.real()), static_cast<double>(out.imag()));
}

// tilde-reduction: int psi_m(x + a1) psi_n(x + a2) e^{beta x} dx
//   = e^{-beta a2} Q_mn(a1 - a2, beta).
inline complexd q_series_tilde(int m, int n, double a1, double a2, complexd beta) {
    return std::exp(-beta * a2) * q_series(m, n, a1 - a2, beta);
}

// The ladder-expansion route to the same Q_kj as q_closed: the defining
// overlap shifts the new basis by a2 and the old by a1 (frame sag a/omega^2)
// with phase e^{-i kappa y}.
inline complexd q_series_kin(int k, int j, const ShoKinematics& kin) {
    const double a2 = 0.5 * (kin.rho + kin.lambda);
    const double a1 = 0.5 * (kin.rho - kin.lambda);
    return q_series_tilde(k, j, a2, a1, complexd(0.0, -kin.kappa));
}

namespace detail {

// Rules are pure data keyed by order; memoized because the quadrature path
// is called in dense (k, j) sweeps that reuse a handful of orders.  Entries
// are never modified once inserted, so handing out references is safe.
inline const specfun::QuadratureRule& cached_rule(int order) {
    static std::map<int, specfun::QuadratureRule> cache;
    static std::mutex guard;
    const std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, specfun::gauss_hermite(order)).first;
    return it->second;
}

}  // namespace detail

// Gauss-Hermite evaluation of
//   Q_kj = e^{i kappa rho / 2 - lambda^2 / 4}
//          int h_k(x + lambda/2) h_j(x - lambda/2) e^{-i kappa x} e^{-x^2} dx
// with h_n orthonormal Hermite functions.  Evaluated at two orders as a
// settledness check.
inline complexd q_quadrature(int k, int j, const ShoKinematics& kin) {
    if (k < 0 || j < 0) throw std::invalid_argument("sho indices start at 0");
    if (k > 60 || j > 60)
        throw std::invalid_argument("q_quadrature is sized for indices up to 60");
    const auto eval = [&](int order) {
        const specfun::QuadratureRule& rule = detail::cached_rule(order);
        std::complex<long double> acc = 0.0L;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = rule.nodes[i];
            const double hk = specfun::detail::hermite_orthonormal(k, x + 0.5 * kin.lambda);
            const double hj = specfun::detail::hermite_orthonormal(j, x - 0.5 * kin.lambda);
            const long double ph = -static_cast<long double>(kin.kappa) * x;
            acc += static_cast<long double>(rule.weights[i] * hk * hj) *
                   std::complex<long double>(std::cos(static_cast<double>(ph)),
                                             std::sin(static_cast<double>(ph)));
        }
        const complexd pref =
            std::exp(complexd(-0.25 * kin.lambda * kin.lambda, 0.5 * kin.kappa * kin.rho));
        return pref * complexd(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    };
    const complexd coarse = eval(k + j + 80);
    const complexd fine = eval(k + j + 96);
    if (std::abs(coarse - fine) > 1e-10) throw ConvergenceWarning(std::abs(coarse - fine));
    return fine;
}

// Sudden change of the frame's (v, a) at the state's anchor time.  The state
// must already be rebased so that frame.T == at_t.
inline ShoCoeffState apply_quench(const ShoCoeffState& state, double new_v, double new_a,
                                  double at_t, const ChainOptions& opts = {}) {
    if (std::abs(state.frame.T - at_t) > 1e-9 * std::max(1.0, std::abs(at_t)))
        throw std::invalid_argument("apply_quench: rebase the state to the quench time first");
    ShoCoeffState out;
    out.frame = {state.frame.X, state.frame.T, new_v, new_a};
    const ShoKinematics kin = make_kinematics(state.frame.v, state.frame.a, new_v, new_a);
    if (kin.kappa == 0.0 && kin.lambda == 0.0) {
        out.coeffs = state.coeffs;
        return out;
    }
    const CMatrix q = q_matrix(static_cast<int>(state.coeffs.size()), kin);
    out.coeffs = q.apply(state.coeffs);
    const double tail = out.tail_mass();
    if (!opts.allow_leaky && tail > opts.tail_threshold)
        throw LeakyTruncation(tail, opts.tail_threshold);
    return out;
}

// Re-anchors the same physical state from (X, T) to time to_T >= T:
//   c'_k = e^{i g} sum_l Q_kl(kappa = -a dt) e^{-i (l + 1/2) dt} c_l,
//   g = a v dt^2/2 - a^2 dt/2 + a^2 dt^3/6 + v^2 dt/2.
// For a = 0 the mixing matrix is the identity and every mode just picks a
// phase; with acceleration the frame's velocity label stays v, so the
// accumulated velocity a dt shows up as a genuine population-changing kick.
inline ShoCoeffState rebase(const ShoCoeffState& state, double to_T,
                            const ChainOptions& opts = {}) {
    const double dt = to_T - state.frame.T;
    if (dt < 0.0) throw std::invalid_argument("rebase: target time precedes the frame anchor");
    const Frame& f = state.frame;
    ShoCoeffState out;
    out.frame = {f.X + f.v * dt + 0.5 * f.a * dt * dt, to_T, f.v, f.a};
    if (dt == 0.0) {
        out.coeffs = state.coeffs;
        return out;
    }
    std::vector<complexd> tmp(state.coeffs.size());
    for (std::size_t l = 0; l < tmp.size(); ++l)
        tmp[l] = state.coeffs[l] * std::polar(1.0, -(static_cast<double>(l) + 0.5) * dt);
    if (f.a != 0.0) {
        const ShoKinematics kin{-f.a * dt, 0.0, 0.0, 0.0};
        const CMatrix q = q_matrix(static_cast<int>(tmp.size()), kin);
        tmp = q.apply(tmp);
    }
    const double g = 0.5 * f.a * f.v * dt * dt - 0.5 * f.a * f.a * dt +
                     f.a * f.a * dt * dt * dt / 6.0 + 0.5 * f.v * f.v * dt;
    const complexd gp = std::polar(1.0, g);
    for (complexd& c : tmp) c *= gp;
    out.coeffs = std::move(tmp);
    const double tail = out.tail_mass();
    if (!opts.allow_leaky && tail > opts.tail_threshold)
        throw LeakyTruncation(tail, opts.tail_threshold);
    return out;
}

// Closed-form coefficients after one sudden change from eigenstate n0 of the
// static oscillator.  Writing w = (lambda - i kappa)/sqrt(2), W = lambda - i kappa,
// z = (kappa^2 + lambda^2)/2 and P = e^{-(kappa^2 + lambda^2 - 2 i kappa rho)/4}:
//   n0 = 0:  c_l = P w^l / sqrt(l!)
//   n0 = 1:  c_l = P 2^{-(l+1)/2} W^{l-1} (2l - 2z) / sqrt(l!)
//   n0 = 2:  c_l = P 2^{-(l+3)/2} W^{l-2} (4z^2 + 4l^2 - 4l(2z+1)) / sqrt(l!)
// (the l = 0, 1 cases of n0 = 1, 2 are the algebraic limits of the same
// expressions).  Equals column n0 of the q_closed matrix.
inline std::vector<complexd> one_change_coeffs(int n0, const ShoKinematics& kin, int n_states) {
    if (n0 < 0 || n0 > 2) throw std::invalid_argument("one_change_coeffs: n0 must be 0, 1, or 2");
    if (n_states < 1) throw std::invalid_argument("one_change_coeffs: n_states must be >= 1");
    const double z = 0.5 * (kin.kappa * kin.kappa + kin.lambda * kin.lambda);
    const complexd pref = std::exp(complexd(-0.5 * z, 0.5 * kin.kappa * kin.rho));
    const complexd w_half = complexd(kin.lambda, -kin.kappa) * 0.70710678118654752440;
    const complexd w_full = complexd(kin.lambda, -kin.kappa);
    const complexd w_conj = complexd(kin.lambda, kin.kappa);

    std::vector<complexd> c(static_cast<std::size_t>(n_states));
    std::vector<double> inv_sqrt_fact(c.size());
    inv_sqrt_fact[0] = 1.0;
    for (std::size_t l = 1; l < c.size(); ++l)
        inv_sqrt_fact[l] = inv_sqrt_fact[l - 1] / std::sqrt(static_cast<double>(l));

    for (std::size_t l = 0; l < c.size(); ++l) {
        const double ld = static_cast<double>(l);
        switch (n0) {
            case 0:
                c[l] = pref * int_pow(w_half, static_cast<int>(l)) * inv_sqrt_fact[l];
                break;
            case 1:
                if (l == 0)
                    c[l] = -pref * w_conj * 0.70710678118654752440;
                else
                    c[l] = pref * int_pow(w_full, static_cast<int>(l) - 1) * (2.0 * ld - 2.0 * z) *
                           std::pow(2.0, -0.5 * (ld + 1.0)) * inv_sqrt_fact[l];
                break;
            default: {
                const double poly = 4.0 * z * z + 4.0 * ld * ld - 4.0 * ld * (2.0 * z + 1.0);
                if (l == 0)
                    c[l] = pref * w_conj * w_conj * std::pow(2.0, -1.5);
                else if (l == 1)
                    c[l] = pref * w_conj * (z - 2.0) * 0.5;
                else
                    c[l] = pref * int_pow(w_full, static_cast<int>(l) - 2) * poly *
                           std::pow(2.0, -0.5 * (ld + 3.0)) * inv_sqrt_fact[l];
                break;
            }
        }
    }
    return c;
}

// Full two-change experiment: eigenstate n0 of the static oscillator, sudden
// (0,0) -> (v2, a2) at t = 0, coast for tau, sudden stop.  Composed from
// apply_quench and rebase, which reproduces the direct triple-sum formula
// including its global phase.
inline ShoCoeffState two_change_chain_from(int n0, const ShoKinematics& quench_on, double tau,
                                           int n_states, const ChainOptions& opts = {}) {
    if (n0 < 0 || n0 >= n_states) throw std::invalid_argument("two_change_chain: n0 out of range");
    if (tau < 0.0) throw std::invalid_argument("two_change_chain: tau must be >= 0");
    ShoCoeffState s;
    s.coeffs.assign(static_cast<std::size_t>(n_states), complexd{});
    s.coeffs[static_cast<std::size_t>(n0)] = 1.0;
    s.frame = {0.0, 0.0, 0.0, 0.0};
    s = apply_quench(s, quench_on.kappa, quench_on.lambda, 0.0, opts);
    s = rebase(s, tau, opts);
    s = apply_quench(s, 0.0, 0.0, tau, opts);
    return s;
}

inline ShoCoeffState two_change_chain(const ShoKinematics& quench_on, double tau, int n_states,
                                      const ChainOptions& opts = {}) {
    return two_change_chain_from(0, quench_on, tau, n_states, opts);
}

// P_{i->f} = min(i,f)!/max(i,f)! gamma^{|f-i|} e^{-gamma} [L_min^{|i-f|}(gamma)]^2
inline double ludwig_probability(int i, int f, double gamma) {
    if (i < 0 || f < 0) throw std::invalid_argument("ludwig_probability: indices start at 0");
    if (gamma < 0.0) throw std::invalid_argument("ludwig_probability: gamma must be >= 0");
    if (gamma == 0.0) return i == f ? 1.0 : 0.0;
    const int d = std::abs(i - f);
    const int lo = std::min(i, f);
    const int hi = std::max(i, f);
    const double lag = specfun::laguerre(lo, d, gamma);
    const double log_pref = std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0) + d * std::log(gamma) - gamma;
    return std::exp(log_pref) * lag * lag;
}

// gamma conventions for a uniformly accelerating oscillator, side by side:
// this toolkit's secular form and Dodonov's periodic form, which agree for
// omega t << 1.
inline double gamma_ours(double a, double t) { return 0.5 * a * a * t * t; }
inline double gamma_dodonov(double a, double t) {
    const double s = std::sin(0.5 * t);
    return 2.0 * a * a * s * s;
}

struct Expectations {
    double x_mean = 0.0;
    double x_var = 0.0;        // (Delta x)^2
    double energy_ratio = 0.0; // sum (2l+1) |c_l|^2, units E_0 = hbar omega / 2
};

// Ladder-operator moments of the state at time t.  The frame's potential
// minimum sits at X + v dt + a dt^2/2 - a/omega^2 (the accelerating frame
// sags by a/omega^2), and the oscillatory part rides on top:
//   <x>  = Delta + sqrt(1/2) * 2 Re(A e^{-i dt}),        A  = sum c*_{l-1} c_l sqrt(l)
//   <x^2>-<x>^2 = (B - Sx^2)/2,   B = 2 Re(D e^{-2 i dt}) + sum (2l+1)|c_l|^2,
//                                 D = sum c*_{l-2} c_l sqrt(l(l-1))
inline Expectations expectations(const ShoCoeffState& state, double t) {
    const double dt = t - state.frame.T;
    complexd a_sum = 0.0;
    complexd d_sum = 0.0;
    double occupancy = 0.0;
    const auto& c = state.coeffs;
    for (std::size_t l = 0; l < c.size(); ++l) {
        const double ld = static_cast<double>(l);
        occupancy += (2.0 * ld + 1.0) * std::norm(c[l]);
        if (l >= 1) a_sum += std::conj(c[l - 1]) * c[l] * std::sqrt(ld);
        if (l >= 2) d_sum += std::conj(c[l - 2]) * c[l] * std::sqrt(ld * (ld - 1.0));
    }
    const double sx = 2.0 * std::real(a_sum * std::polar(1.0, -dt));
    const double b = 2.0 * std::real(d_sum * std::polar(1.0, -2.0 * dt)) + occupancy;
    const Frame& f = state.frame;
    const double delta = f.X + f.v * dt + 0.5 * f.a * dt * dt - f.a;
    Expectations e;
    e.x_mean = delta + sx * 0.70710678118654752440;
    e.x_var = 0.5 * (b - sx * sx);
    e.energy_ratio = occupancy;
    return e;
}

// Drives an arbitrary (v, a) schedule: the initial state is eigenstate n0 of
// the first segment's frame; each boundary is a rebase followed by a quench.
inline ShoCoeffState evolve_protocol(const QuenchProtocol& p, int n0, int n_states,
                                     const ChainOptions& opts = {}) {
    validate(p);
    if (p.system != SystemKind::Sho)
        throw std::invalid_argument("evolve_protocol: protocol system must be \"sho\"");
    if (n0 < 0 || n0 >= n_states) throw std::invalid_argument("evolve_protocol: n0 out of range");
    ShoCoeffState s;
    s.coeffs.assign(static_cast<std::size_t>(n_states), complexd{});
    s.coeffs[static_cast<std::size_t>(n0)] = 1.0;
    s.frame = {p.x1, p.segments.front().t_start, p.segments.front().v, p.segments.front().a};
    for (std::size_t i = 0; i + 1 < p.segments.size(); ++i) {
        const QuenchSegment& next = p.segments[i + 1];
        s = rebase(s, next.t_start, opts);
        s = apply_quench(s, next.v, next.a, next.t_start, opts);
    }
    return s;
}

}  // namespace quench::sho
