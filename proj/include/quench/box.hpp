#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "quench/common.hpp"
#include "quench/protocol.hpp"
#include "quench/scan.hpp"
#include "quench/specfun.hpp"

// Infinite square well under sudden velocity changes, in units
// hbar = m = L = 1.  Basis convention: well centered at the origin,
//   psi_k(y) = sqrt(2) sin(k pi (y + 1/2)),  y in [-1/2, 1/2],  k = 1, 2, ...
// i.e. cos(k pi y) for odd k and sin(k pi y) for even k up to the sign
// s_k = +1 for k mod 4 in {0, 1} and -1 for k mod 4 in {2, 3}.  This is the
// convention under which the closed-form quench matrix below agrees with the
// directly integrated overlaps entry for entry (not just in magnitude).
namespace quench::box {

using specfun::pi;

// Ground-state energy E_1 = pi^2/2 and the revival time tau0 = 4/pi
// (E_k tau0 = 2 pi k^2, so every free phase returns to 1).
inline constexpr double ground_energy = pi * pi / 2.0;
inline constexpr double tau0 = 4.0 / pi;

struct BoxBasisSpec {
    int n_states = 200;  // truncation N
    double delta = 0.0;  // dimensionless velocity change, delta = dv / 2
};

// Coefficients over the moving basis anchored at time t_anchor with frame
// velocity v_frame.
struct BoxCoeffState {
    std::vector<complexd> coeffs;  // index 0 holds k = 1
    double t_anchor = 0.0;
    double v_frame = 0.0;

    double tail_mass() const { return quench::tail_mass(coeffs); }
};

namespace detail {

inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

inline double basis_sign(int k) { return (k % 4 == 0 || k % 4 == 1) ? 1.0 : -1.0; }

// int cos(a pi y) e^{-2 i delta y} dy over [-1/2, 1/2], even part.
inline double even_overlap(int a, double delta) {
    return 0.5 * (sinc(0.5 * a * pi - delta) + sinc(0.5 * a * pi + delta));
}

// int sin(a pi y) e^{-2 i delta y} dy over [-1/2, 1/2]; pure imaginary, this
// returns the coefficient of i.
inline double odd_overlap(int a, double delta) {
    return -0.5 * (sinc(0.5 * a * pi - delta) - sinc(0.5 * a * pi + delta));
}

}  // namespace detail

// Overlap integral int psi_k(y) psi_l(y) e^{-2 i delta y} dy evaluated from
// its closed-form antiderivatives (a sum of four sinc terms after
// product-to-sum).  Every term is regular, so this path is the reference at
// the removable singularities of the rational closed form below, and the
// independent cross-check everywhere else.
inline complexd q_element_quadrature(int k, int l, double delta) {
    if (k < 1 || l < 1) throw std::invalid_argument("box quench matrix indices start at 1");
    const double s = detail::basis_sign(k) * detail::basis_sign(l);
    const bool k_odd = (k % 2 == 1);
    const bool l_odd = (l % 2 == 1);
    if (k_odd && l_odd)
        return s * (detail::even_overlap(k - l, delta) + detail::even_overlap(k + l, delta));
    if (!k_odd && !l_odd)
        return s * (detail::even_overlap(k - l, delta) - detail::even_overlap(k + l, delta));
    if (k_odd)  // cos x sin
        return complexd(0.0, s * (detail::odd_overlap(k + l, delta) - detail::odd_overlap(k - l, delta)));
    return complexd(0.0, s * (detail::odd_overlap(k + l, delta) + detail::odd_overlap(k - l, delta)));
}

// Single-quench transition amplitude Q_kl(delta):
//   k == l :  pi^2 k^2 sin(delta) / (pi^2 delta k^2 - delta^3)
//   k != l :  i^{k+l} 16 pi^2 delta k l sin(pi (k+l)/2 - delta)
//             / (16 delta^4 - 8 pi^2 delta^2 (k^2+l^2) + pi^4 (k^2-l^2)^2)
// The denominators vanish at delta = pi k and delta = pi (k +- l) / 2, where
// the underlying overlap is regular; within 1e-6 of those zeros (relative to
// the dominant scale) the sinc-form evaluation takes over.
inline complexd q_element(int k, int l, double delta) {
    if (k < 1 || l < 1) throw std::invalid_argument("box quench matrix indices start at 1");
    const double d2 = delta * delta;
    if (k == l) {
        const double k2p2 = pi * pi * k * k;
        if (std::abs(delta) < 1e-6 || std::abs(k2p2 - d2) < 1e-6 * k2p2)
            return q_element_quadrature(k, l, delta);
        return complexd(k2p2 * std::sin(delta) / (delta * (k2p2 - d2)), 0.0);
    }
    const double sum2 = double(k) * k + double(l) * l;
    const double dif2 = double(k) * k - double(l) * l;
    const double denom = 16.0 * d2 * d2 - 8.0 * pi * pi * d2 * sum2 + pi * pi * pi * pi * dif2 * dif2;
    const double scale = pi * pi * pi * pi * sum2 * sum2;
    if (std::abs(denom) < 1e-6 * scale) return q_element_quadrature(k, l, delta);
    const double num = 16.0 * pi * pi * delta * k * l * std::sin(0.5 * pi * (k + l) - delta);
    return unit_imag_pow(k + l) * (num / denom);
}

// N x N quench matrix; rows and columns are k, l = 1..N stored 0-based.
inline CMatrix q_matrix(const BoxBasisSpec& spec) {
    if (spec.n_states < 1) throw std::invalid_argument("box basis needs n_states >= 1");
    const std::size_t n = static_cast<std::size_t>(spec.n_states);
    CMatrix q(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            q(i, j) = q_element(static_cast<int>(i) + 1, static_cast<int>(j) + 1, spec.delta);
    return q;
}

// Advances the basis phases by dt at fixed anchor: c_l picks up
// e^{-i E_l dt} e^{-i v^2 dt / 2} with E_l = pi^2 l^2 / 2.  Pure phases, so
// the norm is untouched.
inline BoxCoeffState free_phase_evolve(const BoxCoeffState& state, double dt) {
    if (dt < 0.0) throw std::invalid_argument("free_phase_evolve: dt must be >= 0");
    BoxCoeffState out = state;
    out.t_anchor += dt;
    const double vphase = -0.5 * state.v_frame * state.v_frame * dt;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
        const double l = static_cast<double>(i) + 1.0;
        out.coeffs[i] *= std::polar(1.0, -ground_energy * l * l * dt + vphase);
    }
    return out;
}

// Ground state -> move with velocity v = 2 delta for t2 -> stop:
//   c_k = sum_l Q_kl(-delta) Q_l1(+delta) e^{i (2 delta^2 t2 - pi^2 l^2 t2 / 2)}.
// The global e^{2 i delta^2 t2} is the frame phase accumulated between the
// changes; it cancels in probabilities but is kept so coefficient vectors are
// comparable across implementations.
inline std::vector<complexd> two_change_amplitudes(double delta, double t2, int n_states) {
    if (t2 < 0.0) throw std::invalid_argument("two_change_amplitudes: t2 must be >= 0");
    const std::size_t n = static_cast<std::size_t>(n_states);
    const CMatrix q_on = q_matrix({n_states, delta});
    const CMatrix q_off = q_matrix({n_states, -delta});
    std::vector<complexd> mid(n);
    for (std::size_t l = 0; l < n; ++l) {
        const double lq = static_cast<double>(l) + 1.0;
        mid[l] = q_on(l, 0) * std::polar(1.0, 2.0 * delta * delta * t2 - ground_energy * lq * lq * t2);
    }
    return q_off.apply(mid);
}

// Ground state -> +v for a leg of duration t -> -v for another leg t -> stop
// (so the final center returns to the start):
//   c_k = e^{4 i delta^2 t} sum Q_k,k2(+delta) D_t Q_k2,k1(-2 delta) D_t Q_k1,1(+delta)
// with D_t = diag(e^{-i pi^2 k^2 t / 2}).
inline std::vector<complexd> three_change_amplitudes(double delta, double t_leg, int n_states) {
    if (t_leg < 0.0) throw std::invalid_argument("three_change_amplitudes: t must be >= 0");
    const std::size_t n = static_cast<std::size_t>(n_states);
    const CMatrix q_on = q_matrix({n_states, delta});        // 0 -> +v and -v -> 0
    const CMatrix q_flip = q_matrix({n_states, -2.0 * delta});  // +v -> -v
    std::vector<complexd> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double kq = static_cast<double>(k) + 1.0;
        c[k] = q_on(k, 0) * std::polar(1.0, -ground_energy * kq * kq * t_leg);
    }
    c = q_flip.apply(c);
    for (std::size_t k = 0; k < n; ++k) {
        const double kq = static_cast<double>(k) + 1.0;
        c[k] *= std::polar(1.0, -ground_energy * kq * kq * t_leg);
    }
    c = q_on.apply(c);
    const complexd global = std::polar(1.0, 4.0 * delta * delta * t_leg);
    for (complexd& x : c) x *= global;
    return c;
}

struct EnergyExpectation {
    double energy_ratio = 0.0;  // <H> / E_1 = sum |c_k|^2 k^2
    double tail_mass = 0.0;
};

inline EnergyExpectation energy_expectation(std::span<const complexd> coeffs) {
    EnergyExpectation r;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double p = std::norm(coeffs[i]);
        const double k = static_cast<double>(i) + 1.0;
        r.energy_ratio += p * k * k;
        norm2 += p;
    }
    r.tail_mass = norm2 < 1.0 ? 1.0 - norm2 : 0.0;
    return r;
}

struct ClassicalEnergies {
    double e_cl = 1.0;    // stop-at-random-time ensemble average, units E_1
    double e_plus = 1.0;  // average of the maximal-speed branches
};

// Two changes:  E_cl/E_1 = 1 + 8 delta^2/pi^2,   E+/E_1 = 1 + 16 delta^2/pi^2.
// Three changes: 1 + 24 delta^2/pi^2 and 1 + 64 delta^2/pi^2.
inline ClassicalEnergies classical_energies(double delta, int n_changes) {
    const double d2p2 = delta * delta / (pi * pi);
    switch (n_changes) {
        case 2: return {1.0 + 8.0 * d2p2, 1.0 + 16.0 * d2p2};
        case 3: return {1.0 + 24.0 * d2p2, 1.0 + 64.0 * d2p2};
        default: throw std::invalid_argument("classical_energies: n_changes must be 2 or 3");
    }
}

struct ChainOptions {
    double tail_threshold = 1e-3;
    bool allow_leaky = false;
};

struct ScanOptions {
    int k_max = 5;  // how many P_{1->k} columns to record
    double tail_threshold = 1e-3;
    bool allow_leaky = false;
};

// Transition probabilities and energy along a grid of stop times, for the
// two-change (0 -> v -> 0) or three-change (0 -> v -> -v -> 0, equal legs)
// protocol from the ground state.  For three changes the grid value is the
// leg duration.  Columns: t_over_tau0, P_1_1..P_1_kmax, energy_ratio.
// Rows follow the grid order; the quench matrices are built once.
inline ScanResult revival_scan(double delta, std::span<const double> t_grid, int n_states,
                               int n_changes, const ScanOptions& opts = {}) {
    if (n_changes != 2 && n_changes != 3)
        throw std::invalid_argument("revival_scan: n_changes must be 2 or 3");
    for (double t : t_grid)
        if (!(t >= 0.0)) throw std::invalid_argument("revival_scan: grid times must be >= 0");
    const std::size_t n = static_cast<std::size_t>(n_states);
    const int k_max = std::min(opts.k_max, n_states);

    const CMatrix q_on = q_matrix({n_states, delta});
    const CMatrix q_second =
        n_changes == 2 ? q_matrix({n_states, -delta}) : q_matrix({n_states, -2.0 * delta});

    std::vector<double> col_t;
    std::vector<std::vector<double>> col_p(static_cast<std::size_t>(k_max));
    std::vector<double> col_energy;
    double max_tail = 0.0;

    std::vector<complexd> c(n);
    for (double t : t_grid) {
        for (std::size_t l = 0; l < n; ++l) {
            const double lq = static_cast<double>(l) + 1.0;
            c[l] = q_on(l, 0) * std::polar(1.0, -ground_energy * lq * lq * t);
        }
        c = q_second.apply(c);
        if (n_changes == 3) {
            for (std::size_t l = 0; l < n; ++l) {
                const double lq = static_cast<double>(l) + 1.0;
                c[l] *= std::polar(1.0, -ground_energy * lq * lq * t);
            }
            c = q_on.apply(c);
        }
        // global frame phases drop out of every recorded quantity

        const EnergyExpectation e = energy_expectation(c);
        max_tail = std::max(max_tail, e.tail_mass);
        if (!opts.allow_leaky && e.tail_mass > opts.tail_threshold)
            throw LeakyTruncation(e.tail_mass, opts.tail_threshold);
        col_t.push_back(t / tau0);
        for (int k = 0; k < k_max; ++k)
            col_p[static_cast<std::size_t>(k)].push_back(std::norm(c[static_cast<std::size_t>(k)]));
        col_energy.push_back(e.energy_ratio);
    }

    ScanResult r;
    r.add_meta("delta", quench::detail::format_double(delta));
    r.add_meta("n_changes", std::to_string(n_changes));
    r.add_meta("n_states", std::to_string(n_states));
    r.add_meta("tail_mass", quench::detail::format_double(max_tail));
    r.add_real("t_over_tau0", std::move(col_t));
    for (int k = 0; k < k_max; ++k)
        r.add_real("P_1_" + std::to_string(k + 1), std::move(col_p[static_cast<std::size_t>(k)]));
    r.add_real("energy_ratio", std::move(col_energy));
    return r;
}

// Drives a velocity-only protocol through the coefficient chain: per segment,
// free phases for the dwell time, the anchor-shift phase e^{i v^2 dt} from
// re-centering the basis at the next quench position, then the quench matrix
// for dv.  Starts from eigenstate k = initial_k of the first frame.
inline BoxCoeffState evolve_protocol(const QuenchProtocol& p, int n_states,
                                     int initial_k = 1, const ChainOptions& opts = {}) {
    validate(p);
    for (std::size_t i = 0; i < p.segments.size(); ++i)
        if (p.segments[i].a != 0.0)
            throw ValidationError(ValidationIssue::UnsupportedAcceleration, static_cast<int>(i),
                                  "the accelerated box is not supported; segment " +
                                      std::to_string(i) + " has a != 0");
    if (initial_k < 1 || initial_k > n_states)
        throw std::invalid_argument("evolve_protocol: initial_k out of range");

    BoxCoeffState state;
    state.coeffs.assign(static_cast<std::size_t>(n_states), complexd{});
    state.coeffs[static_cast<std::size_t>(initial_k) - 1] = 1.0;
    state.t_anchor = p.segments.front().t_start;
    state.v_frame = p.segments.front().v;

    for (std::size_t i = 0; i + 1 < p.segments.size(); ++i) {
        const double dt = p.segments[i + 1].t_start - p.segments[i].t_start;
        state = free_phase_evolve(state, dt);
        const complexd anchor = std::polar(1.0, state.v_frame * state.v_frame * dt);
        for (complexd& c : state.coeffs) c *= anchor;
        const double dv = p.segments[i + 1].v - p.segments[i].v;
        if (dv != 0.0) {
            const CMatrix q = q_matrix({n_states, 0.5 * dv});
            state.coeffs = q.apply(state.coeffs);
        }
        state.v_frame = p.segments[i + 1].v;
        const double tail = state.tail_mass();
        if (!opts.allow_leaky && tail > opts.tail_threshold)
            throw LeakyTruncation(tail, opts.tail_threshold);
    }
    return state;
}

}  // namespace quench::box
