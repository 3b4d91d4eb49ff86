#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "quench/sho.hpp"

// Classical comparator for the oscillator two-quench protocol: a particle of
// energy E1 = epsilon hbar omega / 2 in a static trap; at t = 0 the trap
// suddenly moves with (kappa, lambda), at tau it suddenly stops.  All closed
// forms below are exact solutions of the piecewise dynamics, in units
// hbar = m = omega = 1.
namespace quench::classical {

// Initial condition on the classical energy shell: dimensionless position y
// (|y| <= sqrt(epsilon)) and the sign of the initial velocity
// v1 = sign * sqrt(epsilon - y^2).
struct ClassicalInit {
    double epsilon = 1.0;
    double y = 0.0;
    int sign = +1;
};

// E3/E1 for one initial condition.  In the moving frame the particle obeys
// q(t) = -lambda + (y + lambda) cos t + (v1 - kappa) sin t; at the stop the
// lab velocity is (kappa + lambda tau) + q'(tau), and E3 = (q^2 + v^2)/2.
// Expanded:
//   E3/E1 = (1/eps) [ eps + 2(kappa^2 + lambda (y + lambda)) + 2 kappa lambda tau
//           + lambda^2 tau^2
//           - 2 (kappa^2 + lambda (y + lambda) + kappa lambda tau) cos tau
//           - 2 (y kappa + lambda (y + lambda) tau) sin tau
//           - 2 v1 (kappa - (kappa + lambda tau) cos tau + lambda sin tau) ]
inline double energy_ratio(const ClassicalInit& init, const sho::ShoKinematics& kin) {
    if (!(init.epsilon > 0.0)) throw std::invalid_argument("classical: epsilon must be > 0");
    const double shell = init.epsilon - init.y * init.y;
    // tolerate turning-point roundoff (y = sqrt(eps) squared can land 1 ulp out)
    if (shell < -1e-12 * init.epsilon)
        throw std::invalid_argument("classical: initial position outside the energy shell");
    if (init.sign != 1 && init.sign != -1)
        throw std::invalid_argument("classical: sign must be +1 or -1");
    const double k = kin.kappa, l = kin.lambda, tau = kin.tau, y = init.y;
    const double v1 = init.sign * std::sqrt(std::max(0.0, shell));
    const double ct = std::cos(tau), st = std::sin(tau);
    const double e3 = init.epsilon + 2.0 * (k * k + l * (y + l)) + 2.0 * k * l * tau +
                      l * l * tau * tau -
                      2.0 * (k * k + l * (y + l) + k * l * tau) * ct -
                      2.0 * (y * k + l * (y + l) * tau) * st -
                      2.0 * v1 * (k - (k + l * tau) * ct + l * st);
    return e3 / init.epsilon;
}

// E3/E1 averaged uniformly over y in [-sqrt(eps), sqrt(eps)] at fixed
// velocity sign; the sqrt(eps - y^2) average contributes pi sqrt(eps)/4.
inline double position_averaged_ratio(double epsilon, int sign, const sho::ShoKinematics& kin) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("classical: epsilon must be > 0");
    if (sign != 1 && sign != -1) throw std::invalid_argument("classical: sign must be +1 or -1");
    const double k = kin.kappa, l = kin.lambda, tau = kin.tau;
    const double ct = std::cos(tau), st = std::sin(tau);
    const double branch = -sign * specfun::pi * std::sqrt(epsilon) *
                          (k - (k + l * tau) * ct + l * st);
    const double bulk = 2.0 * epsilon + 4.0 * k * k + 4.0 * k * l * tau +
                        2.0 * l * l * (2.0 + tau * tau) -
                        (4.0 * l * l + 4.0 * k * (k + l * tau)) * ct -
                        4.0 * l * l * tau * st;
    return (bulk + branch) / (2.0 * epsilon);
}

// Both velocity branches averaged; the sqrt(eps) terms cancel exactly:
//   (1/eps) [ eps + 2 kappa^2 + 2 kappa lambda tau + lambda^2 (2 + tau^2)
//             - 2 (kappa^2 + lambda^2 + kappa lambda tau) cos tau
//             - 2 lambda^2 tau sin tau ]
inline double sign_averaged_ratio(double epsilon, const sho::ShoKinematics& kin) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("classical: epsilon must be > 0");
    const double k = kin.kappa, l = kin.lambda, tau = kin.tau;
    const double ct = std::cos(tau), st = std::sin(tau);
    return (epsilon + 2.0 * k * k + 2.0 * k * l * tau + l * l * (2.0 + tau * tau) -
            2.0 * (k * k + l * l + k * l * tau) * ct - 2.0 * l * l * tau * st) /
           epsilon;
}

// Monte Carlo estimate of the ensemble mean of E3/E1: y uniform on
// [-sqrt(eps), sqrt(eps)], velocity sign uniform.  Reproducible: mt19937_64
// seeded as given, uniforms built as (x >> 11) * 2^-53, samples consumed in a
// fixed order.
inline double monte_carlo_verify(double epsilon, const sho::ShoKinematics& kin,
                                 long n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("monte_carlo_verify: n_samples must be >= 1");
    std::mt19937_64 rng(seed);
    const double half_width = std::sqrt(epsilon);
    double mean = 0.0;
    for (long i = 0; i < n_samples; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const int sign = (rng() & 1u) ? +1 : -1;
        const ClassicalInit init{epsilon, (2.0 * u - 1.0) * half_width, sign};
        mean += (energy_ratio(init, kin) - mean) / static_cast<double>(i + 1);
    }
    return mean;
}

}  // namespace quench::classical
