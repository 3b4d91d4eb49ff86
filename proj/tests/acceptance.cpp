// Acceptance suite: every release criterion in one binary, one PASS/FAIL line
// each, exit code = number of failures.  Tolerances are pinned here, not
// configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "quench/box.hpp"
#include "quench/classical.hpp"
#include "quench/commands.hpp"
#include "quench/sho.hpp"

using namespace quench;
using sho::ShoKinematics;

namespace {

constexpr double pi = specfun::pi;

int failures = 0;

void criterion(int id, const std::string& label, bool ok, const std::string& detail = "") {
    std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id, label.c_str(),
                detail.empty() ? "" : " | ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void info(const std::string& line) {
    std::printf("info           : %s\n", line.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double p11(const std::vector<complexd>& c) { return std::norm(c[0]); }

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---- criterion 9 helper ------------------------------------------------

double max_energy_deviation(const ShoKinematics& kick, int n_states, int n_tau, double tau_max) {
    double worst = 0.0;
    for (int i = 0; i < n_tau; ++i) {
        const double tau = tau_max * i / (n_tau - 1);
        const auto s = sho::two_change_chain(kick, tau, n_states, {1e-3, true});
        const double quantum = sho::expectations(s, tau).energy_ratio;
        ShoKinematics kin = kick;
        kin.tau = tau;
        worst = std::max(worst, std::abs(quantum - classical::sign_averaged_ratio(1.0, kin)));
    }
    return worst;
}

// ---- criterion 10 helper -----------------------------------------------

double y_average_numeric(double epsilon, int sign, const ShoKinematics& kin) {
    const int n = 4000;
    const double h = pi / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double theta = -0.5 * pi + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double y = std::sqrt(epsilon) * std::sin(theta);
        acc += w * classical::energy_ratio({epsilon, y, sign}, kin) * std::cos(theta);
    }
    return acc * (h / 3.0) / 2.0;
}

}  // namespace

int main() {
    // 1. two-change revival at t2 = tau0, independent of delta
    {
        bool ok = true;
        std::string detail;
        for (double delta : {2.0, 8.0, 20.0}) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto c = box::two_change_amplitudes(delta, box::tau0, 200);
            const double secs = seconds_since(t0);
            const double p = p11(c);
            ok = ok && p >= 0.999 && secs < 10.0;
            detail += fmt("d=%g: P=%.6f (%.2fs)  ", delta, p, secs);
        }
        criterion(1, "box two-change revival at tau0 (N=200)", ok, detail);
    }

    // 2. half-probability point for a strong kick
    {
        const double p = p11(box::two_change_amplitudes(20.0, box::tau0 / 4.0, 200));
        criterion(2, "box P_1->1(tau0/4) ~ 1/2 at delta=20", p >= 0.45 && p <= 0.55,
                  fmt("P=%.4f", p));
    }

    // 3. time-averaged energy vs the classical ensemble value
    {
        bool ok = true;
        std::string detail;
        for (double delta : {5.0, 20.0}) {
            const CMatrix q_on = box::q_matrix({200, delta});
            const CMatrix q_off = box::q_matrix({200, -delta});
            const int n_t = 256;
            double mean = 0.0, peak = 0.0;
            std::vector<complexd> c(200);
            for (int i = 0; i < n_t; ++i) {
                const double t = (i + 0.5) / n_t * box::tau0;
                for (std::size_t l = 0; l < 200; ++l) {
                    const double lq = static_cast<double>(l) + 1.0;
                    c[l] = q_on(l, 0) * std::polar(1.0, -box::ground_energy * lq * lq * t);
                }
                c = q_off.apply(c);
                const double e = box::energy_expectation(c).energy_ratio;
                mean += e / n_t;
                peak = std::max(peak, e);
            }
            const auto cl = box::classical_energies(delta, 2);
            const bool here = std::abs(mean - cl.e_cl) <= 0.05 * cl.e_cl && peak <= 1.05 * cl.e_plus;
            ok = ok && here;
            detail += fmt("d=%g: <E>=%.3f vs %.3f, max=%.3f<=%.3f  ", delta, mean, cl.e_cl, peak,
                          1.05 * cl.e_plus);
        }
        criterion(3, "box energy: mean within 5% of E_cl, max below 1.05 E_cl^+", ok, detail);
    }

    // 4. three-change revival and the 1/4 plateau
    {
        bool ok = true;
        std::string detail;
        for (double delta : {2.0, 8.0, 20.0}) {
            const double p = p11(box::three_change_amplitudes(delta, box::tau0, 200));
            ok = ok && p >= 0.999;
            detail += fmt("d=%g: P(leg=tau0)=%.6f  ", delta, p);
        }
        const double quarter = p11(box::three_change_amplitudes(20.0, box::tau0 / 4.0, 200));
        ok = ok && std::abs(quarter - 0.25) <= 0.05;
        detail += fmt("d=20: P(leg=tau0/4)=%.4f", quarter);
        criterion(4, "box three-change revival and 1/4 plateau", ok, detail);
        const double elapsed_tau0 = p11(box::three_change_amplitudes(20.0, box::tau0 / 2.0, 200));
        info(fmt("three-change revival convention: the revival sits at leg duration tau0 "
                 "(elapsed 2 tau0); at elapsed tau0 (leg tau0/2) P_1->1 = %.2e for delta=20",
                 elapsed_tau0));
    }

    // 5. three-path amplitude equivalence
    {
        const auto t0 = std::chrono::steady_clock::now();
        double worst_series = 0.0, worst_quad = 0.0;
        for (int k = 0; k <= 20; ++k)
            for (int j = 0; j <= 20; ++j)
                for (double kappa : {-3.0, -1.0, 0.0, 0.5, 2.0})
                    for (double lambda : {-3.0, -1.0, 0.0, 0.5, 2.0})
                        for (double rho : {0.0, 1.0}) {
                            const ShoKinematics kin{kappa, lambda, rho, 0.0};
                            const complexd a = sho::q_closed(k, j, kin);
                            worst_series =
                                std::max(worst_series, std::abs(a - sho::q_series_kin(k, j, kin)));
                            worst_quad =
                                std::max(worst_quad, std::abs(a - sho::q_quadrature(k, j, kin)));
                        }
        const double secs = seconds_since(t0);
        criterion(5, "oscillator amplitudes: closed = series = quadrature (k,j<=20)",
                  worst_series <= 1e-10 && worst_quad <= 1e-10 && secs < 30.0,
                  fmt("|closed-series|<=%.2e |closed-quad|<=%.2e (%.1fs)", worst_series,
                      worst_quad, secs));
    }

    // 6. Poisson law, peak location, excited-state zeros
    {
        bool ok = true;
        std::string detail;
        double worst = 0.0;
        for (auto [kappa, lambda] :
             {std::pair{1.0, 0.5}, {2.0, 1.0}, {0.0, 1.5}, {1.4142135623730951, 0.0}}) {
            const double z = 0.5 * (kappa * kappa + lambda * lambda);
            const auto c = sho::one_change_coeffs(0, {kappa, lambda, lambda, 0.0}, 60);
            double logp = -z;
            for (int l = 0; l <= 30; ++l) {
                if (l > 0) logp += std::log(z) - std::log(static_cast<double>(l));
                worst = std::max(worst, std::abs(std::norm(c[(std::size_t)l]) - std::exp(logp)));
            }
        }
        ok = ok && worst <= 1e-12;
        detail += fmt("|P-Poisson|<=%.2e  ", worst);

        // peak: the curve of final level n peaks over eta at sqrt(2n), i.e.
        // at eta = sqrt(2(l-1)) for the 1-based level label l = n + 1; at that
        // eta the level n also (jointly) tops the distribution.
        bool peak_ok = true;
        for (int l : {2, 5, 9}) {
            const int n = l - 1;
            const double eta = std::sqrt(2.0 * (l - 1));
            const auto probe = [&](double e) {
                const auto cc = sho::one_change_coeffs(0, {e, 0.0, 0.0, 0.0}, 80);
                return std::norm(cc[(std::size_t)n]);
            };
            peak_ok = peak_ok && probe(eta) > probe(eta - 0.05) && probe(eta) > probe(eta + 0.05);
            const auto at_eta = sho::one_change_coeffs(0, {eta, 0.0, 0.0, 0.0}, 80);
            double top = 0.0;
            for (const auto& cc : at_eta) top = std::max(top, std::norm(cc));
            peak_ok = peak_ok && std::norm(at_eta[(std::size_t)n]) >= top * (1.0 - 1e-9);
        }
        ok = ok && peak_ok;
        detail += fmt("peaks at sqrt(2(l-1)): %s  ", peak_ok ? "yes" : "no");

        double worst_zero = 0.0;
        for (int l = 1; l <= 8; ++l) {
            const auto c = sho::one_change_coeffs(1, {std::sqrt(2.0 * l), 0.0, 0.0, 0.0}, 40);
            worst_zero = std::max(worst_zero, std::norm(c[(std::size_t)l]));
        }
        ok = ok && worst_zero <= 1e-12;
        detail += fmt("P_1->l zeros<=%.2e", worst_zero);
        criterion(6, "one-change law: Poisson, peak location, excited zeros", ok, detail);
        info("peak-location indexing: the curve peaking at eta = sqrt(2(l-1)) is the level "
             "n = l-1 in 0-based labels (its own maximum over eta sits at sqrt(2n))");
    }

    // 7. coherence: constant width, predicted center
    {
        const double kappa = 0.8, lambda = 0.6;
        bool ok = true;
        double worst_w = 0.0, worst_x = 0.0;
        for (int n0 : {0, 1, 2}) {
            sho::ShoCoeffState s;
            s.coeffs = sho::one_change_coeffs(n0, {kappa, lambda, lambda, 0.0}, 70);
            s.frame = {0.0, 0.0, kappa, lambda};
            const double width = std::sqrt((2.0 * n0 + 1.0) / 2.0);
            for (int i = 0; i <= 40; ++i) {
                const double t = 2.0 * pi * i / 40.0;
                const auto e = sho::expectations(s, t);
                worst_w = std::max(worst_w, std::abs(std::sqrt(e.x_var) - width));
                const double pred = kappa * t + 0.5 * lambda * t * t - lambda +
                                    lambda * std::cos(t) - kappa * std::sin(t);
                worst_x = std::max(worst_x, std::abs(e.x_mean - pred));
            }
        }
        ok = worst_w <= 1e-10 && worst_x <= 1e-10;
        criterion(7, "one-change packets: Delta x constant = sqrt((2n0+1)/2), <x> as predicted",
                  ok, fmt("|dx dev|<=%.2e |<x> dev|<=%.2e", worst_w, worst_x));
    }

    // 8. Ludwig law: normalization and the two gamma conventions
    {
        bool ok = true;
        double worst_norm = 1.0;
        for (double g : {0.25, 1.0, 4.0, 10.0})
            for (int i : {0, 3, 10}) {
                double sum = 0.0;
                const int f_top = i + static_cast<int>(12.0 * g) + 40;
                for (int f = 0; f <= f_top; ++f) sum += sho::ludwig_probability(i, f, g);
                worst_norm = std::min(worst_norm, sum);
            }
        ok = ok && worst_norm >= 1.0 - 1e-10;

        const double go = sho::gamma_ours(1.0, 1e-3);
        const double gd = sho::gamma_dodonov(1.0, 1e-3);
        const double rel = std::abs(go - gd) / go;
        ok = ok && rel <= 1e-6;

        bool monotone = true, periodic = true;
        const int n_t = 33;
        std::vector<double> ours(n_t);
        for (int i = 0; i < n_t; ++i) {
            const double t = 4.0 * pi * i / (n_t - 1);
            ours[i] = sho::ludwig_probability(0, 0, sho::gamma_ours(1.0, t));
            const double dodo = sho::ludwig_probability(0, 0, sho::gamma_dodonov(1.0, t));
            const double dodo_shift =
                sho::ludwig_probability(0, 0, sho::gamma_dodonov(1.0, t + 2.0 * pi));
            periodic = periodic && std::abs(dodo - dodo_shift) <= 1e-12;
            if (i > 0) monotone = monotone && ours[i] <= ours[i - 1] + 1e-15;
        }
        ok = ok && monotone && periodic;
        criterion(8, "Ludwig law: sums to 1, gammas agree as t->0, decay vs periodicity", ok,
                  fmt("min sum=%.12f, rel gamma diff=%.2e, decay=%s, 2pi-periodic=%s", worst_norm,
                      rel, monotone ? "yes" : "no", periodic ? "yes" : "no"));
    }

    // 9. quantum-classical energy correspondence across truncations
    {
        bool ok = true;
        std::string detail;
        for (auto [kappa, lambda] : {std::pair{1.0, 0.0}, {0.0, 1.0}}) {
            const ShoKinematics kick{kappa, lambda, lambda, 0.0};
            double prev = 1e300;
            bool monotone = true;
            double final_dev = 0.0;
            for (int n : {30, 40, 50, 60}) {
                const double dev = max_energy_deviation(kick, n, 50, 4.0 * pi);
                monotone = monotone && dev <= prev;
                prev = dev;
                final_dev = dev;
            }
            const bool here = monotone && final_dev <= 1e-3;
            ok = ok && here;
            detail += fmt("kappa=%g lambda=%g: dev(60)=%.3e monotone=%s  ", kappa, lambda,
                          final_dev, monotone ? "yes" : "no");
        }
        criterion(9, "energy matches classical, improving through N=30..60 on [0,4pi]", ok, detail);
        info(fmt("context: at omega tau = 4pi the lambda=1 state needs ~135 levels "
                 "(<H>/E_0 = %.1f); with N=140 the same scan gives max dev %.2e",
                 classical::sign_averaged_ratio(1.0, {0.0, 1.0, 1.0, 4.0 * pi}),
                 max_energy_deviation({0.0, 1.0, 1.0, 0.0}, 140, 50, 4.0 * pi)));
        info(fmt("context: on [0,2pi] the lambda=1 scan at N=60 gives max dev %.2e",
                 max_energy_deviation({0.0, 1.0, 1.0, 0.0}, 60, 50, 2.0 * pi)));
    }

    // 10. classical module internal consistency
    {
        bool ok = true;
        std::string detail;
        const ShoKinematics kin{1.0, 0.5, 0.5, 2.1};
        const long n = 1000000;
        const double mean = classical::monte_carlo_verify(1.0, kin, n, 2024);
        std::mt19937_64 rng(2024);
        double varsum = 0.0;
        for (long i = 0; i < n; ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const int sign = (rng() & 1u) ? +1 : -1;
            const double r = classical::energy_ratio({1.0, 2.0 * u - 1.0, sign}, kin);
            varsum += (r - mean) * (r - mean);
        }
        const double se = std::sqrt(varsum) / n;
        const double closed = classical::sign_averaged_ratio(1.0, kin);
        ok = ok && std::abs(mean - closed) <= 3.0 * se;
        detail += fmt("MC %.6f vs closed %.6f (3se=%.1e)  ", mean, closed, 3.0 * se);

        double worst = 0.0;
        for (auto [eps, kappa, lambda, tau] :
             {std::tuple{1.0, 1.0, 0.0, 0.5 * pi}, {2.5, -0.7, 1.2, 5.0}, {1.0, 0.3, 0.9, 2.0}})
            for (int sign : {+1, -1}) {
                const ShoKinematics k2{kappa, lambda, lambda, tau};
                worst = std::max(worst, std::abs(classical::position_averaged_ratio(eps, sign, k2) -
                                                 y_average_numeric(eps, sign, k2)));
            }
        ok = ok && worst <= 1e-8;
        detail += fmt("|closed - y-quadrature|<=%.2e", worst);
        criterion(10, "classical closed forms vs Monte Carlo and quadrature", ok, detail);
    }

    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
