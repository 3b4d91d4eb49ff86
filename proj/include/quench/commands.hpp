#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "quench/box.hpp"
#include "quench/classical.hpp"
#include "quench/protocol.hpp"
#include "quench/scan.hpp"
#include "quench/sho.hpp"

// Command layer shared by the CLI binary and the tests: each command builds a
// ScanResult deterministically from explicit parameters.
namespace quench::cli {

inline std::vector<double> linspace(double lo, double hi, int n_points) {
    if (n_points < 2) throw std::invalid_argument("a scan grid needs at least 2 points");
    if (!(hi > lo)) throw std::invalid_argument("scan grid needs t_max > t_min");
    std::vector<double> g(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n_points - 1);
    return g;
}

namespace detail {
inline std::string fmt(double v) { return quench::detail::format_double(v); }
}  // namespace detail

// ---------------------------------------------------------------- box-revive

struct BoxReviveParams {
    double delta = 8.0;
    double t_min = 0.0;  // units of tau0
    double t_max = 1.1;  // units of tau0
    int n_points = 200;
    int n_changes = 2;
    int n_states = 200;
    int k_max = 5;
    double tail_threshold = 1e-3;
    bool allow_leaky = false;
};

inline ScanResult cmd_box_revive(const BoxReviveParams& p) {
    if (p.t_min < 0.0) throw std::invalid_argument("box-revive: t_min must be >= 0");
    std::vector<double> grid = linspace(p.t_min * box::tau0, p.t_max * box::tau0, p.n_points);
    ScanResult r = box::revival_scan(p.delta, grid, p.n_states, p.n_changes,
                                     {p.k_max, p.tail_threshold, p.allow_leaky});
    r.command = "box-revive";
    return r;
}

// ---------------------------------------------------------------- box-energy

struct BoxEnergyParams {
    double delta = 5.0;
    double t_min = 0.0;  // units of tau0
    double t_max = 1.0;
    int n_points = 200;
    int n_changes = 2;
    int n_states = 200;
    double tail_threshold = 1e-3;
    bool allow_leaky = false;
};

// Same scan as box-revive but focused on the energy landmark columns: the
// quantum <H>/E_1 next to the classical stop-at-random-time averages.
inline ScanResult cmd_box_energy(const BoxEnergyParams& p) {
    if (p.t_min < 0.0) throw std::invalid_argument("box-energy: t_min must be >= 0");
    std::vector<double> grid = linspace(p.t_min * box::tau0, p.t_max * box::tau0, p.n_points);
    ScanResult r = box::revival_scan(p.delta, grid, p.n_states, p.n_changes,
                                     {1, p.tail_threshold, p.allow_leaky});
    r.command = "box-energy";
    const box::ClassicalEnergies cl = box::classical_energies(p.delta, p.n_changes);
    const std::size_t n = r.rows();
    r.add_real("e_cl_ratio", std::vector<double>(n, cl.e_cl));
    r.add_real("e_plus_ratio", std::vector<double>(n, cl.e_plus));
    r.add_meta("e_cl_ratio", detail::fmt(cl.e_cl));
    r.add_meta("e_plus_ratio", detail::fmt(cl.e_plus));
    return r;
}

// ---------------------------------------------------------------- sho-quench

struct ShoQuenchParams {
    QuenchProtocol protocol;
    int initial_state = 0;
    int n_states = 60;
    double t_min = 0.0;  // omega * tau grid for the drive duration
    double t_max = 12.566370614359172;
    int n_points = 200;
    int l_max = 8;
    double tail_threshold = 1e-3;
    bool allow_leaky = false;
};

// Scans the duration of the driven segment of a rest -> (v2, a2) -> rest
// protocol, reporting transition probabilities, <H>/E_0 after the stop, and
// the classical sign-averaged energy ratio for the matching ensemble.
inline ScanResult cmd_sho_quench(const ShoQuenchParams& p) {
    validate(p.protocol);
    if (p.protocol.system != SystemKind::Sho)
        throw std::invalid_argument("sho-quench: protocol system must be \"sho\"");
    if (p.protocol.segments.size() != 3)
        throw std::invalid_argument(
            "sho-quench scans a rest -> move -> rest protocol; expected exactly 3 segments");
    const QuenchSegment& pre = p.protocol.segments[0];
    const QuenchSegment& drive = p.protocol.segments[1];
    const QuenchSegment& post = p.protocol.segments[2];
    if (pre.v != 0.0 || pre.a != 0.0 || post.v != 0.0 || post.a != 0.0)
        throw std::invalid_argument("sho-quench: first and last segments must be at rest");
    if (p.initial_state < 0 || p.initial_state >= p.n_states)
        throw std::invalid_argument("sho-quench: initial state out of range");

    const sho::ShoKinematics kin = sho::make_kinematics(0.0, 0.0, drive.v, drive.a);
    const std::vector<double> grid = linspace(p.t_min, p.t_max, p.n_points);
    const int l_max = std::min(p.l_max, p.n_states - 1);
    const double epsilon = 2.0 * p.initial_state + 1.0;

    std::vector<std::vector<double>> col_p(static_cast<std::size_t>(l_max) + 1);
    std::vector<double> col_e, col_cl;
    double max_tail = 0.0;
    for (double tau : grid) {
        const sho::ShoCoeffState s = sho::two_change_chain_from(
            p.initial_state, kin, tau, p.n_states, {p.tail_threshold, p.allow_leaky});
        max_tail = std::max(max_tail, s.tail_mass());
        for (int l = 0; l <= l_max; ++l)
            col_p[static_cast<std::size_t>(l)].push_back(
                std::norm(s.coeffs[static_cast<std::size_t>(l)]));
        col_e.push_back(sho::expectations(s, tau).energy_ratio);
        sho::ShoKinematics kt = kin;
        kt.tau = tau;
        col_cl.push_back(classical::sign_averaged_ratio(epsilon, kt));
    }

    ScanResult r;
    r.command = "sho-quench";
    r.add_meta("kappa", detail::fmt(kin.kappa));
    r.add_meta("lambda", detail::fmt(kin.lambda));
    r.add_meta("initial_state", std::to_string(p.initial_state));
    r.add_meta("n_states", std::to_string(p.n_states));
    r.add_meta("tail_mass", detail::fmt(max_tail));
    r.add_real("omega_tau", grid);
    for (int l = 0; l <= l_max; ++l)
        r.add_real("P_" + std::to_string(p.initial_state) + "_" + std::to_string(l),
                   std::move(col_p[static_cast<std::size_t>(l)]));
    r.add_real("energy_ratio", std::move(col_e));
    r.add_real("classical_ratio", std::move(col_cl));
    return r;
}

// ---------------------------------------------------------------- sho-ludwig

enum class GammaConvention { Ours, Dodonov, Both };

struct LudwigParams {
    int initial_state = 0;
    int f_max = 8;
    GammaConvention convention = GammaConvention::Both;
    double accel = 1.0;
    double t_min = 0.0;
    double t_max = 12.566370614359172;
    int n_points = 200;
};

// P_{i->f}(t) for a uniformly accelerating oscillator under the two competing
// gamma(t) conventions.
inline ScanResult cmd_ludwig(const LudwigParams& p) {
    if (p.initial_state < 0) throw std::invalid_argument("sho-ludwig: initial state must be >= 0");
    if (p.f_max < p.initial_state)
        throw std::invalid_argument("sho-ludwig: f_max must be >= the initial state");
    if (p.t_min < 0.0) throw std::invalid_argument("sho-ludwig: t_min must be >= 0");
    const std::vector<double> grid = linspace(p.t_min, p.t_max, p.n_points);
    const bool ours = p.convention != GammaConvention::Dodonov;
    const bool dodo = p.convention != GammaConvention::Ours;

    ScanResult r;
    r.command = "sho-ludwig";
    r.add_meta("initial_state", std::to_string(p.initial_state));
    r.add_meta("accel", detail::fmt(p.accel));
    r.add_real("omega_t", grid);

    std::vector<double> g(grid.size());
    if (ours) {
        for (std::size_t i = 0; i < grid.size(); ++i) g[i] = sho::gamma_ours(p.accel, grid[i]);
        r.add_real("gamma_ours", g);
    }
    std::vector<double> gd(grid.size());
    if (dodo) {
        for (std::size_t i = 0; i < grid.size(); ++i) gd[i] = sho::gamma_dodonov(p.accel, grid[i]);
        r.add_real("gamma_dodonov", gd);
    }
    const std::string base = "P_" + std::to_string(p.initial_state) + "_";
    const bool both = ours && dodo;
    for (int f = 0; f <= p.f_max; ++f) {
        if (ours) {
            std::vector<double> col(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i)
                col[i] = sho::ludwig_probability(p.initial_state, f, g[i]);
            r.add_real(base + std::to_string(f) + (both ? "_ours" : ""), std::move(col));
        }
        if (dodo) {
            std::vector<double> col(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i)
                col[i] = sho::ludwig_probability(p.initial_state, f, gd[i]);
            r.add_real(base + std::to_string(f) + (both ? "_dodonov" : ""), std::move(col));
        }
    }
    return r;
}

// -------------------------------------------------------------- sho-coherent

struct ShoCoherentParams {
    int initial_state = 0;  // 0, 1 or 2
    double kappa = 1.0;
    double lambda = 0.0;
    double t_min = 0.0;
    double t_max = 6.283185307179586;
    int n_points = 200;
    int l_max = 8;
    int n_states = 60;
};

// Diagnostics for the state created by a single sudden (v, a) change from
// eigenstate n0: the packet's center and width over time plus the (time
// independent) level distribution.
inline ScanResult cmd_sho_coherent(const ShoCoherentParams& p) {
    if (p.t_min < 0.0) throw std::invalid_argument("sho-coherent: t_min must be >= 0");
    const sho::ShoKinematics kin = sho::make_kinematics(0.0, 0.0, p.kappa, p.lambda);
    sho::ShoCoeffState s;
    s.coeffs = sho::one_change_coeffs(p.initial_state, kin, p.n_states);
    s.frame = {0.0, 0.0, p.kappa, p.lambda};

    const std::vector<double> grid = linspace(p.t_min, p.t_max, p.n_points);
    std::vector<double> xm, xp, xv, dx, er;
    for (double t : grid) {
        const sho::Expectations e = sho::expectations(s, t);
        xm.push_back(e.x_mean);
        // packet center: potential minimum + the quench-induced oscillation
        xp.push_back(p.kappa * t + 0.5 * p.lambda * t * t - p.lambda +
                     p.lambda * std::cos(t) - p.kappa * std::sin(t));
        xv.push_back(e.x_var);
        dx.push_back(std::sqrt(e.x_var));
        er.push_back(e.energy_ratio);
    }

    ScanResult r;
    r.command = "sho-coherent";
    r.add_meta("initial_state", std::to_string(p.initial_state));
    r.add_meta("kappa", detail::fmt(p.kappa));
    r.add_meta("lambda", detail::fmt(p.lambda));
    r.add_meta("n_states", std::to_string(p.n_states));
    r.add_meta("tail_mass", detail::fmt(s.tail_mass()));
    r.add_real("omega_t", grid);
    r.add_real("x_mean", std::move(xm));
    r.add_real("x_mean_pred", std::move(xp));
    r.add_real("x_var", std::move(xv));
    r.add_real("delta_x", std::move(dx));
    r.add_real("energy_ratio", std::move(er));
    const int l_max = std::min(p.l_max, p.n_states - 1);
    for (int l = 0; l <= l_max; ++l)
        r.add_real("P_" + std::to_string(p.initial_state) + "_" + std::to_string(l),
                   std::vector<double>(grid.size(), std::norm(s.coeffs[static_cast<std::size_t>(l)])));
    return r;
}

// --------------------------------------------------------- classical-compare

struct ClassicalCompareParams {
    double epsilon = 1.0;
    double kappa = 1.0;
    double lambda = 0.0;
    double t_min = 0.0;
    double t_max = 12.566370614359172;
    int n_points = 200;
    long mc_samples = 0;  // 0 disables the Monte Carlo column
    std::uint64_t seed = 1;
};

inline ScanResult cmd_classical_compare(const ClassicalCompareParams& p) {
    if (p.t_min < 0.0) throw std::invalid_argument("classical-compare: t_min must be >= 0");
    const std::vector<double> grid = linspace(p.t_min, p.t_max, p.n_points);
    std::vector<double> sa, pp, pm, mc;
    for (double tau : grid) {
        sho::ShoKinematics kin = sho::make_kinematics(0.0, 0.0, p.kappa, p.lambda);
        kin.tau = tau;
        sa.push_back(classical::sign_averaged_ratio(p.epsilon, kin));
        pp.push_back(classical::position_averaged_ratio(p.epsilon, +1, kin));
        pm.push_back(classical::position_averaged_ratio(p.epsilon, -1, kin));
        if (p.mc_samples > 0)
            mc.push_back(classical::monte_carlo_verify(p.epsilon, kin, p.mc_samples, p.seed));
    }
    ScanResult r;
    r.command = "classical-compare";
    r.add_meta("epsilon", detail::fmt(p.epsilon));
    r.add_meta("kappa", detail::fmt(p.kappa));
    r.add_meta("lambda", detail::fmt(p.lambda));
    if (p.mc_samples > 0) {
        r.add_meta("mc_samples", std::to_string(p.mc_samples));
        r.add_meta("seed", std::to_string(p.seed));
    }
    r.add_real("tau", grid);
    r.add_real("sign_averaged_ratio", std::move(sa));
    r.add_real("position_avg_plus", std::move(pp));
    r.add_real("position_avg_minus", std::move(pm));
    if (p.mc_samples > 0) r.add_real("mc_mean", std::move(mc));
    return r;
}

}  // namespace quench::cli
