// quench: command-line front end.  Emits deterministic CSV/JSON tables; all
// physics lives in the headers under include/quench.
//
// Exit codes: 0 ok, 2 usage, 3 protocol parse/validation, 4 truncation
// beyond tolerance, 5 i/o.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "quench/commands.hpp"
#include "quench/version.hpp"

namespace {

struct OutputOpts {
    std::string path = "-";
    std::string format = "csv";
};

void add_output_opts(CLI::App* sub, OutputOpts& out) {
    sub->add_option("-o,--output", out.path, "output path (\"-\" for stdout)")
        ->capture_default_str();
    sub->add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw quench::IoError(path, "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw quench::IoError(path, "read failed");
    return ss.str();
}

void report_and_emit(const quench::ScanResult& r, const OutputOpts& out) {
    for (const auto& [k, v] : r.metadata)
        if (k == "tail_mass") std::cerr << r.command << ": tail mass " << v << "\n";
    quench::emit_to_path(r, out.format == "csv" ? quench::EmitFormat::Csv : quench::EmitFormat::Json,
                         out.path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sudden-quench dynamics for a particle in a 1D box or harmonic trap"};
    app.set_version_flag("--version", quench::version);
    app.require_subcommand(1);

    OutputOpts out;

    quench::cli::BoxReviveParams brp;
    CLI::App* box_revive = app.add_subcommand(
        "box-revive", "transition probabilities of the kicked box vs stop time");
    box_revive->add_option("--delta", brp.delta, "dimensionless velocity change")->required();
    box_revive->add_option("--t-min", brp.t_min, "start of the time grid, units of tau0")
        ->capture_default_str();
    box_revive->add_option("--t-max", brp.t_max, "end of the time grid, units of tau0")
        ->capture_default_str();
    box_revive->add_option("--n-points", brp.n_points, "grid points")->capture_default_str();
    box_revive->add_option("--n-changes", brp.n_changes, "2 (kick, stop) or 3 (kick, reverse, stop)")
        ->check(CLI::IsMember({2, 3}))
        ->capture_default_str();
    box_revive->add_option("--n-states", brp.n_states, "basis truncation")->capture_default_str();
    box_revive->add_option("--k-max", brp.k_max, "record P_1->k up to this k")
        ->capture_default_str();
    box_revive->add_option("--tolerance", brp.tail_threshold, "tail-mass threshold")
        ->capture_default_str();
    box_revive->add_flag("--allow-leaky", brp.allow_leaky, "do not fail on tail mass");
    add_output_opts(box_revive, out);

    quench::cli::BoxEnergyParams bep;
    CLI::App* box_energy = app.add_subcommand(
        "box-energy", "energy of the kicked box vs stop time, with classical comparators");
    box_energy->add_option("--delta", bep.delta, "dimensionless velocity change")->required();
    box_energy->add_option("--t-min", bep.t_min, "start of the time grid, units of tau0")
        ->capture_default_str();
    box_energy->add_option("--t-max", bep.t_max, "end of the time grid, units of tau0")
        ->capture_default_str();
    box_energy->add_option("--n-points", bep.n_points, "grid points")->capture_default_str();
    box_energy->add_option("--n-changes", bep.n_changes, "2 or 3")
        ->check(CLI::IsMember({2, 3}))
        ->capture_default_str();
    box_energy->add_option("--n-states", bep.n_states, "basis truncation")->capture_default_str();
    box_energy->add_option("--tolerance", bep.tail_threshold, "tail-mass threshold")
        ->capture_default_str();
    box_energy->add_flag("--allow-leaky", bep.allow_leaky, "do not fail on tail mass");
    add_output_opts(box_energy, out);

    quench::cli::ShoQuenchParams sqp;
    std::string sq_protocol;
    CLI::App* sho_quench = app.add_subcommand(
        "sho-quench", "oscillator rest -> move -> rest scan over the drive duration");
    sho_quench->add_option("--protocol", sq_protocol, "protocol file (system \"sho\")")->required();
    sho_quench->add_option("--initial", sqp.initial_state, "initial eigenstate")
        ->capture_default_str();
    sho_quench->add_option("--t-min", sqp.t_min, "omega tau grid start")->capture_default_str();
    sho_quench->add_option("--t-max", sqp.t_max, "omega tau grid end")->capture_default_str();
    sho_quench->add_option("--n-points", sqp.n_points, "grid points")->capture_default_str();
    sho_quench->add_option("--l-max", sqp.l_max, "record P_n->l up to this l")
        ->capture_default_str();
    sho_quench->add_option("--n-states", sqp.n_states, "basis truncation")->capture_default_str();
    sho_quench->add_option("--tolerance", sqp.tail_threshold, "tail-mass threshold")
        ->capture_default_str();
    sho_quench->add_flag("--allow-leaky", sqp.allow_leaky, "do not fail on tail mass");
    add_output_opts(sho_quench, out);

    quench::cli::LudwigParams lp;
    std::string gamma_choice = "both";
    CLI::App* sho_ludwig = app.add_subcommand(
        "sho-ludwig", "uniformly accelerating oscillator transition probabilities");
    sho_ludwig->add_option("--initial", lp.initial_state, "initial eigenstate")
        ->capture_default_str();
    sho_ludwig->add_option("--f-max", lp.f_max, "final states up to f")->capture_default_str();
    sho_ludwig->add_option("--gamma", gamma_choice, "gamma convention")
        ->check(CLI::IsMember({"ours", "dodonov", "both"}))
        ->capture_default_str();
    sho_ludwig->add_option("--accel", lp.accel, "dimensionless acceleration")
        ->capture_default_str();
    sho_ludwig->add_option("--t-min", lp.t_min, "omega t grid start")->capture_default_str();
    sho_ludwig->add_option("--t-max", lp.t_max, "omega t grid end")->capture_default_str();
    sho_ludwig->add_option("--n-points", lp.n_points, "grid points")->capture_default_str();
    add_output_opts(sho_ludwig, out);

    quench::cli::ShoCoherentParams scp;
    CLI::App* sho_coherent = app.add_subcommand(
        "sho-coherent", "packet center/width after one sudden (v, a) change");
    sho_coherent->add_option("--initial", scp.initial_state, "initial eigenstate (0, 1 or 2)")
        ->check(CLI::IsMember({0, 1, 2}))
        ->capture_default_str();
    sho_coherent->add_option("--kappa", scp.kappa, "dimensionless velocity change")
        ->capture_default_str();
    sho_coherent->add_option("--lambda", scp.lambda, "dimensionless acceleration change")
        ->capture_default_str();
    sho_coherent->add_option("--t-min", scp.t_min, "omega t grid start")->capture_default_str();
    sho_coherent->add_option("--t-max", scp.t_max, "omega t grid end")->capture_default_str();
    sho_coherent->add_option("--n-points", scp.n_points, "grid points")->capture_default_str();
    sho_coherent->add_option("--l-max", scp.l_max, "record P_n->l up to this l")
        ->capture_default_str();
    sho_coherent->add_option("--n-states", scp.n_states, "basis truncation")->capture_default_str();
    add_output_opts(sho_coherent, out);

    quench::cli::ClassicalCompareParams ccp;
    CLI::App* classical_compare = app.add_subcommand(
        "classical-compare", "classical two-quench oscillator energy averages");
    classical_compare->add_option("--epsilon", ccp.epsilon, "initial energy, units hbar omega / 2")
        ->capture_default_str();
    classical_compare->add_option("--kappa", ccp.kappa, "dimensionless velocity change")
        ->capture_default_str();
    classical_compare->add_option("--lambda", ccp.lambda, "dimensionless acceleration change")
        ->capture_default_str();
    classical_compare->add_option("--t-min", ccp.t_min, "tau grid start")->capture_default_str();
    classical_compare->add_option("--t-max", ccp.t_max, "tau grid end")->capture_default_str();
    classical_compare->add_option("--n-points", ccp.n_points, "grid points")
        ->capture_default_str();
    classical_compare->add_option("--mc-samples", ccp.mc_samples,
                                  "Monte Carlo samples per grid point (0 = off)")
        ->capture_default_str();
    classical_compare->add_option("--seed", ccp.seed, "Monte Carlo seed")->capture_default_str();
    add_output_opts(classical_compare, out);

    std::string vp_path;
    CLI::App* validate_protocol =
        app.add_subcommand("validate-protocol", "parse and validate a protocol file");
    validate_protocol->add_option("file", vp_path, "protocol file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (box_revive->parsed()) {
            report_and_emit(quench::cli::cmd_box_revive(brp), out);
        } else if (box_energy->parsed()) {
            report_and_emit(quench::cli::cmd_box_energy(bep), out);
        } else if (sho_quench->parsed()) {
            sqp.protocol = quench::parse_protocol(read_file(sq_protocol));
            report_and_emit(quench::cli::cmd_sho_quench(sqp), out);
        } else if (sho_ludwig->parsed()) {
            lp.convention = gamma_choice == "ours" ? quench::cli::GammaConvention::Ours
                            : gamma_choice == "dodonov" ? quench::cli::GammaConvention::Dodonov
                                                        : quench::cli::GammaConvention::Both;
            report_and_emit(quench::cli::cmd_ludwig(lp), out);
        } else if (sho_coherent->parsed()) {
            report_and_emit(quench::cli::cmd_sho_coherent(scp), out);
        } else if (classical_compare->parsed()) {
            report_and_emit(quench::cli::cmd_classical_compare(ccp), out);
        } else if (validate_protocol->parsed()) {
            const quench::QuenchProtocol p = quench::parse_protocol(read_file(vp_path));
            quench::validate(p);
            const std::vector<double> centers = quench::center_positions(p);
            std::cout << "system: " << quench::to_string(p.system) << "\n"
                      << "segments: " << p.segments.size() << "\n";
            for (std::size_t i = 0; i < p.segments.size(); ++i) {
                const auto& s = p.segments[i];
                std::cout << "  t=" << s.t_start << " v=" << s.v << " a=" << s.a
                          << " center=" << centers[i] << "\n";
            }
            std::cout << "ok\n";
        }
    } catch (const quench::SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const quench::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const quench::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const quench::LeakyTruncation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const quench::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
