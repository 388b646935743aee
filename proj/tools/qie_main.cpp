// qie: metrics, sweeps, and oracle verification for the measurement-driven
// two-level information engine model.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qie/sweep.hpp"
#include "qie/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitNonConvergence = 3;

struct CommonFlags {
    std::optional<std::string> config;
    qie::SweepInputs flags;
};

void add_param_flags(CLI::App* cmd, CommonFlags& c) {
    cmd->add_option("--config", c.config, "config file with key = value lines");
    cmd->add_option("--T-S", c.flags.T_S, "system temperature in K");
    cmd->add_option("--T-M", c.flags.T_M, "meter temperature in K");
    cmd->add_option("--delta-E", c.flags.delta_E_meV, "TLS gap in meV");
    cmd->add_option("--delta-E-rel", c.flags.delta_E_rel, "TLS gap as a multiple of k_B*T_S");
    cmd->add_option("--tol-abs", c.flags.tol_abs, "quadrature absolute tolerance");
    cmd->add_option("--tol-rel", c.flags.tol_rel, "quadrature relative tolerance");
}

qie::SweepSpec make_spec(const CommonFlags& c) {
    qie::SweepInputs file;
    if (c.config) file = qie::parse_config(*c.config);
    return qie::resolve_spec(file, c.flags);
}

void print_metadata(std::ostream& os, const qie::EngineParams& p,
                    const qie::QuadratureConfig& q) {
    os << "# qie metrics v" << qie::kVersion << "\n";
    os << "# T_S_K = " << qie::format_number(p.T_S) << "\n";
    os << "# T_M_K = " << qie::format_number(p.T_M) << "\n";
    os << "# delta_E_meV = " << qie::format_number(p.delta_E) << "\n";
    os << "# k_B_meV_per_K = " << qie::format_number(qie::k_boltzmann) << "\n";
    os << "# kB_theta_meV = " << qie::format_number(qie::kB_theta) << "\n";
    os << "# tol_abs = " << qie::format_number(q.abs_tol) << "\n";
    os << "# tol_rel = " << qie::format_number(q.rel_tol) << "\n";
    os << "# tau is g*t_m/sqrt(k_B*Theta); Pi_tilde*(g*sqrt(k_B*Theta)) is physical power\n";
}

int cmd_metrics(const CommonFlags& c, double tau) {
    const auto spec = make_spec(c);
    const auto m = qie::evaluate_cycle(spec.params, tau, spec.quad);

    print_metadata(std::cout, spec.params, spec.quad);
    std::cout << "overlay_id,tau";
    for (const auto& name : qie::metric_column_names()) std::cout << "," << name;
    std::cout << "\n" << qie::format_row(0, m, qie::metric_column_names()) << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonFlags& c, std::optional<std::string> out_flag) {
    qie::SweepInputs file;
    if (c.config) file = qie::parse_config(*c.config);
    const auto spec = qie::resolve_spec(file, c.flags);

    std::optional<std::string> out = out_flag ? out_flag : file.out;
    if (!out) throw qie::InvalidInput("sweep: no output path (--out or 'out =' in config)");

    const auto rows = qie::run_sweep(spec); // all numerics before the file exists
    std::ofstream os(*out, std::ios::binary);
    if (!os) throw qie::InvalidInput("sweep: cannot open output file " + *out);
    try {
        qie::write_sweep_csv(os, spec, rows);
        os.close();
    } catch (...) {
        os.close();
        std::filesystem::remove(*out);
        throw;
    }
    return kExitOk;
}

int cmd_verify(qie::VerifyOptions opts) {
    const auto results = qie::run_verification(opts);
    bool all = true;
    for (const auto& r : results) {
        std::printf("%s %-28s deviation=%.6e  %s\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.deviation, r.detail.c_str());
        all = all && r.pass;
    }
    return all ? kExitOk : kExitVerifyFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"measurement-driven two-level information engine toolkit"};
    app.require_subcommand(1);

    CommonFlags metrics_flags;
    double metrics_tau = 0.0;
    auto* metrics = app.add_subcommand("metrics", "evaluate one cycle at a single tau");
    add_param_flags(metrics, metrics_flags);
    metrics->add_option("--tau", metrics_tau, "dimensionless measurement time")->required();

    CommonFlags sweep_flags;
    std::optional<std::string> sweep_out;
    auto* sweep = app.add_subcommand("sweep", "tabulate metrics over a tau grid");
    add_param_flags(sweep, sweep_flags);
    sweep->add_option("--tau-start", sweep_flags.flags.tau_start, "first tau");
    sweep->add_option("--tau-stop", sweep_flags.flags.tau_stop, "last tau");
    sweep->add_option("--tau-count", sweep_flags.flags.tau_count, "grid size");
    sweep->add_flag("--tau-log,!--tau-linear", sweep_flags.flags.tau_log, "log-spaced grid");
    sweep->add_option("--overlay", sweep_flags.flags.overlays,
                      "parameter override set key=value[,key=value] (repeatable)");
    sweep->add_option("--outputs", sweep_flags.flags.outputs,
                      "metric columns to emit (comma separated)")
        ->delimiter(',');
    sweep->add_option("--out", sweep_out, "output CSV path");

    qie::VerifyOptions vopts;
    double verify_dE_rel = 1.0;
    bool dE_rel_set = false, dE_set = false;
    double verify_dE = 0.0;
    auto* verify = app.add_subcommand("verify", "run the Trotter-oracle suite");
    verify->add_option("--T-S", vopts.params.T_S, "system temperature in K");
    verify->add_option("--T-M", vopts.T_Ms, "meter temperatures in K (repeatable)");
    verify->add_option("--tau", vopts.taus, "measurement times (repeatable)");
    verify->add_option("--delta-E", verify_dE, "TLS gap in meV")->trigger_on_parse();
    verify->add_option("--delta-E-rel", verify_dE_rel, "TLS gap as multiple of k_B*T_S");
    verify->add_option("--n-steps", vopts.trotter.n_steps, "Trotter steps");
    verify->add_option("--n-grid", vopts.trotter.n_grid, "momentum grid size (power of two)");
    verify->add_flag("--coupling-off", vopts.coupling_off, "run the g = 0 identity check");
    std::string splitting = "strang";
    verify->add_option("--splitting", splitting, "strang or lie")
        ->check(CLI::IsMember({"strang", "lie"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (metrics->parsed()) return cmd_metrics(metrics_flags, metrics_tau);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_out);
        if (verify->parsed()) {
            dE_set = verify->count("--delta-E") > 0;
            dE_rel_set = verify->count("--delta-E-rel") > 0;
            if (dE_set && dE_rel_set)
                throw qie::InvalidInput("give either --delta-E or --delta-E-rel, not both");
            vopts.params.delta_E = dE_set ? verify_dE
                                          : verify_dE_rel * qie::k_boltzmann * vopts.params.T_S;
            vopts.trotter.splitting =
                splitting == "lie" ? qie::Splitting::lie : qie::Splitting::strang;
            return cmd_verify(vopts);
        }
    } catch (const qie::NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const qie::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const qie::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
