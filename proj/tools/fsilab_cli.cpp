// Command-line front end: one subcommand per study.
//
//   eigs               modal spectra and the Dirichlet-Neumann criterion
//   simulate           time integration (beta | dn | monolithic)
//   sweep              stability verdicts across a parameter range
//   theta-region       stability map of the structure theta-scheme
//   converge           temporal-convergence table against the modal reference
//   validate-pressure  FD-vs-separation-of-variables cross check
//
// Exit codes: 0 success, 1 usage/config error, 2 diverged verdict under --strict.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fsilab/fsilab.hpp"

namespace {

using namespace fsilab;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string plot_path;
    std::string scheme = "beta";
    double dt = 0.0;    // 0 = take from config
    double t_end = 0.0; // 0 = take n_steps from config
    double beta = -1.0; // <0 = take from config
    double theta = -1.0;
    int modes = 0;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scheme) {
    cmd->add_option("--config", o.config_path, "configuration file")->required();
    cmd->add_option("--out", o.out_path, "output CSV path (stdout when omitted)");
    if (with_scheme)
        cmd->add_option("--scheme", o.scheme, "time scheme")
            ->check(CLI::IsMember({"beta", "dn", "monolithic"}));
    cmd->add_option("--dt", o.dt, "time step [s]");
    cmd->add_option("--t-end", o.t_end, "final time [s]");
    cmd->add_option("--beta", o.beta, "pressure-splitting parameter");
    cmd->add_option("--theta", o.theta, "structure scheme parameter");
    cmd->add_option("--modes", o.modes, "number of sine modes");
    cmd->add_flag("--strict", o.strict, "exit 2 on any diverged/unstable verdict");
}

RunConfig load(const CommonOpts& o) {
    RunConfig cfg = parse_config(o.config_path);
    if (o.dt > 0.0) cfg.disc.dt = o.dt;
    if (o.t_end > 0.0) cfg.disc.n_steps = std::lround(o.t_end / cfg.disc.dt);
    if (o.beta >= 0.0) cfg.disc.beta = o.beta;
    if (o.theta >= 0.0) cfg.disc.theta = o.theta;
    if (o.modes > 0) cfg.disc.J = o.modes;
    cfg.problem.validate();
    cfg.disc.validate();
    return cfg;
}

void stamp(CsvDocument& doc, const std::string& subcommand, const RunConfig& cfg) {
    doc.add_comment("fsilab " + subcommand);
    doc.add_comment("deterministic output: no timestamps, no random seed");
    doc.add_comment("config = " + cfg.source_path);
    for (const auto& [k, v] : cfg.echo()) doc.add_comment(k + " = " + format_number(v));
}

void deliver(const CsvDocument& doc, const CommonOpts& o) {
    if (o.out_path.empty())
        std::cout << render_csv(doc);
    else
        emit_csv(doc, o.out_path);
    if (!o.plot_path.empty()) emit_plotdata(doc, o.plot_path);
}

int cmd_eigs(const CommonOpts& o) {
    RunConfig cfg = load(o);
    OperatorSpectrum spec(cfg.problem, cfg.disc.J);
    const auto crit = dn_instability_criterion(cfg.problem.geom, cfg.problem.fluid, cfg.problem.wall);

    CsvDocument doc;
    stamp(doc, "eigs", cfg);
    doc.add_comment("mu_max = " + format_number(crit.mu_max));
    doc.add_comment("critical_rho_s = " + format_number(crit.critical_rho_s));
    doc.add_comment("dn_ratio = " + format_number(crit.ratio));
    doc.add_comment("dn_verdict = " + to_string(crit.verdict));
    doc.columns = {"j", "mu_j", "lambda_j", "ell_j"};
    for (std::size_t j = 1; j <= spec.modes(); ++j)
        doc.add_row({static_cast<double>(j), spec.mu[j - 1], spec.lambda[j - 1], spec.ell[j - 1]});
    deliver(doc, o);
    return 0;
}

int cmd_simulate(const CommonOpts& o) {
    RunConfig cfg = load(o);
    TimeSeries ts;
    if (o.scheme == "beta")
        ts = run_simulation(BetaScheme(cfg.problem, cfg.disc), cfg.disc.n_steps);
    else if (o.scheme == "dn")
        ts = run_simulation(DnScheme(cfg.problem, cfg.disc), cfg.disc.n_steps);
    else
        ts = monolithic_solve(cfg.problem, cfg.disc.J, cfg.disc.n_steps * cfg.disc.dt, cfg.disc.dt);

    CsvDocument doc = time_series_document(ts);
    CsvDocument stamped;
    stamp(stamped, "simulate", cfg);
    stamped.add_comment("scheme = " + o.scheme);
    stamped.comments.insert(stamped.comments.end(), doc.comments.begin(), doc.comments.end());
    stamped.columns = doc.columns;
    stamped.rows = doc.rows;
    deliver(stamped, o);
    return (ts.diverged && o.strict) ? 2 : 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& vary, double from, double to, int points) {
    RunConfig cfg = load(o);
    std::vector<double> values;
    for (int i = 0; i < points; ++i)
        values.push_back(points == 1 ? from : from + (to - from) * i / (points - 1));
    auto reports = sweep(cfg.problem, cfg.disc, vary, values, scheme_from_string(o.scheme));

    CsvDocument doc = sweep_document(vary, reports);
    CsvDocument stamped;
    stamp(stamped, "sweep", cfg);
    stamped.add_comment("scheme = " + o.scheme);
    stamped.add_comment("vary = " + vary);
    stamped.columns = doc.columns;
    stamped.rows = doc.rows;
    deliver(stamped, o);

    bool any_unstable = false;
    for (const auto& r : reports) any_unstable |= !r.stable;
    return (any_unstable && o.strict) ? 2 : 0;
}

int cmd_theta_region(const CommonOpts& o, int mode, double th0, double th1, int thn, double dt0,
                     double dt1, int dtn) {
    RunConfig cfg = load(o);
    std::vector<double> thetas, dts;
    for (int i = 0; i < thn; ++i)
        thetas.push_back(thn == 1 ? th0 : th0 + (th1 - th0) * i / (thn - 1));
    for (int i = 0; i < dtn; ++i) // log-spaced
        dts.push_back(dtn == 1 ? dt0 : dt0 * std::pow(dt1 / dt0, static_cast<double>(i) / (dtn - 1)));
    auto map = theta_region(cfg.problem, cfg.disc, static_cast<std::size_t>(mode), thetas, dts);

    CsvDocument doc;
    stamp(doc, "theta-region", cfg);
    doc.add_comment("mode = " + std::to_string(mode));
    doc.columns = {"theta", "dt", "radius", "stable"};
    for (std::size_t it = 0; it < map.thetas.size(); ++it)
        for (std::size_t id = 0; id < map.dts.size(); ++id)
            doc.add_row({map.thetas[it], map.dts[id], map.radius(it, id),
                         map.is_stable(it, id) ? 1.0 : 0.0});
    deliver(doc, o);
    return 0;
}

int cmd_converge(const CommonOpts& o, const std::string& dts_text, double t_eval) {
    RunConfig cfg = load(o);
    std::vector<double> dts;
    std::istringstream ss(dts_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) dts.push_back(std::stod(tok));
    auto table = convergence_study(cfg.problem, cfg.disc, dts, t_eval, scheme_from_string(o.scheme));

    CsvDocument doc = convergence_document(table);
    CsvDocument stamped;
    stamp(stamped, "converge", cfg);
    stamped.add_comment("scheme = " + o.scheme);
    stamped.add_comment("t_eval = " + format_number(t_eval));
    stamped.columns = doc.columns;
    stamped.rows = doc.rows;
    deliver(stamped, o);

    bool any_diverged = false;
    for (const auto& r : table.rows) any_diverged |= r.diverged;
    return (any_diverged && o.strict) ? 2 : 0;
}

int cmd_validate_pressure(const CommonOpts& o, const std::string& grids_text, int mode) {
    RunConfig cfg = load(o);
    std::vector<int> grids;
    std::istringstream ss(grids_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) grids.push_back(std::stoi(tok));

    CsvDocument doc;
    stamp(doc, "validate-pressure", cfg);
    doc.add_comment("robin datum = sine mode " + std::to_string(mode));
    doc.columns = {"grid_size", "trace_error_L2", "observed_order"};

    const int J = std::max(mode, 2);
    ModalVector w = ModalVector::basis(static_cast<std::size_t>(J), static_cast<std::size_t>(mode));
    double prev_err = 0.0, prev_h = 0.0;
    for (int N : grids) {
        auto fd = solve_robin_fd(RobinProblemData::modal(w), cfg.problem, N, N);
        auto modal = solve_robin_modal(w, cfg.problem, N, N);
        auto exact = modal_to_trace(modal.trace, cfg.problem.geom, N);
        double e2 = 0.0, r2 = 0.0;
        for (int i = 0; i < N; ++i) {
            const double d = fd.trace[static_cast<std::size_t>(i)] - exact[static_cast<std::size_t>(i)];
            e2 += d * d;
            r2 += exact[static_cast<std::size_t>(i)] * exact[static_cast<std::size_t>(i)];
        }
        const double err = std::sqrt(e2 / r2);
        const double h = 1.0 / (N - 1);
        const double order =
            prev_err > 0.0 ? std::log(prev_err / err) / std::log(prev_h / h) : std::nan("");
        doc.add_row({static_cast<double>(N), err, order});
        prev_err = err;
        prev_h = h;
    }
    deliver(doc, o);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for partitioned pressure/elastic-wall time schemes"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* eigs = app.add_subcommand("eigs", "modal spectra and instability criterion");
    add_common(eigs, o, false);

    auto* simulate = app.add_subcommand("simulate", "run a time scheme under the pressure pulse");
    add_common(simulate, o, true);
    simulate->add_option("--plot", o.plot_path, "also write a gnuplot table + script");

    auto* sw = app.add_subcommand("sweep", "stability verdicts across a parameter range");
    add_common(sw, o, true);
    sw->add_option("--plot", o.plot_path, "also write a gnuplot table + script");
    std::string vary = "rho_s";
    double from = 0.5, to = 150.0;
    int points = 31;
    sw->add_option("--vary", vary, "parameter to vary (rho_s|beta|theta|dt|R|L)");
    sw->add_option("--from", from, "range start")->required();
    sw->add_option("--to", to, "range end")->required();
    sw->add_option("--points", points, "number of grid points");

    auto* region = app.add_subcommand("theta-region", "stability map over (theta, dt)");
    add_common(region, o, false);
    int mode = 1, thn = 11, dtn = 13;
    double th0 = 0.0, th1 = 0.5, dt0 = 1e-5, dt1 = 1e-1;
    region->add_option("--mode", mode, "sine mode index");
    region->add_option("--theta-min", th0, "theta range start");
    region->add_option("--theta-max", th1, "theta range end");
    region->add_option("--theta-points", thn, "theta grid size");
    region->add_option("--dt-min", dt0, "dt range start");
    region->add_option("--dt-max", dt1, "dt range end");
    region->add_option("--dt-points", dtn, "dt grid size (log spaced)");

    auto* conv = app.add_subcommand("converge", "temporal-convergence study");
    add_common(conv, o, true);
    std::string dts = "1e-4,5e-5,1e-5,5e-6";
    double t_eval = 0.01;
    conv->add_option("--dts", dts, "comma-separated decreasing dt list");
    conv->add_option("--t-eval", t_eval, "evaluation time [s]");

    auto* vp = app.add_subcommand("validate-pressure", "FD vs modal pressure solve");
    add_common(vp, o, false);
    std::string grids = "33,65,129";
    int vp_mode = 1;
    vp->add_option("--grids", grids, "comma-separated square grid sizes");
    vp->add_option("--mode", vp_mode, "sine mode of the Robin datum");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help/usage text
        return code == 0 ? 0 : 1;
    }

    try {
        if (eigs->parsed()) return cmd_eigs(o);
        if (simulate->parsed()) return cmd_simulate(o);
        if (sw->parsed()) return cmd_sweep(o, vary, from, to, points);
        if (region->parsed()) return cmd_theta_region(o, mode, th0, th1, thn, dt0, dt1, dtn);
        if (conv->parsed()) return cmd_converge(o, dts, t_eval);
        if (vp->parsed()) return cmd_validate_pressure(o, grids, vp_mode);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
