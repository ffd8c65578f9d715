#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "retsurv/config.hpp"
#include "retsurv/hjb.hpp"
#include "retsurv/io.hpp"
#include "retsurv/model.hpp"
#include "retsurv/simulator.hpp"
#include "retsurv/validation.hpp"
#include "retsurv/version.hpp"

namespace {

using namespace retsurv;

FileStamp stamp_for(const RunConfig& cfg) {
    return FileStamp{version_string, cfg.config_hash()};
}

std::string out_path(const std::string& dir, const char* name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

Policy policy_from_config(const RunConfig& cfg) {
    const std::string& spec = cfg.simulate.policy;
    if (spec.rfind("constant:", 0) == 0)
        return ConstantPolicy{std::stod(spec.substr(9))};
    const SolveResult table = read_value_csv(spec.substr(6));
    return TablePolicy{table.grid, table.eta_p, table.q_star};
}

int run_solve(const RunConfig& cfg, const std::string& dir,
              int checkpoint_every, const std::string& resume_path) {
    const FileStamp stamp = stamp_for(cfg);
    const GridSpec grid =
        build_grid(cfg.model, cfg.solver.n_s, cfg.solver.n_x);

    SolveOptions opts;
    opts.n_q = cfg.solver.n_q;
    opts.n_quad = cfg.solver.n_quad;
    if (!resume_path.empty()) {
        int from = -1;
        SolveResult partial = read_value_csv(resume_path, &from);
        if (from < 0)
            throw std::runtime_error("not a checkpoint file: " + resume_path);
        if (partial.grid.n_s != grid.n_s || partial.grid.n_x != grid.n_x ||
            partial.grid.T != grid.T || partial.grid.x_max != grid.x_max)
            throw std::runtime_error(
                "checkpoint grid does not match the config");
        opts.resume_from = from;
        opts.initial_value = std::move(partial.value);
        opts.initial_q = std::move(partial.q_star);
    }
    const std::string ckpt = out_path(dir, "checkpoint.csv");
    if (checkpoint_every > 0) {
        opts.on_slice = [&](int i, const std::vector<double>& v,
                            const std::vector<double>& q) {
            if (i > 0 && i % checkpoint_every == 0) {
                SolveResult snap;
                snap.grid = grid;
                snap.eta_p = cfg.model.eta * cfg.model.p;
                snap.value = v;
                snap.q_star = q;
                write_checkpoint_csv(ckpt, snap, i, stamp);
            }
        };
    }

    const SolveResult result =
        solve(cfg.model, cfg.solver.n_s, cfg.solver.n_x, opts);
    write_value_csv(out_path(dir, "value.csv"), result, stamp);
    std::printf("solved n_s=%d n_x=%d nodes=%zu\n", grid.n_s, grid.n_x,
                result.diagnostics.node_count);
    std::printf("max_s_monotonicity_violation=%.3g\n",
                result.diagnostics.max_s_monotonicity_violation);
    std::printf("max_fixed_point_iterations=%d\n",
                result.diagnostics.max_fixed_point_iterations);
    return 0;
}

int run_simulate(const RunConfig& cfg, const std::string& dir,
                 bool dump_paths) {
    const FileStamp stamp = stamp_for(cfg);
    const Policy policy = policy_from_config(cfg);
    const EstimateCI ci =
        estimate_survival(cfg.model, policy, cfg.simulate.init,
                          cfg.simulate.n_paths, cfg.simulate.seed);
    write_summary_csv(out_path(dir, "summary.csv"),
                      {{cfg.simulate.init, cfg.simulate.policy, ci}}, stamp);
    std::printf("mean=%.17g std_error=%.17g n_paths=%llu seed=%llu\n",
                ci.mean, ci.std_error,
                static_cast<unsigned long long>(ci.n_paths),
                static_cast<unsigned long long>(ci.seed));
    if (dump_paths) {
        std::vector<PathRecord> paths;
        paths.reserve(cfg.simulate.n_paths);
        for (std::uint64_t n = 0; n < cfg.simulate.n_paths; ++n) {
            RandomEventSource source(cfg.model, cfg.simulate.seed, n);
            paths.push_back(simulate_path(cfg.model, policy,
                                          cfg.simulate.init, source,
                                          cfg.model.T, true));
        }
        write_paths_csv(out_path(dir, "paths.csv"), paths, stamp);
        write_events_csv(out_path(dir, "events.csv"), paths, stamp);
    }
    return 0;
}

int run_validate(const RunConfig& cfg, const std::string& dir) {
    const FileStamp stamp = stamp_for(cfg);
    SolveOptions opts;
    opts.n_q = cfg.solver.n_q;
    opts.n_quad = cfg.solver.n_quad;
    const SolveResult fine =
        solve(cfg.model, cfg.solver.n_s, cfg.solver.n_x, opts);

    std::vector<CheckReport> checks;
    checks.push_back(check_bounds_and_boundaries(fine, cfg.model));
    checks.push_back(check_monotonicity(fine, cfg.model));
    checks.push_back(check_w_inequality(fine, cfg.model));
    checks.push_back(check_memoryless(fine, cfg.model));

    if (cfg.solver.n_s % 2 == 0 && cfg.solver.n_x % 2 == 0 &&
        cfg.solver.n_s >= 4 && cfg.solver.n_x >= 4) {
        const SolveResult coarse =
            solve(cfg.model, cfg.solver.n_s / 2, cfg.solver.n_x / 2, opts);
        checks.push_back(check_continuity_modulus(coarse, fine));
    } else {
        CheckReport skip;
        skip.name = "continuity_modulus";
        skip.status = CheckStatus::skipped;
        skip.location = "needs even n_s, n_x >= 4";
        checks.push_back(skip);
    }

    checks.push_back(crosscheck_mc(fine, cfg.model,
                                   default_crosscheck_points(cfg.model),
                                   cfg.simulate.n_paths, cfg.simulate.seed));
    const double h = std::min(0.5, cfg.model.T - cfg.simulate.init.s);
    checks.push_back(check_dpp(fine, cfg.model, cfg.simulate.init, h,
                               cfg.simulate.n_paths, cfg.simulate.seed));

    const std::string report = render_report(checks, 2e-2);
    const std::string path = out_path(dir, "validation.json");
    if (std::FILE* f = std::fopen(path.c_str(), "w")) {
        std::fputs(report.c_str(), f);
        std::fclose(f);
    } else {
        throw std::runtime_error("cannot write file: " + path);
    }
    std::fputs(report.c_str(), stdout);
    (void)stamp;
    return all_passed(checks) ? 0 : 1;
}

int run_sweep(const RunConfig& cfg, const std::string& dir,
              const std::string& axis, const std::string& values) {
    const FileStamp stamp = stamp_for(cfg);
    std::vector<double> vals;
    std::stringstream ss(values);
    std::string part;
    while (std::getline(ss, part, ','))
        vals.push_back(std::stod(part));
    if (vals.empty()) throw std::runtime_error("sweep needs --values");

    const std::string path = out_path(dir, "sweep.csv");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (f == nullptr) throw std::runtime_error("cannot write file: " + path);
    std::fprintf(f, "# retsurv %s config=%016llx\n", stamp.version.c_str(),
                 static_cast<unsigned long long>(stamp.config_hash));
    std::fprintf(f, "axis,value,s,x,w,V\n");
    for (double v : vals) {
        ModelParams m = cfg.model;
        if (axis == "eta") {
            m.eta = v;
        } else if (axis == "p") {
            m.p = v;
        } else if (axis == "T") {
            m.T = v;
        } else if (axis == "claim_mean") {
            auto* e = std::get_if<ExponentialClaim>(&m.claims);
            if (e == nullptr) {
                std::fclose(f);
                throw std::runtime_error(
                    "claim_mean sweep needs exponential claims");
            }
            e->mean = v;
        } else if (axis == "hazard_rate") {
            if (auto* c = std::get_if<ConstantRate>(&m.hazard)) {
                c->rate = v;
            } else if (auto* er = std::get_if<Erlang>(&m.hazard)) {
                er->rate = v;
            } else {
                std::fclose(f);
                throw std::runtime_error(
                    "hazard_rate sweep needs constant_rate or erlang");
            }
        } else {
            std::fclose(f);
            throw std::runtime_error("unknown sweep axis '" + axis + "'");
        }
        SolveOptions opts;
        opts.n_q = cfg.solver.n_q;
        opts.n_quad = cfg.solver.n_quad;
        const SolveResult r = solve(m, cfg.solver.n_s, cfg.solver.n_x, opts);
        State init = cfg.simulate.init;
        init.s = std::min(init.s, m.T);
        init.w = std::min(init.w, init.s);
        const double value =
            interpolate_field(r.grid, r.eta_p, r.value, init);
        std::fprintf(f, "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", axis.c_str(),
                     v, init.s, init.x, init.w, value);
    }
    std::fclose(f);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-horizon survival optimization with dynamic "
                 "proportional reinsurance under renewal claim arrivals"};
    app.require_subcommand(1);
    app.footer("Environment: RETSURV_MAX_WORKERS caps worker threads.");

    std::string config_path;
    std::string dir = ".";
    int checkpoint_every = 0;
    std::string resume_path;
    bool dump_paths = false;
    std::string axis;
    std::string values;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Config file (INI sections)")
            ->required();
        cmd->add_option("--out", dir, "Output directory (default .)");
    };

    CLI::App* solve_cmd = app.add_subcommand(
        "solve", "Solve the dynamic program; writes value.csv");
    add_common(solve_cmd);
    solve_cmd->add_option("--checkpoint-every", checkpoint_every,
                          "Write checkpoint.csv every N slices");
    solve_cmd->add_option("--resume", resume_path,
                          "Resume from a checkpoint file");

    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "Monte Carlo survival estimate; writes summary.csv");
    add_common(sim_cmd);
    sim_cmd->add_flag("--dump-paths", dump_paths,
                      "Also write paths.csv and events.csv");

    CLI::App* val_cmd = app.add_subcommand(
        "validate", "Run the property suite; writes validation.json");
    add_common(val_cmd);

    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Solve across a parameter axis; writes sweep.csv");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--axis", axis,
                          "One of: eta, p, T, claim_mean, hazard_rate")
        ->required();
    sweep_cmd->add_option("--values", values, "Comma-separated axis values")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const RunConfig cfg = load_config(config_path);
        if (solve_cmd->parsed())
            return run_solve(cfg, dir, checkpoint_every, resume_path);
        if (sim_cmd->parsed()) return run_simulate(cfg, dir, dump_paths);
        if (val_cmd->parsed()) return run_validate(cfg, dir);
        return run_sweep(cfg, dir, axis, values);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
