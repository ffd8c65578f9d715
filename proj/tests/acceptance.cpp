// Acceptance gate: exercises every shipped guarantee on the reference
// configuration and prints one [PASS]/[FAIL] line per criterion. Exits 1
// if any criterion fails. Informational lines are prefixed [info].
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "retsurv/hjb.hpp"
#include "retsurv/io.hpp"
#include "retsurv/model.hpp"
#include "retsurv/parallel.hpp"
#include "retsurv/simulator.hpp"
#include "retsurv/validation.hpp"
#include "retsurv/version.hpp"

using namespace retsurv;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void info(const std::string& line) {
    std::printf("[info] %s\n", line.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

ModelParams reference_model() {
    ModelParams m;
    m.p = 1.5;
    m.eta = 0.1;
    m.T = 5.0;
    m.hazard = ConstantRate{1.0};
    m.claims = ExponentialClaim{1.0};
    return m;
}

double max_shared_node_diff(const SolveResult& coarse,
                            const SolveResult& fine) {
    double worst = 0.0;
    for (int i = 0; i <= coarse.grid.n_s; ++i)
        for (int k = 0; k <= i; ++k)
            for (int j = 0; j <= coarse.grid.n_x; ++j)
                worst = std::max(
                    worst,
                    std::abs(coarse.value[coarse.grid.index(i, j, k)] -
                             fine.value[fine.grid.index(2 * i, 2 * j, 2 * k)]));
    return worst;
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

int main() {
    const ModelParams m = reference_model();
    info(fmt("reference configuration: p=%g eta=%g T=%g constant hazard 1, "
             "exponential claims mean 1",
             m.p, m.eta, m.T));

    info("solving at n=100, n=200 (reference), n=400");
    const SolveResult v100 = solve(m, 100, 100);
    const SolveResult v200 = solve(m, 200, 200);
    const SolveResult v400 = solve(m, 400, 400);

    // Criterion 1: boundary exactness at tolerance zero, on every field.
    {
        const CheckReport b100 = check_bounds_and_boundaries(v100, m);
        const CheckReport b200 = check_bounds_and_boundaries(v200, m);
        const CheckReport b400 = check_bounds_and_boundaries(v400, m);
        const bool pass = b100.violation == 0.0 && b200.violation == 0.0 &&
                          b400.violation == 0.0;
        report(1, pass,
               fmt("terminal and barrier nodes exactly 1, V in [0,1]; worst "
                   "deviation %.3g / %.3g / %.3g at n=100/200/400",
                   b100.violation, b200.violation, b400.violation));
    }

    // Criterion 2: structural monotonicity suite at 1e-10 on the
    // reference resolution.
    {
        const CheckReport mono = check_monotonicity(v200, m);
        const CheckReport wineq = check_w_inequality(v200, m);
        const bool pass = mono.violation <= 1e-10 && wineq.violation <= 1e-10;
        report(2, pass,
               fmt("monotonicity violation %.3g, renewal inequality "
                   "violation %.3g (tolerance 1e-10)",
                   mono.violation, wineq.violation));
    }

    // Criterion 3: w independence under the constant hazard, tightening
    // under refinement.
    {
        const double s200 = check_memoryless(v200, m).violation;
        const double s400 = check_memoryless(v400, m).violation;
        const bool pass = s200 <= 1e-2 && s400 <= 0.7 * s200;
        report(3, pass,
               fmt("w-spread %.3g at n=200 (<= 1e-2), %.3g at n=400 "
                   "(<= 0.7x; the scheme keeps every w row bitwise equal, "
                   "so both are exactly 0)",
                   s200, s400));
    }

    // Criterion 4: solver-simulator agreement at five interior points,
    // one million paths each, against the extracted policy and against
    // constant retentions.
    {
        const std::vector<State> points = {{0.0, 2.0, 0.0},
                                           {1.0, 1.0, 0.0},
                                           {2.0, 0.75, 0.0},
                                           {3.0, 0.55, 0.0},
                                           {4.0, 0.35, 0.0}};
        const std::uint64_t n_paths = 1000000;
        const Policy table = v200.extract_policy();
        bool pass = true;
        std::uint64_t seed = 20260816;
        for (const State& pt : points) {
            const double v =
                interpolate_field(v200.grid, v200.eta_p, v200.value, pt);
            const EstimateCI mc =
                estimate_survival(m, table, pt, n_paths, seed++);
            const double gap = std::abs(v - mc.mean);
            const double slack = 3.0 * mc.std_error + 2e-2;
            if (gap > slack) pass = false;
            info(fmt("  point (%.1f, %.2f): V=%.5f MC=%.5f |diff|=%.5f "
                     "slack=%.5f",
                     pt.s, pt.x, v, mc.mean, gap, slack));
            for (double q : {0.0, 0.5, 1.0}) {
                const EstimateCI sub = estimate_survival(
                    m, ConstantPolicy{q}, pt, n_paths, seed++);
                const double excess =
                    sub.mean - v - 3.0 * sub.std_error - 2e-2;
                if (excess > 0.0) pass = false;
                if (excess > -1e-2)
                    info(fmt("  point (%.1f, %.2f): constant q=%.1f mean "
                             "%.5f vs V %.5f",
                             pt.s, pt.x, q, sub.mean, v));
            }
        }
        report(4, pass,
               "|V - MC(extracted policy)| within 3 std errors + 2e-2 at "
               "all five points; no constant retention beats V beyond the "
               "same slack");
    }

    // Criterion 5: dynamic-programming consistency at three lookaheads.
    {
        bool pass = true;
        std::string detail = "stopped-value means at h=";
        for (double h : {0.25, 0.5, 1.0}) {
            const CheckReport r =
                check_dpp(v200, m, {0.0, 2.0, 0.0}, h, 1000000, 97);
            if (r.status != CheckStatus::pass) pass = false;
            detail += fmt("%.2f: violation %.4g; ", h, r.violation);
        }
        report(5, pass, detail + "all within 3 std errors + 2e-2");
    }

    // Criterion 6: deterministic ruin and survival under full cession.
    {
        const double s = 1.0;
        const double b = barrier(m, s);
        const EstimateCI below = estimate_survival(
            m, ConstantPolicy{0.0}, {s, 0.99 * b, 0.0}, 100000, 5);
        const EstimateCI above = estimate_survival(
            m, ConstantPolicy{0.0}, {s, 1.01 * b, 0.0}, 100000, 5);
        const bool pass = below.mean == 0.0 && above.mean == 1.0;
        report(6, pass,
               fmt("ceding everything from 0.99x barrier survives %.17g "
                   "(want exactly 0), from 1.01x barrier %.17g (want "
                   "exactly 1)",
                   below.mean, above.mean));
    }

    // Criterion 7: self-convergence across grid doublings.
    {
        const double d12 = max_shared_node_diff(v100, v200);
        const double d24 = max_shared_node_diff(v200, v400);
        const bool pass = d12 <= 5e-2 && d24 <= 3e-2;
        report(7, pass,
               fmt("max shared-node |V| difference: %.4f between n=100 and "
                   "n=200 (<= 0.05), %.4f between n=200 and n=400 (<= 0.03)",
                   d12, d24));
    }

    // Criterion 8: the sampled generator residual halves under refinement.
    {
        const double r100 = hjb_residual(v100, m);
        const double r200 = hjb_residual(v200, m);
        const double r400 = hjb_residual(v400, m);
        const double ratio1 = r200 / r100;
        const double ratio2 = r400 / r200;
        const bool pass = ratio1 >= 0.375 && ratio1 <= 0.625 &&
                          ratio2 >= 0.375 && ratio2 <= 0.625;
        report(8, pass,
               fmt("residual %.4f -> %.4f -> %.4f; ratios %.3f and %.3f "
                   "(want within [0.375, 0.625])",
                   r100, r200, r400, ratio1, ratio2));
    }

    // Criterion 9: byte-identical outputs across runs and worker counts.
    {
        const auto out_dir = std::filesystem::temp_directory_path();
        const std::string f1 = (out_dir / "acceptance_run1.csv").string();
        const std::string f2 = (out_dir / "acceptance_run2.csv").string();

        set_worker_cap(1);
        const SolveResult a = solve(m, 50, 50);
        const EstimateCI e1 = estimate_survival(
            m, a.extract_policy(), {0.0, 0.5, 0.0}, 50000, 42);
        set_worker_cap(4);
        const SolveResult b = solve(m, 50, 50);
        const EstimateCI e2 = estimate_survival(
            m, b.extract_policy(), {0.0, 0.5, 0.0}, 50000, 42);
        set_worker_cap(0);

        write_value_csv(f1, a, {version_string, 1});
        write_value_csv(f2, b, {version_string, 1});
        const bool files_equal = read_bytes(f1) == read_bytes(f2);
        std::remove(f1.c_str());
        std::remove(f2.c_str());

        const bool pass = a.value == b.value && a.q_star == b.q_star &&
                          e1.mean == e2.mean &&
                          e1.std_error == e2.std_error && files_equal;
        report(9, pass,
               fmt("solve fields, survival estimates, and value CSVs are "
                   "byte-identical for worker caps 1 and 4 (simulate mean "
                   "%.17g twice)",
                   e1.mean));
    }

    // Context for the agreement criterion: the extracted table pays an
    // extraction-noise toll below the barrier that exceeds the grid slack;
    // measured here and documented in the README, asserted nowhere.
    {
        const Policy table = v200.extract_policy();
        for (const State pt : {State{1.5, 0.3, 0.0}, State{4.0, 0.1, 0.0}}) {
            const double v =
                interpolate_field(v200.grid, v200.eta_p, v200.value, pt);
            const EstimateCI mc =
                estimate_survival(m, table, pt, 200000, 1234);
            info(fmt("below-barrier extraction gap at (%.1f, %.1f): V=%.4f "
                     "MC=%.4f diff=%.4f (reported, not asserted; see "
                     "README limitations)",
                     pt.s, pt.x, v, mc.mean, std::abs(v - mc.mean)));
        }
    }

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
