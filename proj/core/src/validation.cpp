#include "retsurv/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "retsurv/distributions.hpp"
#include "retsurv/simulator.hpp"

namespace retsurv {

namespace {

std::string node_location(int i, int j, int k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "node (i=%d, j=%d, k=%d)", i, j, k);
    return buf;
}

std::string state_location(const State& s) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "state (s=%g, x=%g, w=%g)", s.s, s.x, s.w);
    return buf;
}

struct Worst {
    double violation = 0.0;
    std::string location;

    void offer(double v, std::string where) {
        if (v > violation) {
            violation = v;
            location = std::move(where);
        }
    }
};

CheckReport finish(std::string name, const Worst& worst, double tolerance) {
    CheckReport r;
    r.name = std::move(name);
    r.violation = worst.violation;
    r.location = worst.location;
    r.tolerance = tolerance;
    r.status =
        worst.violation > tolerance ? CheckStatus::fail : CheckStatus::pass;
    return r;
}

double field_max_neighbor_diff(const SolveResult& r, int axis) {
    const GridSpec& g = r.grid;
    const std::size_t row_len = static_cast<std::size_t>(g.n_x) + 1;
    double worst = 0.0;
    for (int i = 0; i <= g.n_s; ++i) {
        const std::size_t base = g.slice_offset(i);
        for (int k = 0; k <= i; ++k)
            for (int j = 0; j <= g.n_x; ++j) {
                const double here = r.value[base + k * row_len + j];
                double other;
                if (axis == 0) {  // s, holding (x, w)
                    if (i == g.n_s) continue;
                    other = r.value[g.index(i + 1, j, k)];
                } else if (axis == 1) {  // x
                    if (j == g.n_x) continue;
                    other = r.value[base + k * row_len + j + 1];
                } else {  // w
                    if (k == i) continue;
                    other = r.value[base + (k + 1) * row_len + j];
                }
                worst = std::max(worst, std::abs(other - here));
            }
    }
    return worst;
}

}  // namespace

CheckReport check_bounds_and_boundaries(const SolveResult& result,
                                        const ModelParams& params) {
    (void)params;
    const GridSpec& g = result.grid;
    const std::size_t row_len = static_cast<std::size_t>(g.n_x) + 1;
    Worst worst;
    for (int i = 0; i <= g.n_s; ++i) {
        const std::size_t base = g.slice_offset(i);
        const int jpin = first_pinned_column(g, i);
        for (int k = 0; k <= i; ++k)
            for (int j = 0; j <= g.n_x; ++j) {
                const double v = result.value[base + k * row_len + j];
                double bad = std::max(v - 1.0, -v);
                if (i == g.n_s || j >= jpin) bad = std::abs(v - 1.0);
                if (bad > 0.0) worst.offer(bad, node_location(i, j, k));
            }
    }
    return finish("bounds_and_boundaries", worst, 0.0);
}

CheckReport check_monotonicity(const SolveResult& result,
                               const ModelParams& params, double tolerance) {
    (void)params;
    const GridSpec& g = result.grid;
    const std::size_t row_len = static_cast<std::size_t>(g.n_x) + 1;
    Worst worst;
    for (int i = 0; i <= g.n_s; ++i) {
        const std::size_t base = g.slice_offset(i);
        for (int k = 0; k <= i; ++k) {
            const double* row = result.value.data() + base + k * row_len;
            for (int j = 0; j <= g.n_x; ++j) {
                if (j < g.n_x && row[j] - row[j + 1] > worst.violation)
                    worst.offer(row[j] - row[j + 1],
                                node_location(i, j, k) + std::string(", x"));
                if (i < g.n_s) {
                    const double later = result.value[g.index(i + 1, j, k)];
                    if (row[j] - later > worst.violation)
                        worst.offer(row[j] - later,
                                    node_location(i, j, k) +
                                        std::string(", s"));
                }
            }
        }
    }
    return finish("monotonicity", worst, tolerance);
}

CheckReport check_w_inequality(const SolveResult& result,
                               const ModelParams& params, double tolerance) {
    const GridSpec& g = result.grid;
    const std::size_t row_len = static_cast<std::size_t>(g.n_x) + 1;
    Worst worst;
    for (int i = 0; i < g.n_s; ++i) {
        const std::size_t base = g.slice_offset(i);
        for (int k = 0; k <= i; ++k) {
            const double damp = std::exp(
                -cumulative_hazard_between(params.hazard, g.w_at(k), g.ds));
            const double* row = result.value.data() + base + k * row_len;
            const double* next =
                result.value.data() + g.slice_offset(i + 1) +
                (k + 1) * row_len;
            for (int j = 0; j <= g.n_x; ++j) {
                const double deficit = damp * next[j] - row[j];
                if (deficit > worst.violation)
                    worst.offer(deficit, node_location(i, j, k));
            }
        }
    }
    return finish("w_inequality", worst, tolerance);
}

CheckReport check_memoryless(const SolveResult& result,
                             const ModelParams& params, double tolerance) {
    if (!std::holds_alternative<ConstantRate>(params.hazard)) {
        CheckReport r;
        r.name = "memoryless";
        r.status = CheckStatus::skipped;
        r.tolerance = tolerance;
        r.location = "hazard is not constant-rate";
        return r;
    }
    const GridSpec& g = result.grid;
    const std::size_t row_len = static_cast<std::size_t>(g.n_x) + 1;
    Worst worst;
    for (int i = 0; i <= g.n_s; ++i) {
        const std::size_t base = g.slice_offset(i);
        for (int j = 0; j <= g.n_x; ++j) {
            double lo = 1.0;
            double hi = 0.0;
            for (int k = 0; k <= i; ++k) {
                const double v = result.value[base + k * row_len + j];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > worst.violation)
                worst.offer(hi - lo, node_location(i, j, 0) +
                                         std::string(" across k"));
        }
    }
    return finish("memoryless", worst, tolerance);
}

CheckReport crosscheck_mc(const SolveResult& result, const ModelParams& params,
                          const std::vector<State>& test_points,
                          std::uint64_t n_paths, std::uint64_t seed,
                          double epsilon_grid) {
    const Policy table = result.extract_policy();
    Worst worst;
    std::uint64_t stream = seed;
    for (const State& pt : test_points) {
        const double v =
            interpolate_field(result.grid, result.eta_p, result.value, pt);
        const EstimateCI agree =
            estimate_survival(params, table, pt, n_paths, stream++);
        worst.offer(std::abs(v - agree.mean) - 3.0 * agree.std_error,
                    state_location(pt) + std::string(", table policy"));
        for (double q : {0.0, 0.5, 1.0}) {
            const EstimateCI sub = estimate_survival(
                params, ConstantPolicy{q}, pt, n_paths, stream++);
            worst.offer(sub.mean - v - 3.0 * sub.std_error,
                        state_location(pt) + std::string(", constant q=") +
                            std::to_string(q));
        }
    }
    return finish("crosscheck_mc", worst, epsilon_grid);
}

CheckReport check_dpp(const SolveResult& result, const ModelParams& params,
                      const State& point, double h, std::uint64_t n_paths,
                      std::uint64_t seed, double epsilon_grid) {
    const Policy table = result.extract_policy();
    const double v =
        interpolate_field(result.grid, result.eta_p, result.value, point);
    const EstimateCI stopped = estimate_stopped_value(
        params, table, point, h, result.value, result.grid, n_paths, seed);
    Worst worst;
    worst.offer(std::abs(v - stopped.mean) - 3.0 * stopped.std_error,
                state_location(point) + std::string(", h=") +
                    std::to_string(h));
    return finish("dpp", worst, epsilon_grid);
}

CheckReport check_continuity_modulus(const SolveResult& coarse,
                                     const SolveResult& fine, double factor) {
    if (fine.grid.n_s != 2 * coarse.grid.n_s ||
        fine.grid.n_x != 2 * coarse.grid.n_x)
        throw std::domain_error(
            "continuity probe needs a 2x refinement pair");
    static const char* axis_name[3] = {"s", "x", "w"};
    Worst worst;
    for (int axis = 0; axis < 3; ++axis) {
        const double mc = field_max_neighbor_diff(coarse, axis);
        const double mf = field_max_neighbor_diff(fine, axis);
        // Shrink deficit: positive when the fine modulus exceeds its budget.
        const double deficit = mf - factor * mc;
        if (deficit > worst.violation)
            worst.offer(deficit, std::string("axis ") + axis_name[axis]);
    }
    return finish("continuity_modulus", worst, 0.0);
}

std::vector<State> default_crosscheck_points(const ModelParams& params) {
    const double x_max = params.eta * params.p * params.T;
    std::vector<State> pts;
    for (int m = 0; m < 5; ++m) {
        const double f = 0.2 * m;
        const double s = f * params.T;
        pts.push_back({s, barrier(params, s) + x_max * (0.25 + (1.0 - f)),
                       0.0});
    }
    return pts;
}

bool all_passed(const std::vector<CheckReport>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) {
        return c.status != CheckStatus::fail;
    });
}

std::string render_report(std::vector<CheckReport> checks,
                          double epsilon_grid) {
    std::sort(checks.begin(), checks.end(),
              [](const CheckReport& a, const CheckReport& b) {
                  return a.name < b.name;
              });
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string out = "{\n  \"epsilon_grid\": " + num(epsilon_grid) +
                      ",\n  \"checks\": [\n";
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const CheckReport& c = checks[i];
        const char* status = c.status == CheckStatus::pass ? "pass"
                             : c.status == CheckStatus::fail ? "fail"
                                                             : "skipped";
        out += "    {\"name\": \"" + c.name + "\", \"status\": \"" + status +
               "\", \"violation\": " + num(c.violation) +
               ", \"tolerance\": " + num(c.tolerance) + ", \"location\": \"" +
               c.location + "\"}";
        out += i + 1 < checks.size() ? ",\n" : "\n";
    }
    out += "  ],\n  \"all_pass\": ";
    out += all_passed(checks) ? "true" : "false";
    out += "\n}\n";
    return out;
}

}  // namespace retsurv
