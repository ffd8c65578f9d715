#include "retsurv/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "retsurv/distributions.hpp"
#include "retsurv/parallel.hpp"

namespace retsurv {

namespace {

// Row interpolation in grid units. Positions left of 0 mean the flow has
// crossed into ruin within the step: value 0. Positions past the top
// node clamp to the top value (the top row sits at or above the barrier).
double interp_row(const double* row, int n_x, double pos) {
    if (pos < 0.0) return 0.0;
    if (pos >= static_cast<double>(n_x)) return row[n_x];
    const int j = static_cast<int>(pos);
    const double f = pos - j;
    return (1.0 - f) * row[j] + f * row[j + 1];
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

struct QGrid {
    std::vector<double> q;      // m / (n_q - 1)
    std::vector<double> shift;  // flow displacement over ds, in x-grid units
    std::vector<double> half;   // half displacement in surplus units
};

QGrid make_qgrid(const ModelParams& params, const GridSpec& g, int n_q) {
    QGrid out;
    out.q.resize(n_q);
    out.shift.resize(n_q);
    out.half.resize(n_q);
    for (int m = 0; m < n_q; ++m) {
        const double q = static_cast<double>(m) / (n_q - 1);
        const double drift = params.p * (q * (1.0 + params.eta) - params.eta);
        out.q[m] = q;
        out.shift[m] = g.ds * drift / g.dx;
        out.half[m] = 0.5 * g.ds * drift;
    }
    return out;
}

// argmax over the retention grid with strict improvement, so exact ties
// resolve to the smallest q.
struct Best {
    double value = -1.0;
    double q = 0.0;
};

}  // namespace

int first_pinned_column(const GridSpec& grid, int i) {
    if (i >= grid.n_s) return 0;
    const double jf = static_cast<double>(grid.n_x) *
                      (1.0 - static_cast<double>(i) / grid.n_s);
    const int j = static_cast<int>(std::ceil(jf - 1e-9));
    return std::clamp(j, 0, grid.n_x);
}

double jump_value(const ClaimDistribution& claims,
                  std::span<const double> v_zero, double dx, double x,
                  double q, int n_quad) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error("jump_value: x must be finite and >= 0");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::domain_error("jump_value: q must lie in [0,1]");
    if (n_quad < 2) throw std::domain_error("jump_value: n_quad must be >= 2");
    const int n_x = static_cast<int>(v_zero.size()) - 1;
    const double* row = v_zero.data();
    if (q == 0.0) return interp_row(row, n_x, x / dx);

    const double ratio = x / q;
    const double cap = std::isfinite(ratio) ? claim_cdf(claims, ratio) : 1.0;
    if (cap <= 0.0) return 0.0;

    // Composite Simpson needs an even subinterval count.
    const int n = n_quad + (n_quad % 2);
    // Endpoints: u = 0 is the untouched surplus, u = cap lands exactly on
    // surplus 0 (a claim of x/q is survivable; ruin needs y > x/q).
    double acc = interp_row(row, n_x, x / dx) + row[0];
    for (int m = 1; m < n; ++m) {
        const double u = cap * m / n;
        const double y = claim_quantile(claims, u);
        const double xp = std::max(x - q * y, 0.0);
        acc += (m % 2 == 1 ? 4.0 : 2.0) * interp_row(row, n_x, xp / dx);
    }
    return cap / n / 3.0 * acc;
}

void backward_step(const ModelParams& params, const GridSpec& grid, int i,
                   std::vector<double>& v, std::vector<double>& q, int n_q,
                   int n_quad, SolveDiagnostics* diag) {
    const int n_x = grid.n_x;
    const std::size_t row_len = static_cast<std::size_t>(n_x) + 1;
    const std::size_t base_i = grid.slice_offset(i);
    const std::size_t base_next = grid.slice_offset(i + 1);
    const int jpin = first_pinned_column(grid, i);
    const QGrid qg = make_qgrid(params, grid, n_q);

    for (int k = 0; k <= i; ++k) {
        double* vrow = v.data() + base_i + k * row_len;
        double* qrow = q.data() + base_i + k * row_len;
        for (int j = jpin; j <= n_x; ++j) {
            vrow[j] = 1.0;
            qrow[j] = 0.0;
        }
    }

    std::vector<double> ef(i + 1);
    for (int k = 0; k <= i; ++k)
        ef[k] = std::exp(
            -cumulative_hazard_between(params.hazard, grid.w_at(k), grid.ds));

    const double* vnext0 = v.data() + base_next;

    // The w = 0 row at s_i appears inside its own jump term through
    // V_mid; resolve it by fixed-point iteration (the jump weight
    // 1 - e^{-dL} makes the map a strong contraction).
    std::vector<double> row0(row_len), next_row0(row_len), vmid(row_len);
    std::vector<double> jump_tab(static_cast<std::size_t>(jpin) * n_q);
    for (int j = 0; j <= n_x; ++j)
        row0[j] = j >= jpin ? 1.0 : vnext0[j];
    std::fill(next_row0.begin() + jpin, next_row0.end(), 1.0);

    const double* vnext1 = v.data() + base_next + row_len;  // w row k = 1
    const double ef0 = ef[0];
    int iterations = 0;
    for (;; ++iterations) {
        if (iterations > 200)
            throw std::runtime_error(
                "backward_step: w=0 row iteration did not converge");
        for (int j = 0; j <= n_x; ++j)
            vmid[j] = 0.5 * (row0[j] + vnext0[j]);
        parallel_for(0, jpin, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t j = lo; j < hi; ++j) {
                Best best;
                for (int m = 0; m < n_q; ++m) {
                    const double flow =
                        interp_row(vnext1, n_x, j + qg.shift[m]);
                    const double xm =
                        std::max(grid.x_at(static_cast<int>(j)) + qg.half[m],
                                 0.0);
                    const double jv =
                        jump_value(params.claims, vmid, grid.dx, xm, qg.q[m],
                                   n_quad);
                    const double cand = ef0 * flow + (1.0 - ef0) * jv;
                    if (cand > best.value) best = {cand, qg.q[m]};
                }
                next_row0[j] = clamp_unit(best.value);
            }
        });
        double delta = 0.0;
        for (int j = 0; j < jpin; ++j)
            delta = std::max(delta, std::abs(next_row0[j] - row0[j]));
        row0.swap(next_row0);
        if (delta <= 5e-15) break;
    }
    if (diag != nullptr)
        diag->max_fixed_point_iterations =
            std::max(diag->max_fixed_point_iterations, iterations + 1);

    // Freeze V_mid from the converged row and tabulate the jump factor;
    // it depends on (j, q) only, never on w, so all rows share it.
    for (int j = 0; j <= n_x; ++j)
        vmid[j] = 0.5 * (row0[j] + vnext0[j]);
    parallel_for(0, jpin, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j)
            for (int m = 0; m < n_q; ++m) {
                const double xm = std::max(
                    grid.x_at(static_cast<int>(j)) + qg.half[m], 0.0);
                jump_tab[j * n_q + m] = jump_value(
                    params.claims, vmid, grid.dx, xm, qg.q[m], n_quad);
            }
    });

    const std::size_t cells =
        static_cast<std::size_t>(i + 1) * static_cast<std::size_t>(jpin);
    parallel_for(0, cells, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t cell = lo; cell < hi; ++cell) {
            const int k = static_cast<int>(cell / jpin);
            const int j = static_cast<int>(cell % jpin);
            const double* up = v.data() + base_next + (k + 1) * row_len;
            const double efk = ef[k];
            Best best;
            for (int m = 0; m < n_q; ++m) {
                const double cand =
                    efk * interp_row(up, n_x, j + qg.shift[m]) +
                    (1.0 - efk) * jump_tab[j * n_q + m];
                if (cand > best.value) best = {cand, qg.q[m]};
            }
            v[base_i + k * row_len + j] = clamp_unit(best.value);
            q[base_i + k * row_len + j] = best.q;
        }
    });

    if (diag != nullptr) {
        double worst = diag->max_s_monotonicity_violation;
        for (int k = 0; k <= i; ++k)
            for (int j = 0; j <= n_x; ++j) {
                const double here = v[base_i + k * row_len + j];
                const double later = v[base_next + k * row_len + j];
                worst = std::max(worst, here - later);
            }
        diag->max_s_monotonicity_violation = worst;
    }
}

SolveResult solve(const ModelParams& params, int n_s, int n_x,
                  const SolveOptions& options) {
    if (options.n_q < 2 || options.n_quad < 2)
        throw std::domain_error("solver resolutions must be >= 2");
    SolveResult out;
    out.grid = build_grid(params, n_s, n_x);
    out.eta_p = params.eta * params.p;
    const std::size_t total = out.grid.node_count();
    out.diagnostics.node_count = total;

    int start = n_s - 1;
    if (options.resume_from >= 0) {
        if (options.initial_value.size() != total ||
            options.initial_q.size() != total)
            throw std::domain_error("resume fields do not match the grid");
        out.value = options.initial_value;
        out.q_star = options.initial_q;
        start = options.resume_from - 1;
    } else {
        out.value.assign(total, 0.0);
        out.q_star.assign(total, 0.0);
        const std::size_t base = out.grid.slice_offset(n_s);
        std::fill(out.value.begin() + base, out.value.end(), 1.0);
    }

    for (int i = start; i >= 0; --i) {
        backward_step(params, out.grid, i, out.value, out.q_star,
                      options.n_q, options.n_quad, &out.diagnostics);
        if (options.on_slice) options.on_slice(i, out.value, out.q_star);
    }
    return out;
}

double hjb_residual(const SolveResult& result, const ModelParams& params) {
    const GridSpec& g = result.grid;
    const int n_q = 21;
    const QGrid qg = make_qgrid(params, g, n_q);
    const std::size_t row_len = static_cast<std::size_t>(g.n_x) + 1;

    double worst = 0.0;
    for (double sf = 0.10; sf <= 0.901; sf += 0.05) {
        const int i = static_cast<int>(std::lround(sf * g.n_s));
        if (i >= g.n_s) continue;
        const int jpin = first_pinned_column(g, i);
        const double* row0 = result.value.data() + g.slice_offset(i);
        for (double xf = 0.10; xf <= 0.851; xf += 0.05) {
            const int j = static_cast<int>(
                std::lround(xf * (jpin - 1)));
            if (j <= 0 || j >= jpin - 1) continue;
            for (double wf : {0.0, 0.5}) {
                const int k = static_cast<int>(std::lround(wf * i));
                const double lam = hazard(params.hazard, g.w_at(k));
                const double here =
                    result.value[g.index(i, j, k)];
                const double* up = result.value.data() +
                                   g.slice_offset(i + 1) +
                                   (k + 1) * row_len;
                double best = -2.0;
                for (int m = 0; m < n_q; ++m) {
                    const double transported =
                        interp_row(up, g.n_x, j + qg.shift[m]);
                    const double jv = jump_value(
                        params.claims,
                        std::span<const double>(row0, row_len), g.dx,
                        g.x_at(j), qg.q[m], 64);
                    const double r = (transported - here) / g.ds +
                                     lam * (jv - here);
                    best = std::max(best, r);
                }
                worst = std::max(worst, std::abs(best));
            }
        }
    }
    return worst;
}

}  // namespace retsurv
