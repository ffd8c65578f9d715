#include "retsurv/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace retsurv {

namespace {

void require_positive(double v, const char* field) {
    if (!std::isfinite(v) || v <= 0.0)
        throw std::domain_error(std::string(field) + " must be > 0");
}

struct BilinearPos {
    int lo;
    double frac;
};

// Clamped cell location along one axis with n+1 nodes at spacing h.
BilinearPos locate(double value, double h, int n) {
    if (n == 0) return {0, 0.0};
    double f = value / h;
    f = std::clamp(f, 0.0, static_cast<double>(n));
    int lo = std::min(static_cast<int>(f), n - 1);
    return {lo, f - lo};
}

double interp_slice(const GridSpec& g, const double* f, int i, double x,
                    double w) {
    const BilinearPos jx = locate(x, g.dx, g.n_x);
    // Slice i only stores w rows up to k = i; clamp w to that extent.
    const double w_cap = std::min(w, g.s_at(i));
    const BilinearPos kw = locate(w_cap, g.ds, i);
    const std::size_t base = g.index(i, jx.lo, kw.lo);
    const std::size_t row = static_cast<std::size_t>(g.n_x) + 1;
    const double lo_row = (1.0 - jx.frac) * f[base] + jx.frac * f[base + 1];
    if (i == 0 || kw.frac == 0.0) return lo_row;
    const double hi_row =
        (1.0 - jx.frac) * f[base + row] + jx.frac * f[base + row + 1];
    return (1.0 - kw.frac) * lo_row + kw.frac * hi_row;
}

}  // namespace

void ModelParams::validate() const {
    require_positive(p, "p");
    require_positive(eta, "eta");
    require_positive(T, "T");
    std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ConstantRate>) {
                require_positive(m.rate, "hazard rate");
            } else if constexpr (std::is_same_v<M, Erlang>) {
                if (m.k < 1)
                    throw std::domain_error("erlang k must be >= 1");
                require_positive(m.rate, "erlang rate");
            } else {
                require_positive(m.shape, "weibull shape");
                require_positive(m.scale, "weibull scale");
            }
        },
        hazard);
    std::visit(
        [](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, ExponentialClaim>) {
                require_positive(d.mean, "claim mean");
            } else if constexpr (std::is_same_v<D, GammaClaim>) {
                require_positive(d.shape, "gamma shape");
                require_positive(d.scale, "gamma scale");
            } else {
                if (!std::isfinite(d.meanlog))
                    throw std::domain_error("lognormal meanlog must be finite");
                require_positive(d.sdlog, "lognormal sdlog");
            }
        },
        claims);
}

double barrier(const ModelParams& params, double s) {
    if (!std::isfinite(s) || s < 0.0 || s > params.T)
        throw std::domain_error("s must lie in [0, T]");
    return params.eta * params.p * (params.T - s);
}

bool in_domain(const ModelParams& params, const State& state) {
    if (state.s < 0.0 || state.s > params.T) return false;
    if (state.w < 0.0 || state.w > state.s) return false;
    return state.x >= 0.0 && state.x <= barrier(params, state.s);
}

GridSpec build_grid(const ModelParams& params, int n_s, int n_x) {
    params.validate();
    if (n_s < 2 || n_x < 2)
        throw std::domain_error("grid resolutions must be >= 2");
    GridSpec g;
    g.n_s = n_s;
    g.n_x = n_x;
    g.T = params.T;
    g.x_max = params.eta * params.p * params.T;
    g.ds = params.T / n_s;
    g.dx = g.x_max / n_x;
    return g;
}

double interpolate_field(const GridSpec& grid, double eta_p,
                         const std::vector<double>& field,
                         const State& state) {
    const double s = std::clamp(state.s, 0.0, grid.T);
    const double x = std::clamp(state.x, 0.0, eta_p * (grid.T - s));
    const double w = std::clamp(state.w, 0.0, s);

    const BilinearPos is = locate(s, grid.ds, grid.n_s);
    const double lo = interp_slice(grid, field.data(), is.lo, x, w);
    if (is.frac == 0.0) return lo;
    const double hi = interp_slice(grid, field.data(), is.lo + 1, x, w);
    return (1.0 - is.frac) * lo + is.frac * hi;
}

double evaluate_policy(const Policy& policy, const State& state) {
    if (const auto* c = std::get_if<ConstantPolicy>(&policy)) return c->q;
    const auto& table = std::get<TablePolicy>(policy);
    return interpolate_field(table.grid, table.eta_p, table.q, state);
}

}  // namespace retsurv
