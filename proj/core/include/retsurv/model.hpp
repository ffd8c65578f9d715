#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "retsurv/distributions.hpp"

namespace retsurv {

struct ModelParams {
    double p;    // premium rate, > 0
    double eta;  // reinsurer safety loading, > 0
    double T;    // horizon, > 0
    HazardModel hazard;
    ClaimDistribution claims;

    // Throws std::domain_error naming the offending field.
    void validate() const;
};

struct State {
    double s;  // time in [0, T]
    double x;  // surplus
    double w;  // elapsed time since the last claim, in [0, s]
};

// Surplus level eta*p*(T - s) at and above which survival to T is certain
// (cede everything; the drift then matches the barrier slope).
double barrier(const ModelParams& params, double s);

// Membership in D = {0 <= s <= T, 0 <= x <= barrier(s), 0 <= w <= s}.
bool in_domain(const ModelParams& params, const State& state);

// Discrete layout shared by the solver fields and table policies.
// The w axis reuses the s step (dw == ds) and is triangular: slice i
// holds w rows k = 0..i only, since w <= s always.
struct GridSpec {
    int n_s = 0;
    int n_x = 0;
    double ds = 0.0;
    double dx = 0.0;
    double T = 0.0;
    double x_max = 0.0;  // eta*p*T, the x extent of the grid

    std::size_t slice_offset(int i) const {
        return static_cast<std::size_t>(n_x + 1) *
               (static_cast<std::size_t>(i) * (i + 1) / 2);
    }
    std::size_t index(int i, int j, int k) const {
        return slice_offset(i) + static_cast<std::size_t>(k) * (n_x + 1) + j;
    }
    std::size_t node_count() const {
        return static_cast<std::size_t>(n_x + 1) *
               (static_cast<std::size_t>(n_s) + 1) * (n_s + 2) / 2;
    }
    double s_at(int i) const { return ds * i; }
    double x_at(int j) const { return dx * j; }
    double w_at(int k) const { return ds * k; }
};

GridSpec build_grid(const ModelParams& params, int n_s, int n_x);

struct ConstantPolicy {
    double q;  // retention in [0, 1]
};

// Retention table on a GridSpec, evaluated by multilinear interpolation.
// Out-of-domain states are clamped into the closed domain first: x into
// [0, barrier(s)], w into [0, s], s into [0, T].
struct TablePolicy {
    GridSpec grid;
    double eta_p = 0.0;  // eta*p, fixes barrier(s) = eta_p*(T - s)
    std::vector<double> q;

    double barrier_at(double s) const { return eta_p * (grid.T - s); }
};

using Policy = std::variant<ConstantPolicy, TablePolicy>;

double evaluate_policy(const Policy& policy, const State& state);

// Multilinear interpolation of a triangular field at an arbitrary state,
// clamped into the closed domain first: x into [0, eta_p*(T - s)], w into
// [0, s], s into [0, T]. Solver fields pin nodes at and above the barrier,
// so the clamp realizes the barrier extension of the field.
double interpolate_field(const GridSpec& grid, double eta_p,
                         const std::vector<double>& field, const State& state);

}  // namespace retsurv
