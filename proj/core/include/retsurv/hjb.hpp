#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "retsurv/model.hpp"

namespace retsurv {

struct SolveDiagnostics {
    std::size_t node_count = 0;
    // Largest positive V[i] - V[i+1] over shared (j,k); the scheme keeps
    // this at rounding level.
    double max_s_monotonicity_violation = 0.0;
    // Worst case over slices of the implicit w=0 row iteration.
    int max_fixed_point_iterations = 0;
};

struct SolveResult {
    GridSpec grid;
    double eta_p = 0.0;
    std::vector<double> value;   // V on grid.index(i,j,k)
    std::vector<double> q_star;  // maximizing retention per node
    SolveDiagnostics diagnostics;

    TablePolicy extract_policy() const { return {grid, eta_p, q_star}; }
};

// First column j whose node value is pinned to 1 on slice i, i.e. the
// least j with x_j >= barrier(s_i) up to a relative rounding guard.
// Solver, checks, and tests share this rule so "barrier node" means the
// same set everywhere.
int first_pinned_column(const GridSpec& grid, int i);

// Integral factor of the claim term: int_0^{x/q} V(s, x - q y, 0) dG(y),
// computed in probability space u = G(y) by composite Simpson on n_quad
// uniform subintervals of [0, G(x/q)]. v_zero holds the w = 0 slice on
// the x grid (spacing dx); off-grid x interpolates linearly, values past
// the top node clamp to the top value. q = 0 returns V(s,x,0) (the
// claim leaves the surplus untouched).
double jump_value(const ClaimDistribution& claims,
                  std::span<const double> v_zero, double dx, double x,
                  double q, int n_quad);

// Computes slice i of V and q* from slice i+1. Exposed for tests; solve
// drives it backward from the terminal slice. v and q are the full
// triangular arrays; only slice i is written.
void backward_step(const ModelParams& params, const GridSpec& grid, int i,
                   std::vector<double>& v, std::vector<double>& q, int n_q,
                   int n_quad, SolveDiagnostics* diag);

struct SolveOptions {
    int n_q = 21;
    int n_quad = 64;
    // Called after each completed slice with (i, v, q); used for
    // checkpointing. Never alters results.
    std::function<void(int, const std::vector<double>&,
                       const std::vector<double>&)>
        on_slice;
    // Resume support: slices i >= resume_from are assumed already
    // present in the initial field vectors.
    int resume_from = -1;
    std::vector<double> initial_value;
    std::vector<double> initial_q;
};

SolveResult solve(const ModelParams& params, int n_s, int n_x,
                  const SolveOptions& options = {});

// Max over sampled interior nodes of |max_q L[V](node, q)| for the
// discretized generator: one-sided difference along the transport
// direction plus the hazard-weighted jump integral. Sample locations are
// fixed in physical coordinates so refinements probe comparable points.
double hjb_residual(const SolveResult& result, const ModelParams& params);

}  // namespace retsurv
