#pragma once

// Dirichlet problem for Delta_g theta(D^2u) = 0 on a box, built from the two
// second-order operators u -> F(D^2u), F(S) = sum arctan(eigenvalues of S),
// and v -> Delta_g v with the metric g = I + (D^2u)^2 frozen.

#include "hslab/common.hpp"
#include "hslab/graph_calculus.hpp"

#include <string>
#include <vector>

namespace hslab {

enum class SolverScheme {
    /// Each outer step solves L_g dF(D^2u)[D^2 du] = -Delta_g theta(u), the
    /// composition of the frozen-metric Laplacian with the linearised phase
    /// operator, and line-searches on the residual.
    Coupled,
    /// Each outer step solves Delta_g v = 0 with v = F(D^2u) on the margin-1
    /// ring, then F(D^2u) = v by damped Newton. Kept for comparison: the
    /// v boundary data lag the interior and the iteration can oscillate.
    Alternating,
};

struct SolverOptions {
    SolverScheme scheme = SolverScheme::Coupled;
    int max_outer = 50;
    /// On max |Delta_g theta| over the interior. Raised to the round-off
    /// floor 10 eps max(1, max|u|) / h_min^4 when that is larger.
    Real tol_residual = 1e-8;
    Real newton_tol = 1e-12;       // on max |F(D^2u) - v|
    int newton_max_iter = 30;
    int armijo_halvings = 20;
    Real armijo_c = 1e-4;
    Real linear_tol = 1e-10;       // relative residual of the phase solve
    int linear_max_sweeps = 100000;
    Real sor_omega = 0;            // 0 picks 2/(1 + sin(pi h_min / L))
    Real window_angle = 89.0 * kPi / 180.0;
};

/// Grid and boundary data. Only the 2-ring collar (margin 0 and 1) of
/// `boundary_u` is read; the unknowns are the nodes with margin >= 2.
struct SolverProblem {
    Grid grid;
    std::vector<Real> boundary_u;
    SolverOptions options;
};

struct SolverReport {
    GradientGraphPatch solution;
    int outer_iterations = 0;
    std::vector<Real> residual_history;     // max |Delta_g theta| after each outer step
    /// max |F(D^2u) - v| over the interior after each outer step, with v the
    /// frozen-metric harmonic extension of the margin-1 phase.
    std::vector<Real> phase_match_history;
    std::vector<std::vector<Real>> newton_histories;  // alternating scheme only
    std::vector<int> linear_sweeps;
    Real effective_tolerance = 0;
    bool residual_monotone = true;
    bool newton_monotone = true;
    bool converged = false;
    std::string message;
};

/// Boolean-sum (transfinite) linear interpolation of the margin-1 faces into
/// the nodes with margin >= 2. Reproduces any function that is affine along
/// at least one axis, in particular every quadratic for n >= 2.
std::vector<Real> transfinite_initial_guess(const Grid& grid, const std::vector<Real>& boundary_u);

SolverReport solve_hs(const SolverProblem& problem);
SolverReport solve_hs(const SolverProblem& problem, const GradientGraphPatch& initial_u);

}  // namespace hslab
