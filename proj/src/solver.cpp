#include "hslab/solver.hpp"

#include "hslab/spectral.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace hslab {

namespace {

constexpr int kCollar = 2;

struct Offsets {
    std::vector<GridIndex> shifts;  // all of {-1,0,1}^n
};

Offsets unit_cube_offsets(int n) {
    Offsets o;
    int total = 1;
    for (int a = 0; a < n; ++a) total *= 3;
    for (int c = 0; c < total; ++c) {
        GridIndex s{};
        int rem = c;
        for (int a = n - 1; a >= 0; --a) {
            s[a] = rem % 3 - 1;
            rem /= 3;
        }
        o.shifts.push_back(s);
    }
    return o;
}

std::size_t offset_node(const Grid& g, std::size_t p, const GridIndex& s) {
    for (int a = 0; a < g.dim(); ++a)
        if (s[a] != 0) p = g.shifted(p, a, s[a]);
    return p;
}

Real phase_at(const GradientGraphPatch& patch, std::size_t p) { return lagrangian_phase(hessian_at(patch, p)); }

// Frozen-metric Laplace-Beltrami stencil rows for every unknown node.
struct Stencil {
    std::vector<std::size_t> rows;                    // unknown node per row
    std::vector<std::vector<std::size_t>> columns;
    std::vector<std::vector<Real>> weights;
    std::vector<Real> diagonal;
};

Stencil build_stencil(const GradientGraphPatch& patch, const std::vector<std::size_t>& unknowns, const Offsets& offs) {
    const Grid& g = patch.grid();
    const int n = g.dim();
    LaplaceBeltramiCoefficients lb;
    lb.flux.assign(g.size(), MatrixN::Zero(n, n));
    lb.sqrt_det.assign(g.size(), 1);
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (g.margin(p) < 1) continue;
        const MatrixN metric = induced_metric(hessian_at(patch, p));
        const auto eig = jacobi_eigen(metric);
        Real det = 1;
        MatrixN inv = MatrixN::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            det *= eig.values(i);
            inv += eig.vectors.col(i) * eig.vectors.col(i).transpose() / eig.values(i);
        }
        lb.sqrt_det[p] = std::sqrt(det);
        lb.flux[p] = lb.sqrt_det[p] * inv;
    }
    Stencil st;
    st.rows = unknowns;
    st.columns.resize(unknowns.size());
    st.weights.resize(unknowns.size());
    st.diagonal.resize(unknowns.size());
    for (std::size_t r = 0; r < unknowns.size(); ++r) {
        const std::size_t p = unknowns[r];
        for (const auto& s : offs.shifts) {
            const std::size_t q = offset_node(g, p, s);
            if (q == p) continue;
            const Real w = laplace_beltrami_at(g, lb, p, [&](std::size_t i, std::size_t j) {
                return static_cast<Real>(j == q) - static_cast<Real>(i == q);
            });
            if (w != 0) {
                st.columns[r].push_back(q);
                st.weights[r].push_back(w);
            }
        }
        st.diagonal[r] = laplace_beltrami_at(g, lb, p, [&](std::size_t i, std::size_t j) {
            return static_cast<Real>(j == p) - static_cast<Real>(i == p);
        });
    }
    return st;
}

// Red-black ordered SOR for the frozen-metric equation, Dirichlet values
// held in `v` outside the unknown set.
int phase_solve(const Grid& g, const Stencil& st, std::vector<Real>& v, const SolverOptions& opt) {
    const int n = g.dim();
    Real omega = opt.sor_omega;
    if (omega <= 0) {
        Real ratio = 1;
        for (int a = 0; a < n; ++a) ratio = std::min(ratio, 1.0 / (g.extent(a) - 1));
        omega = 2 / (1 + std::sin(kPi * ratio));
    }
    std::vector<char> colour(st.rows.size());
    for (std::size_t r = 0; r < st.rows.size(); ++r) {
        const GridIndex idx = g.unflatten(st.rows[r]);
        int sum = 0;
        for (int a = 0; a < n; ++a) sum += idx[a];
        colour[r] = static_cast<char>(sum & 1);
    }
    auto relative_residual = [&] {
        Real res = 0, scale = 0, dmax = 0;
        for (std::size_t r = 0; r < st.rows.size(); ++r) {
            Real acc = st.diagonal[r] * v[st.rows[r]];
            for (std::size_t k = 0; k < st.columns[r].size(); ++k) acc += st.weights[r][k] * v[st.columns[r][k]];
            res = std::max(res, std::abs(acc));
            dmax = std::max(dmax, std::abs(st.diagonal[r]));
        }
        for (Real x : v) scale = std::max(scale, std::abs(x));
        return scale > 0 ? res / (dmax * scale) : 0.0;
    };
    int sweeps = 0;
    while (sweeps < opt.linear_max_sweeps) {
        if (sweeps % 10 == 0 && relative_residual() <= opt.linear_tol) break;
        for (char c = 0; c < 2; ++c)
            for (std::size_t r = 0; r < st.rows.size(); ++r) {
                if (colour[r] != c) continue;
                Real acc = 0;
                for (std::size_t k = 0; k < st.columns[r].size(); ++k) acc += st.weights[r][k] * v[st.columns[r][k]];
                const std::size_t p = st.rows[r];
                v[p] += omega * (-acc / st.diagonal[r] - v[p]);
            }
        ++sweeps;
    }
    return sweeps;
}

struct NewtonOutcome {
    std::vector<Real> history;
    bool converged = false;
};

// Damped Newton for F(D^2u) = v at the unknown nodes.
NewtonOutcome newton_solve(GradientGraphPatch& patch, const std::vector<std::size_t>& unknowns,
                           const std::vector<long>& unknown_slot, const std::vector<Real>& v, const SolverOptions& opt) {
    const Grid& g = patch.grid();
    const int n = g.dim();
    const std::size_t m = unknowns.size();
    std::vector<Real> u = patch.values();

    auto residual = [&](const std::vector<Real>& values) {
        const GradientGraphPatch trial(g, values);
        Eigen::VectorXd r(static_cast<Eigen::Index>(m));
        for (std::size_t k = 0; k < m; ++k) r(k) = phase_at(trial, unknowns[k]) - v[unknowns[k]];
        return r;
    };

    NewtonOutcome out;
    Eigen::VectorXd r = residual(u);
    out.history.push_back(r.lpNorm<Eigen::Infinity>());
    for (int it = 0; it < opt.newton_max_iter; ++it) {
        if (r.lpNorm<Eigen::Infinity>() <= opt.newton_tol) {
            out.converged = true;
            break;
        }
        const GradientGraphPatch current(g, u);
        std::vector<Eigen::Triplet<Real>> trip;
        trip.reserve(m * (2 * n * n + 1));
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t p = unknowns[k];
            const MatrixN M = phase_operator_gradient(hessian_at(current, p));
            auto add = [&](std::size_t q, Real w) {
                const long col = unknown_slot[q];
                if (col >= 0) trip.emplace_back(static_cast<int>(k), static_cast<int>(col), w);
            };
            for (int a = 0; a < n; ++a) {
                const Real ha = g.spacing()(a);
                const std::size_t pa = g.shifted(p, a, 1), ma = g.shifted(p, a, -1);
                add(p, -2 * M(a, a) / (ha * ha));
                add(pa, M(a, a) / (ha * ha));
                add(ma, M(a, a) / (ha * ha));
                for (int b = a + 1; b < n; ++b) {
                    const Real w = 2 * M(a, b) / (4 * ha * g.spacing()(b));
                    add(g.shifted(pa, b, 1), w);
                    add(g.shifted(ma, b, -1), w);
                    add(g.shifted(pa, b, -1), -w);
                    add(g.shifted(ma, b, 1), -w);
                }
            }
        }
        Eigen::SparseMatrix<Real> jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        jac.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<Real>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) break;
        const Eigen::VectorXd step = lu.solve(-r);

        const Real r0 = r.norm();
        Real t = 1;
        bool accepted = false;
        for (int k = 0; k <= opt.armijo_halvings; ++k) {
            std::vector<Real> trial_u = u;
            for (std::size_t j = 0; j < m; ++j) trial_u[unknowns[j]] += t * step(static_cast<Eigen::Index>(j));
            const Eigen::VectorXd tr = residual(trial_u);
            if (tr.norm() <= (1 - opt.armijo_c * t) * r0) {
                u = std::move(trial_u);
                r = tr;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // At round-off level no step can reduce the residual further.
            out.converged = r.lpNorm<Eigen::Infinity>() <= std::max(opt.newton_tol, 1e-10);
            break;
        }
        out.history.push_back(r.lpNorm<Eigen::Infinity>());
    }
    if (!out.converged) out.converged = r.lpNorm<Eigen::Infinity>() <= opt.newton_tol;
    patch = GradientGraphPatch(g, std::move(u));
    return out;
}

void check_window(const GradientGraphPatch& patch, Real angle) {
    const Grid& g = patch.grid();
    const Real limit = std::tan(angle);
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (g.margin(p) < 1) continue;
        const auto eig = jacobi_eigen(hessian_at(patch, p));
        const Real worst = std::max(std::abs(eig.values(0)), std::abs(eig.values(g.dim() - 1)));
        if (!(worst < limit))
            throw WindowError("Hessian eigenvalue " + std::to_string(worst) + " at sample " + std::to_string(p) +
                              " leaves the elliptic window |lambda| < " + std::to_string(limit));
    }
}

// Quasi-Newton step of the coupled scheme: J = W P with W the frozen-metric
// Laplace-Beltrami rows (unknowns x margin>=1 nodes) and P the linearised
// phase operator (margin>=1 nodes x unknowns).
struct CoupledSystem {
    Eigen::SparseMatrix<Real> W, P;
    Eigen::VectorXd theta;
};

CoupledSystem linearise(const GradientGraphPatch& patch, const std::vector<std::size_t>& unknowns,
                        const std::vector<long>& slot, const std::vector<std::size_t>& ring,
                        const std::vector<long>& ring_slot, const Offsets& offs) {
    const Grid& g = patch.grid();
    const int n = g.dim();
    CoupledSystem sys;
    const Stencil st = build_stencil(patch, unknowns, offs);
    std::vector<Eigen::Triplet<Real>> tw;
    for (std::size_t r = 0; r < unknowns.size(); ++r) {
        tw.emplace_back(static_cast<int>(r), static_cast<int>(ring_slot[unknowns[r]]), st.diagonal[r]);
        for (std::size_t k = 0; k < st.columns[r].size(); ++k)
            tw.emplace_back(static_cast<int>(r), static_cast<int>(ring_slot[st.columns[r][k]]), st.weights[r][k]);
    }
    sys.W.resize(static_cast<Eigen::Index>(unknowns.size()), static_cast<Eigen::Index>(ring.size()));
    sys.W.setFromTriplets(tw.begin(), tw.end());

    std::vector<Eigen::Triplet<Real>> tp;
    sys.theta.resize(static_cast<Eigen::Index>(ring.size()));
    for (std::size_t k = 0; k < ring.size(); ++k) {
        const std::size_t q = ring[k];
        const MatrixN hess = hessian_at(patch, q);
        sys.theta(static_cast<Eigen::Index>(k)) = lagrangian_phase(hess);
        const MatrixN M = phase_operator_gradient(hess);
        auto add = [&](std::size_t node, Real w) {
            const long col = slot[node];
            if (col >= 0) tp.emplace_back(static_cast<int>(k), static_cast<int>(col), w);
        };
        for (int a = 0; a < n; ++a) {
            const Real ha = g.spacing()(a);
            const std::size_t pa = g.shifted(q, a, 1), ma = g.shifted(q, a, -1);
            add(q, -2 * M(a, a) / (ha * ha));
            add(pa, M(a, a) / (ha * ha));
            add(ma, M(a, a) / (ha * ha));
            for (int b = a + 1; b < n; ++b) {
                const Real w = 2 * M(a, b) / (4 * ha * g.spacing()(b));
                add(g.shifted(pa, b, 1), w);
                add(g.shifted(ma, b, -1), w);
                add(g.shifted(pa, b, -1), -w);
                add(g.shifted(ma, b, 1), -w);
            }
        }
    }
    sys.P.resize(static_cast<Eigen::Index>(ring.size()), static_cast<Eigen::Index>(unknowns.size()));
    sys.P.setFromTriplets(tp.begin(), tp.end());
    return sys;
}

}  // namespace

std::vector<Real> transfinite_initial_guess(const Grid& g, const std::vector<Real>& boundary_u) {
    const int n = g.dim();
    if (boundary_u.size() != g.size()) throw InvalidInput("boundary data size does not match grid");
    std::vector<Real> u = boundary_u;
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (g.margin(p) < kCollar) continue;
        const GridIndex idx = g.unflatten(p);
        Real value = 0;
        for (int mask = 1; mask < (1 << n); ++mask) {
            // Multilinear interpolation along the axes in `mask` between the
            // margin-1 faces, inclusion-exclusion sign by subset size.
            const int bits = __builtin_popcount(static_cast<unsigned>(mask));
            Real term = 0;
            for (int corner = 0; corner < (1 << bits); ++corner) {
                GridIndex q = idx;
                Real w = 1;
                int bit = 0;
                for (int a = 0; a < n; ++a) {
                    if (!(mask & (1 << a))) continue;
                    const Real t = static_cast<Real>(idx[a] - 1) / (g.extent(a) - 3);
                    const bool hi = corner & (1 << bit);
                    q[a] = hi ? g.extent(a) - 2 : 1;
                    w *= hi ? t : 1 - t;
                    ++bit;
                }
                term += w * boundary_u[g.flatten(q)];
            }
            value += (bits % 2 == 1 ? 1 : -1) * term;
        }
        u[p] = value;
    }
    return u;
}

SolverReport solve_hs(const SolverProblem& problem) {
    return solve_hs(problem, GradientGraphPatch(problem.grid, transfinite_initial_guess(problem.grid, problem.boundary_u)));
}

SolverReport solve_hs(const SolverProblem& problem, const GradientGraphPatch& initial_u) {
    const Grid& g = problem.grid;
    const SolverOptions& opt = problem.options;
    const int n = g.dim();
    if (n < 1 || n > 3) throw InvalidInput("solver supports n in 1..3");
    if (problem.boundary_u.size() != g.size()) throw InvalidInput("boundary data size does not match grid");
    if (initial_u.grid().shape() != g.shape()) throw InvalidInput("initial patch grid does not match problem grid");
    if (!(opt.tol_residual > 0) || !(opt.linear_tol > 0) || opt.max_outer < 1)
        throw InvalidInput("solver tolerances must be positive");

    std::vector<Real> u0 = initial_u.values();
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (g.margin(p) >= kCollar) continue;
        if (std::abs(u0[p] - problem.boundary_u[p]) > 1e-12 * (1 + std::abs(problem.boundary_u[p])))
            throw InvalidInput("initial_u does not match the boundary collar at sample " + std::to_string(p));
        u0[p] = problem.boundary_u[p];
    }

    std::vector<std::size_t> unknowns, ring;
    std::vector<long> slot(g.size(), -1), ring_slot(g.size(), -1);
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (g.margin(p) >= 1) {
            ring_slot[p] = static_cast<long>(ring.size());
            ring.push_back(p);
        }
        if (g.margin(p) >= kCollar) {
            slot[p] = static_cast<long>(unknowns.size());
            unknowns.push_back(p);
        }
    }
    if (unknowns.empty()) throw InvalidInput("grid has no interior unknowns");

    SolverReport rep;
    Real umax = 0;
    for (Real x : problem.boundary_u) umax = std::max(umax, std::abs(x));
    const Real hmin = g.spacing().minCoeff();
    rep.effective_tolerance =
        std::max(opt.tol_residual, 10 * std::numeric_limits<Real>::epsilon() * std::max<Real>(umax, 1) / std::pow(hmin, 4));

    GradientGraphPatch patch(g, std::move(u0));
    check_window(patch, opt.window_angle);
    const Offsets offs = unit_cube_offsets(n);
    std::vector<Real> v(g.size(), 0);
    for (std::size_t p = 0; p < g.size(); ++p)
        if (g.margin(p) >= 1) v[p] = phase_at(patch, p);

    auto residual_of = [&](const GradientGraphPatch& pt) {
        const GeometryReport geo = analyze(pt);
        return geo.max_abs_interior(geo.phase_residual);
    };
    // Frozen-metric harmonic extension of the margin-1 phase, warm-started.
    auto phase_match = [&](const GradientGraphPatch& pt) {
        for (std::size_t p = 0; p < g.size(); ++p)
            if (g.margin(p) == 1) v[p] = phase_at(pt, p);
        const Stencil st = build_stencil(pt, unknowns, offs);
        rep.linear_sweeps.push_back(phase_solve(g, st, v, opt));
        Real worst = 0;
        for (std::size_t p : unknowns) worst = std::max(worst, std::abs(phase_at(pt, p) - v[p]));
        return worst;
    };

    GradientGraphPatch best = patch;
    Real best_residual = residual_of(patch);
    Real current_residual = best_residual;
    for (int outer = 1; outer <= opt.max_outer; ++outer) {
        bool step_ok = true;
        if (opt.scheme == SolverScheme::Alternating) {
            rep.phase_match_history.push_back(phase_match(patch));
            NewtonOutcome nw = newton_solve(patch, unknowns, slot, v, opt);
            for (std::size_t k = 1; k < nw.history.size(); ++k)
                if (nw.history[k] > nw.history[k - 1]) rep.newton_monotone = false;
            rep.newton_histories.push_back(std::move(nw.history));
            step_ok = nw.converged;
        } else {
            const CoupledSystem sys = linearise(patch, unknowns, slot, ring, ring_slot, offs);
            const Eigen::VectorXd r = sys.W * sys.theta;
            const Eigen::SparseMatrix<Real> jac = sys.W * sys.P;
            Eigen::SparseLU<Eigen::SparseMatrix<Real>> lu;
            lu.compute(jac);
            if (lu.info() != Eigen::Success) {
                rep.message = "singular linearisation at outer iteration " + std::to_string(outer);
                break;
            }
            const Eigen::VectorXd step = lu.solve(-r);
            const Real r0 = r.norm();
            Real t = 1;
            step_ok = false;
            for (int k = 0; k <= opt.armijo_halvings; ++k) {
                std::vector<Real> trial = patch.values();
                for (std::size_t j = 0; j < unknowns.size(); ++j) trial[unknowns[j]] += t * step(static_cast<Eigen::Index>(j));
                GradientGraphPatch trial_patch(g, std::move(trial));
                const CoupledSystem ts = linearise(trial_patch, unknowns, slot, ring, ring_slot, offs);
                if ((ts.W * ts.theta).norm() <= (1 - opt.armijo_c * t) * r0) {
                    patch = std::move(trial_patch);
                    step_ok = true;
                    break;
                }
                t *= 0.5;
            }
            rep.phase_match_history.push_back(phase_match(patch));
        }
        check_window(patch, opt.window_angle);

        const Real residual = residual_of(patch);
        if (residual > current_residual) rep.residual_monotone = false;
        current_residual = residual;
        rep.residual_history.push_back(residual);
        rep.outer_iterations = outer;
        if (residual < best_residual) {
            best_residual = residual;
            best = patch;
        }
        if (residual < rep.effective_tolerance) {
            rep.converged = true;
            break;
        }
        if (!step_ok) {
            rep.message = "line search exhausted at outer iteration " + std::to_string(outer);
            break;
        }
    }
    if (rep.converged) {
        rep.solution = patch;
        rep.message = "converged";
    } else {
        rep.solution = best;
        if (rep.message.empty()) rep.message = "max_outer reached";
    }
    return rep;
}

}  // namespace hslab
