#include "hslab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hslab {

namespace {

Real dot_jdf_h(const FieldJet& j, const Vector2N& h) { return complex_structure(j.grad).dot(h); }

// Least-squares slope of log y against log x.
Real loglog_slope(const std::vector<Real>& x, const std::vector<Real>& y) {
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0)) continue;
        const Real lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return std::numeric_limits<Real>::quiet_NaN();
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void check_radii(const VarifoldSample& sample, const std::vector<Real>& radii) {
    if (radii.empty()) throw InvalidInput("radius list is empty");
    const Real scale = sample.resolution_scale();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0)) throw DomainError("radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1])) throw InvalidInput("radii must be strictly decreasing");
        if (radii[i] < 5 * scale)
            throw ResolutionError("radius " + std::to_string(radii[i]) + " is below 5x the sample resolution " +
                                  std::to_string(scale));
    }
}

Real distance_to_set(const Vector2N& x, const std::vector<Vector2N>& N) {
    Real d = std::numeric_limits<Real>::infinity();
    for (const auto& y : N) d = std::min(d, (x - y).norm());
    return d;
}

// Farthest-point ordering, then greedy selection of pairwise >= 2 eps
// separated centres: a maximal family of disjoint eps-balls.
int greedy_disjoint_count(const std::vector<Vector2N>& N, Real eps) {
    if (N.empty()) return 0;
    std::vector<std::size_t> order{0};
    std::vector<Real> dist(N.size(), std::numeric_limits<Real>::infinity());
    std::vector<char> used(N.size(), 0);
    used[0] = 1;
    for (std::size_t step = 1; step < N.size(); ++step) {
        const Vector2N& last = N[order.back()];
        std::size_t far = 0;
        Real best = -1;
        for (std::size_t i = 0; i < N.size(); ++i) {
            if (used[i]) continue;
            dist[i] = std::min(dist[i], (N[i] - last).norm());
            if (dist[i] > best) {
                best = dist[i];
                far = i;
            }
        }
        used[far] = 1;
        order.push_back(far);
    }
    std::vector<std::size_t> chosen;
    for (std::size_t i : order) {
        bool ok = true;
        for (std::size_t c : chosen)
            if ((N[i] - N[c]).norm() < 2 * eps) {
                ok = false;
                break;
            }
        if (ok) chosen.push_back(i);
    }
    return static_cast<int>(chosen.size());
}

}  // namespace

FirstVariation first_variation(const VarifoldSample& sample, const ScalarField& f) {
    sample.validate();
    FirstVariation out;
    const int n = sample.dim;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const FieldJet j = f.eval(sample.points[i]);
        out.mean_curvature_form += sample.weights[i] * dot_jdf_h(j, sample.mean_curv[i]);
        // div_T(J Df) = sum_a <e_a, J D^2f e_a>
        Real div = 0;
        for (int a = 0; a < n; ++a) {
            const Eigen::VectorXd e = sample.tangents[i].col(a);
            div += e.dot(complex_structure(j.hess * e));
        }
        out.divergence_form -= sample.weights[i] * div;
    }
    out.gap = std::abs(out.mean_curvature_form - out.divergence_form);
    return out;
}

DensityAudit density_ratio_audit(const VarifoldSample& sample, const Vector2N& center, const std::vector<Real>& radii,
                                 Real trend_tolerance) {
    sample.validate();
    check_radii(sample, radii);
    const int n = sample.dim;
    if (center.size() != 2 * n) throw InvalidInput("centre is not in R^{2n}");
    DensityAudit out;
    out.omega_n = unit_ball_volume(n);
    std::vector<Real> dist(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) dist[i] = (sample.points[i] - center).norm();
    for (Real rho : radii) {
        DensityRow row;
        row.radius = rho;
        for (std::size_t i = 0; i < sample.size(); ++i)
            if (dist[i] <= rho) row.mass += sample.weights[i];
        row.ratio = row.mass / std::pow(rho, n);
        row.bound_unit = std::pow(std::abs(std::log(rho)) + 1, n) * std::pow(rho, n);
        out.fitted_constant = std::max(out.fitted_constant, row.mass / row.bound_unit);
        out.rows.push_back(row);
    }
    if (n >= 2) {
        for (int k = 0; k <= n - 2; ++k) {
            const Real e = k + static_cast<Real>(n) / (n - 1);
            std::vector<Real> xs, ys;
            for (const auto& row : out.rows) {
                xs.push_back(row.radius);
                ys.push_back(row.mass / std::pow(row.radius, e));
            }
            const Real slope = loglog_slope(xs, ys);
            out.trend_slopes.push_back(slope);
            if (std::isfinite(slope) && slope < -trend_tolerance) out.trend_ok = false;
        }
    }
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::NotApplicable: return "not-applicable";
    }
    return "unknown";
}

EpsRegularity eps_regularity_check(const GeometryReport& report, const VectorN& center, Real r0, Real epsilon0,
                                   Real tol) {
    if (!(r0 > 0)) throw DomainError("ball radius must be positive");
    if (!(epsilon0 > 0)) throw DomainError("epsilon0 must be positive");
    const Grid& g = report.grid;
    const int n = g.dim();
    if (center.size() != n) throw InvalidInput("centre dimension does not match the report");
    for (int a = 0; a < n; ++a) {
        const Real lo = g.origin()(a) + 2 * g.spacing()(a);
        const Real hi = g.origin()(a) + (g.extent(a) - 3) * g.spacing()(a);
        if (center(a) - r0 < lo - 0.5 * g.spacing()(a) || center(a) + r0 > hi + 0.5 * g.spacing()(a))
            throw InvalidInput("ball B_r0 is not inside the interior samples of the report");
    }
    EpsRegularity out;
    out.bound = (kPi / 24) * (kPi / 24);
    const Real cell = g.cell_volume();
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (!report.interior_mask[p]) continue;
        const VectorN y = g.coordinate(p);
        const Real d = (y - center).norm();
        if (d > r0) continue;
        out.total_curvature += std::pow(report.sff_norm[p], n) * report.volume_element[p] * cell;
        const Real sigma = r0 - d;
        const Real value = sigma * sigma * report.sff_norm[p] * report.sff_norm[p];
        if (value > out.worst || out.witness.size() == 0) {
            out.worst = value;
            out.witness = y;
            out.witness_sigma = sigma;
        }
    }
    out.margin = out.bound - out.worst;
    if (!(out.total_curvature < epsilon0))
        out.verdict = Verdict::NotApplicable;
    else
        out.verdict = out.worst <= out.bound + tol ? Verdict::Pass : Verdict::Fail;
    return out;
}

CoveringBudget covering_budget(int n, Real C1, Real C2, Real A_bound, Real epsilon0) {
    if (n < 1 || n > kMaxDim) throw DomainError("dimension must be in 1..8");
    if (!(C1 > 0) || !(C2 > 0) || !(A_bound > 0) || !(epsilon0 > 0))
        throw DomainError("budget inputs must be positive");
    CoveringBudget b;
    b.n = n;
    b.C1 = C1;
    b.C2 = C2;
    b.A_bound = A_bound;
    b.epsilon0 = epsilon0;
    b.omega_n = unit_ball_volume(n);
    b.r1 = graphical_radius(A_bound).radius;
    const Real s = std::sin(kPi / 12);
    b.r1_smooth = kPi * (1 - 4 * s * s) * std::cos(kPi / 12) / (12 * A_bound * 8);
    b.good_balls = C1 / (b.omega_n * std::pow(b.r1, n));
    b.bad_balls = C2 / epsilon0;
    b.R0 = b.good_balls + b.bad_balls;
    return b;
}

NeighborhoodVolume neighborhood_volume_estimate(const VarifoldSample& sample, const std::vector<Vector2N>& N,
                                                const std::vector<Real>& radii, int k, Real C2, Real C3, Real C4,
                                                Real exponent_tolerance) {
    sample.validate();
    const int n = sample.dim;
    if (k != 0) throw DomainError("only finite point sets (k = 0) are supported");
    if (n < 2) throw DomainError("the neighbourhood estimate needs n >= 2");
    if (N.empty()) throw InvalidInput("point set N is empty");
    if (!(C2 > 0) || !(C3 > 0) || !(C4 > 0)) throw DomainError("constants must be positive");
    for (const auto& y : N)
        if (y.size() != 2 * n) throw InvalidInput("point of N is not in R^{2n}");
    check_radii(sample, radii);

    NeighborhoodVolume out;
    out.exponent_required = static_cast<Real>(n) / (n - 1);
    std::vector<Real> dist(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) dist[i] = distance_to_set(sample.points[i], N);
    std::vector<Real> xs, ys;
    out.vanishing = true;
    for (Real eps : radii) {
        NeighborhoodRow row;
        row.epsilon = eps;
        for (std::size_t i = 0; i < sample.size(); ++i)
            if (dist[i] <= eps) row.measured += sample.weights[i];
        row.disjoint_count = greedy_disjoint_count(N, eps);
        row.ceiling = row.disjoint_count * C4 * C2 * std::pow(3 * eps, out.exponent_required);
        row.uniform_ceiling = (static_cast<Real>(N.size()) / C3) * C4 * C2 * std::pow(3.0, out.exponent_required) *
                              std::pow(eps, out.exponent_required);
        row.within = row.measured <= row.ceiling;
        if (row.measured > 0) out.vanishing = false;
        xs.push_back(eps);
        ys.push_back(row.measured);
        out.rows.push_back(row);
    }
    out.fitted_exponent = loglog_slope(xs, ys);
    out.decay_ok = out.vanishing ||
                   (std::isfinite(out.fitted_exponent) && out.fitted_exponent >= out.exponent_required - exponent_tolerance);
    return out;
}

CutoffAudit cutoff_first_variation_audit(const VarifoldSample& sample, const std::vector<Vector2N>& N,
                                         const ScalarField& f, const std::vector<Real>& radii) {
    sample.validate();
    check_radii(sample, radii);
    if (N.empty()) throw InvalidInput("point set N is empty");
    const int n = sample.dim;
    const std::size_t m = sample.size();
    std::vector<FieldJet> jets(m);
    std::vector<Real> dist(m);
    std::vector<Vector2N> nearest(m);
    Real sup_df = 0, sup_f = 0, full = 0;
    for (std::size_t i = 0; i < m; ++i) {
        jets[i] = f.eval(sample.points[i]);
        sup_df = std::max(sup_df, jets[i].grad.norm());
        sup_f = std::max(sup_f, std::abs(jets[i].value));
        full += sample.weights[i] * dot_jdf_h(jets[i], sample.mean_curv[i]);
        dist[i] = std::numeric_limits<Real>::infinity();
        for (const auto& y : N) {
            const Real d = (sample.points[i] - y).norm();
            if (d < dist[i]) {
                dist[i] = d;
                nearest[i] = y;
            }
        }
    }
    CutoffAudit out;
    out.C_f = std::max(sup_df, 2 * sup_f);
    out.all_within = true;
    out.gap_decreasing = true;
    for (Real eps : radii) {
        CutoffRow row;
        row.epsilon = eps;
        row.full = full;
        Real h_n = 0, mu = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const Real d = dist[i];
            Real phi = 1;
            Vector2N dphi = Vector2N::Zero(2 * n);
            if (d <= 0.5 * eps) {
                phi = 0;
            } else if (d < eps) {
                phi = (d - 0.5 * eps) * 2 / eps;
                dphi = (2 / eps) * (sample.points[i] - nearest[i]) / d;
            }
            const Real base = dot_jdf_h(jets[i], sample.mean_curv[i]);
            const Real ann = jets[i].value * complex_structure(dphi).dot(sample.mean_curv[i]);
            row.cut += sample.weights[i] * phi * base;
            row.annulus_term += sample.weights[i] * ann;
            row.cut_derivative += sample.weights[i] * (phi * base + ann);
            if (d <= eps) {
                mu += sample.weights[i];
                h_n += sample.weights[i] * std::pow(sample.mean_curv[i].norm(), n);
            }
        }
        row.gap = std::abs(row.full - row.cut);
        row.derivative_gap = std::abs(row.full - row.cut_derivative);
        row.ceiling = out.C_f * (1 + 1 / eps) * std::pow(h_n, 1.0 / n) * std::pow(mu, (n - 1.0) / n);
        row.ok = row.gap <= row.ceiling && row.derivative_gap <= row.ceiling;
        out.all_within = out.all_within && row.ok;
        if (!out.rows.empty() && row.gap > out.rows.back().gap) out.gap_decreasing = false;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace hslab
