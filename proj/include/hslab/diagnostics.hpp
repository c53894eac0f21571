#pragma once

// Varifold-level checks: first variation against Hamiltonian fields J Df,
// density ratios, epsilon-regularity, covering budgets, volume of
// neighbourhoods of a finite set and the cutoff first-variation audit.

#include "hslab/common.hpp"
#include "hslab/fields.hpp"
#include "hslab/graph_calculus.hpp"
#include "hslab/varifold.hpp"

#include <string>
#include <vector>

namespace hslab {

struct FirstVariation {
    Real mean_curvature_form = 0;  // sum w <J Df, H>
    Real divergence_form = 0;      // -sum w div_T(J Df)
    Real gap = 0;
};

/// Both expressions of delta(J Df) = -int div X = int <H, X>. The tangential
/// divergence uses the closed-form Hessian of f.
FirstVariation first_variation(const VarifoldSample& sample, const ScalarField& f);

struct DensityRow {
    Real radius = 0;
    Real mass = 0;
    Real ratio = 0;       // mu(B_rho) / rho^n
    Real bound_unit = 0;  // (|ln rho| + 1)^n rho^n
};

struct DensityAudit {
    std::vector<DensityRow> rows;
    Real omega_n = 0;
    /// Smallest C with mu(B_rho) <= C (|ln rho| + 1)^n rho^n on the list.
    Real fitted_constant = 0;
    /// For n >= 2 and k = 0..n-2: log-log slope of rho^{-k-n/(n-1)} mu(B_rho)
    /// against rho. A negative slope means the quantity grows as rho -> 0.
    std::vector<Real> trend_slopes;
    bool trend_ok = true;
};

/// `radii` strictly decreasing, each at least 5x the sample's resolution
/// scale (ResolutionError otherwise). Balls are closed.
DensityAudit density_ratio_audit(const VarifoldSample& sample, const Vector2N& center, const std::vector<Real>& radii,
                                 Real trend_tolerance = 0.05);

enum class Verdict { Pass, Fail, NotApplicable };
std::string to_string(Verdict v);

struct EpsRegularity {
    Verdict verdict = Verdict::NotApplicable;
    Real total_curvature = 0;  // int_{B_r0} |A|^n dmu
    Real bound = 0;            // (pi/24)^2
    Real worst = 0;            // sup over y, sigma of sigma^2 |A(y)|^2
    VectorN witness;
    Real witness_sigma = 0;
    Real margin = 0;           // bound - worst
};

/// Checks sigma^2 |A(y)|^2 <= (pi/24)^2 + tol for y in B_{r0 - sigma}(x0),
/// 0 < sigma <= r0, whenever int_{B_r0}|A|^n < epsilon0. The supremum over
/// sigma is attained at sigma = r0 - |y - x0|. The ball must lie inside the
/// interior samples of the report.
EpsRegularity eps_regularity_check(const GeometryReport& report, const VectorN& center, Real r0, Real epsilon0 = 1e-2,
                                   Real tolerance = 1e-12);

struct CoveringBudget {
    int n = 0;
    Real epsilon0 = 0, C1 = 0, C2 = 0, A_bound = 0;
    Real omega_n = 0;
    Real r1 = 0;         // graphical radius pi/(12 A) cos(pi/12): enters the good-ball count
    Real r1_smooth = 0;  // pi (1 - 4 sin^2(pi/12)) cos(pi/12) / (12 A 8): radius of the C^{4,alpha} bound
    Real good_balls = 0; // C1 / (omega_n r1^n)
    Real bad_balls = 0;  // C2 / epsilon0
    Real R0 = 0;
};

CoveringBudget covering_budget(int n, Real C1, Real C2, Real A_bound, Real epsilon0 = 1e-2);

struct NeighborhoodRow {
    Real epsilon = 0;
    Real measured = 0;       // mu(U_eps)
    int disjoint_count = 0;  // greedy maximal family of disjoint eps-balls centred on N
    Real ceiling = 0;        // l C4 C2 (3 eps)^{n/(n-1)}
    Real uniform_ceiling = 0;  // (|N| / C3) C4 C2 3^{n/(n-1)} eps^{n/(n-1)}
    bool within = false;
};

struct NeighborhoodVolume {
    std::vector<NeighborhoodRow> rows;
    Real exponent_required = 0;  // n/(n-1)
    Real fitted_exponent = 0;    // log-log slope of mu(U_eps); NaN when it vanishes
    bool vanishing = false;      // mu(U_eps) = 0 on every radius
    bool decay_ok = false;
};

/// k = 0 only (N a finite point set), n >= 2.
NeighborhoodVolume neighborhood_volume_estimate(const VarifoldSample& sample, const std::vector<Vector2N>& N,
                                                const std::vector<Real>& radii, int k, Real C2, Real C3, Real C4,
                                                Real exponent_tolerance = 0.05);

struct CutoffRow {
    Real epsilon = 0;
    Real full = 0;            // sum w <J Df, H>
    Real cut = 0;             // sum w phi <J Df, H>
    Real gap = 0;             // |full - cut|
    Real cut_derivative = 0;  // sum w <J D(phi f), H>
    Real derivative_gap = 0;  // |full - cut_derivative|
    Real annulus_term = 0;    // sum w f <J D phi, H>
    Real ceiling = 0;         // C(f) (1 + 1/eps) (int_{U_eps}|H|^n)^{1/n} mu(U_eps)^{(n-1)/n}
    bool ok = false;
};

struct CutoffAudit {
    std::vector<CutoffRow> rows;
    Real C_f = 0;  // max(sup|Df|, 2 sup|f|) over the sample
    bool all_within = false;
    bool gap_decreasing = false;
};

/// phi_eps(x) is 0 for dist(x, N) <= eps/2, 1 for dist >= eps, linear in
/// between (slope 2/eps).
CutoffAudit cutoff_first_variation_audit(const VarifoldSample& sample, const std::vector<Vector2N>& N,
                                         const ScalarField& f, const std::vector<Real>& radii);

}  // namespace hslab
