#include "hslab/builders.hpp"

#include <cmath>

namespace hslab {

Grid box_grid(int n, Real lo, Real hi, int samples) {
    if (samples < 2) throw InvalidInput("need at least two samples per axis");
    return Grid(VectorN::Constant(n, lo), VectorN::Constant(n, (hi - lo) / (samples - 1)), std::vector<int>(n, samples));
}

MatrixN random_symmetric(std::mt19937_64& rng, int n, Real bound) {
    std::uniform_real_distribution<Real> eig(-bound, bound);
    std::normal_distribution<Real> normal;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = eig(rng);
    MatrixN out = q * d.asDiagonal() * q.transpose();
    return 0.5 * (out + out.transpose());
}

MatrixN dyadic_round(const MatrixN& q, int bits) {
    const Real scale = std::ldexp(1.0, bits);
    return (q * scale).array().round() / scale;
}

GradientGraphPatch flat_patch(int n, int samples, Real lo, Real hi) {
    const Grid g = box_grid(n, lo, hi, samples);
    return GradientGraphPatch(g, std::vector<Real>(g.size(), 0.0));
}

GradientGraphPatch quadratic_patch(const MatrixN& Q, int samples, Real lo, Real hi) {
    const Grid g = box_grid(static_cast<int>(Q.rows()), lo, hi, samples);
    return GradientGraphPatch::sample(g, [&](const VectorN& x) { return 0.5 * x.dot(Q * x); });
}

Real harmonic_cubic(const VectorN& x) { return (x(0) * x(0) * x(0) - 3 * x(0) * x(1) * x(1)) / 6; }

namespace {
int samples_for(Real h) {
    const Real cells = 1 / h;
    if (std::abs(cells - std::round(cells)) > 1e-9) throw DomainError("1/h must be an integer");
    return static_cast<int>(std::round(cells)) + 1;
}
}  // namespace

GradientGraphPatch harmonic_cubic_patch(Real h) {
    return GradientGraphPatch::sample(box_grid(2, -0.5, 0.5, samples_for(h)), harmonic_cubic);
}

GradientGraphPatch harmonic_exponential_patch(Real h, Real a) {
    return GradientGraphPatch::sample(box_grid(2, -0.5, 0.5, samples_for(h)),
                                      [a](const VectorN& x) { return a * std::exp(x(0)) * std::cos(x(1)); });
}

GradientGraphPatch gaussian_bump_patch(int n, int samples, Real delta, Real width) {
    return GradientGraphPatch::sample(box_grid(n, -0.5, 0.5, samples), [=](const VectorN& x) {
        return delta * std::exp(-x.squaredNorm() / (2 * width * width));
    });
}

std::vector<NamedPatch> builtin_patches() {
    MatrixN q(2, 2);
    q << 0.2, 0.05, 0.05, -0.1;
    return {
        {"flat", flat_patch(2, 65)},
        {"quadratic", quadratic_patch(q, 65)},
        {"harmonic-cubic", harmonic_cubic_patch(1.0 / 64)},
        {"harmonic-exponential", harmonic_exponential_patch(1.0 / 64)},
        {"gentle-bump", gaussian_bump_patch(2, 65, 1e-3, 0.25)},
        {"strong-bump", gaussian_bump_patch(2, 65, 0.05, 0.1)},
    };
}

ImmersedPatch product_torus_patch(const std::vector<Real>& radii, int m, int multiplicity) {
    const int n = static_cast<int>(radii.size());
    if (n < 1 || n > kMaxDim) throw InvalidInput("torus dimension must be in 1..8");
    for (Real r : radii)
        if (!(r > 0)) throw DomainError("torus radii must be positive");
    const Grid g(VectorN::Zero(n), VectorN::Constant(n, 2 * kPi / m), std::vector<int>(n, m));
    std::array<bool, kMaxDim> periodic{};
    for (int a = 0; a < n; ++a) periodic[a] = true;
    return ImmersedPatch::sample(
        g, periodic,
        [&](const VectorN& phi) {
            Vector2N z(2 * n);
            for (int a = 0; a < n; ++a) {
                z(a) = radii[a] * std::cos(phi(a));
                z(a + n) = radii[a] * std::sin(phi(a));
            }
            return z;
        },
        multiplicity);
}

}  // namespace hslab
