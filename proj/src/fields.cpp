#include "hslab/fields.hpp"

#include <array>
#include <cmath>

namespace hslab {

namespace {

// f(x) = g(|x - c|^2) for a profile g with derivatives (g, g', g'').
template <typename Profile>
FieldJet radial_jet(const Eigen::VectorXd& x, const Eigen::VectorXd& c, Profile&& profile) {
    const Eigen::VectorXd r = x - c;
    const Real s = r.squaredNorm();
    const auto [g0, g1, g2] = profile(s);
    FieldJet j;
    j.value = g0;
    j.grad = 2 * g1 * r;
    j.hess = 4 * g2 * r * r.transpose() + 2 * g1 * Eigen::MatrixXd::Identity(x.size(), x.size());
    return j;
}

class Gaussian final : public ScalarField {
public:
    Gaussian(Eigen::VectorXd c, Real sigma, Real amp) : c_(std::move(c)), sigma_(sigma), amp_(amp) {
        if (!(sigma > 0)) throw DomainError("gaussian width must be positive");
    }
    FieldJet eval(const Eigen::VectorXd& x) const override {
        const Real k = 1 / (2 * sigma_ * sigma_);
        return radial_jet(x, c_, [&](Real s) {
            const Real g = amp_ * std::exp(-k * s);
            return std::array<Real, 3>{g, -k * g, k * k * g};
        });
    }

private:
    Eigen::VectorXd c_;
    Real sigma_, amp_;
};

class Affine final : public ScalarField {
public:
    Affine(Eigen::VectorXd a, Real b) : a_(std::move(a)), b_(b) {}
    FieldJet eval(const Eigen::VectorXd& x) const override {
        FieldJet j;
        j.value = a_.dot(x) + b_;
        j.grad = a_;
        j.hess = Eigen::MatrixXd::Zero(x.size(), x.size());
        return j;
    }

private:
    Eigen::VectorXd a_;
    Real b_;
};

class Bump final : public ScalarField {
public:
    Bump(Eigen::VectorXd c, Real radius) : c_(std::move(c)), radius_(radius) {
        if (!(radius > 0)) throw DomainError("bump radius must be positive");
    }
    FieldJet eval(const Eigen::VectorXd& x) const override {
        const Real inv_r2 = 1 / (radius_ * radius_);
        return radial_jet(x, c_, [&](Real s) {
            const Real t = s * inv_r2;
            if (t >= 1) return std::array<Real, 3>{0, 0, 0};
            const Real q = 1 / (1 - t);
            const Real phi = std::exp(1 - q);
            const Real d1 = -phi * q * q;
            const Real d2 = phi * (q * q * q * q - 2 * q * q * q);
            return std::array<Real, 3>{phi, d1 * inv_r2, d2 * inv_r2 * inv_r2};
        });
    }
    Real support_radius() const override { return radius_; }
    Eigen::VectorXd support_center(int) const override { return c_; }

private:
    Eigen::VectorXd c_;
    Real radius_;
};

class Product final : public ScalarField {
public:
    Product(FieldPtr f, FieldPtr g) : f_(std::move(f)), g_(std::move(g)) {}
    FieldJet eval(const Eigen::VectorXd& x) const override {
        const FieldJet a = f_->eval(x), b = g_->eval(x);
        FieldJet j;
        j.value = a.value * b.value;
        j.grad = a.value * b.grad + b.value * a.grad;
        j.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() + b.grad * a.grad.transpose();
        return j;
    }
    Real support_radius() const override {
        return f_->support_radius() <= g_->support_radius() ? f_->support_radius() : g_->support_radius();
    }
    Eigen::VectorXd support_center(int dim) const override {
        return f_->support_radius() <= g_->support_radius() ? f_->support_center(dim) : g_->support_center(dim);
    }

private:
    FieldPtr f_, g_;
};

class Sum final : public ScalarField {
public:
    Sum(FieldPtr f, FieldPtr g) : f_(std::move(f)), g_(std::move(g)) {}
    FieldJet eval(const Eigen::VectorXd& x) const override {
        FieldJet a = f_->eval(x);
        const FieldJet b = g_->eval(x);
        a.value += b.value;
        a.grad += b.grad;
        a.hess += b.hess;
        return a;
    }

private:
    FieldPtr f_, g_;
};

class Scaled final : public ScalarField {
public:
    Scaled(FieldPtr f, Real c) : f_(std::move(f)), c_(c) {}
    FieldJet eval(const Eigen::VectorXd& x) const override {
        FieldJet a = f_->eval(x);
        a.value *= c_;
        a.grad *= c_;
        a.hess *= c_;
        return a;
    }
    Real support_radius() const override { return f_->support_radius(); }
    Eigen::VectorXd support_center(int dim) const override { return f_->support_center(dim); }

private:
    FieldPtr f_;
    Real c_;
};

}  // namespace

FieldPtr gaussian_field(Eigen::VectorXd center, Real sigma, Real amplitude) {
    return std::make_shared<Gaussian>(std::move(center), sigma, amplitude);
}
FieldPtr affine_field(Eigen::VectorXd a, Real b) { return std::make_shared<Affine>(std::move(a), b); }
FieldPtr compact_bump(Eigen::VectorXd center, Real radius) { return std::make_shared<Bump>(std::move(center), radius); }
FieldPtr product(FieldPtr f, FieldPtr g) { return std::make_shared<Product>(std::move(f), std::move(g)); }
FieldPtr sum(FieldPtr f, FieldPtr g) { return std::make_shared<Sum>(std::move(f), std::move(g)); }
FieldPtr scaled(FieldPtr f, Real c) { return std::make_shared<Scaled>(std::move(f), c); }

FieldPtr random_bump_field(std::mt19937_64& rng, const Eigen::VectorXd& support_center, Real support_radius) {
    const int d = static_cast<int>(support_center.size());
    std::uniform_real_distribution<Real> unit(-1.0, 1.0);
    std::uniform_real_distribution<Real> width(0.3, 0.8);
    Eigen::VectorXd c(d), a(d);
    for (int i = 0; i < d; ++i) {
        c(i) = support_center(i) + 0.5 * support_radius * unit(rng);
        a(i) = unit(rng);
    }
    const Real sigma = width(rng) * support_radius;
    FieldPtr g = gaussian_field(c, sigma, 1.0);
    FieldPtr lin = affine_field(a, unit(rng));
    return product(product(g, lin), compact_bump(support_center, support_radius));
}

}  // namespace hslab
