#include "hslab/curve_lab.hpp"

#include "hslab/immersion_calculus.hpp"
#include "hslab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hslab {

namespace {

Real angle_of(const Vector2& v) { return std::atan2(v.y(), v.x()); }

Eigen::Vector2d rotate_quarter(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

}  // namespace

CurveImmersion::CurveImmersion(std::vector<Vector2> vertices, int multiplicity)
    : vertices_(std::move(vertices)), multiplicity_(multiplicity) {
    if (vertices_.size() < 8) throw InvalidInput("closed curve needs at least 8 vertices");
    if (multiplicity_ < 1) throw InvalidInput("multiplicity must be a positive integer");
    for (const auto& v : vertices_)
        if (!v.allFinite()) throw InvalidInput("non-finite curve vertex");
    const std::size_t k = vertices_.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Real edge = (vertices_[(i + 1) % k] - vertices_[i]).norm();
        if (!(edge > 0)) {
            if (i + 1 == k)
                throw DegenerateCurveError("first vertex repeated at the end; the closing edge is implicit");
            throw DegenerateCurveError("zero-length edge at vertex " + std::to_string(i));
        }
    }
}

Real CurveImmersion::length() const {
    Real total = 0;
    const std::size_t k = vertices_.size();
    for (std::size_t i = 0; i < k; ++i) total += (vertices_[(i + 1) % k] - vertices_[i]).norm();
    return total * multiplicity_;
}

CurveImmersion CurveImmersion::circle(Real radius, int samples, Vector2 center, int multiplicity) {
    if (!(radius > 0)) throw DomainError("circle radius must be positive");
    std::vector<Vector2> v(samples);
    for (int i = 0; i < samples; ++i) {
        const Real t = 2 * kPi * i / samples;
        v[i] = center + radius * Vector2(std::cos(t), std::sin(t));
    }
    return CurveImmersion(std::move(v), multiplicity);
}

CurveImmersion CurveImmersion::ellipse(Real a, Real b, int samples) {
    std::vector<Vector2> v(samples);
    for (int i = 0; i < samples; ++i) {
        const Real t = 2 * kPi * i / samples;
        v[i] = Vector2(a * std::cos(t), b * std::sin(t));
    }
    return CurveImmersion(std::move(v));
}

CurveResidual curve_phase_residual(const CurveImmersion& curve, Real tau_circle) {
    const auto& v = curve.vertices();
    const std::size_t k = v.size();
    std::vector<Real> edge(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Vector2 e = v[(i + 1) % k] - v[i];
        edge[i] = e.norm();
        const Vector2 prev = v[i] - v[(i + k - 1) % k];
        const Real turn = wrap_angle(angle_of(e) - angle_of(prev));
        // A doubled-back vertex means the polyline is an open arc traversed
        // twice, not a closed immersed curve.
        if (std::abs(turn) > kPi - 1e-9)
            throw PreconditionError("closed-curve precondition violated: polyline reverses at vertex " +
                                    std::to_string(i));
    }

    CurveResidual out;
    out.phase.resize(k);
    std::vector<Real> dtheta(k);
    Real prev = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const Real raw = angle_of(v[(i + 1) % k] - v[(i + k - 1) % k]) + 0.5 * kPi;
        out.phase[i] = i == 0 ? raw : prev + wrap_angle(raw - prev);
        prev = out.phase[i];
    }
    for (std::size_t i = 0; i < k; ++i) dtheta[i] = wrap_angle(out.phase[(i + 1) % k] - out.phase[i]);

    out.residual.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t im = (i + k - 1) % k;
        out.residual[i] = 2 * (dtheta[i] / edge[i] - dtheta[im] / edge[im]) / (edge[i] + edge[im]);
        out.max_residual = std::max(out.max_residual, std::abs(out.residual[i]));
    }
    Real length = 0;
    for (Real e : edge) length += e;
    out.length = length;
    const Real r_eff = length / (2 * kPi);
    out.scaled_residual = out.max_residual * r_eff * r_eff;
    const Real ratio = 256.0 / static_cast<Real>(k);
    out.threshold = tau_circle * ratio * ratio;
    out.circle_like = out.scaled_residual <= out.threshold;
    return out;
}

void RayConfiguration::validate() const {
    if (rays.empty()) throw InvalidInput("ray configuration is empty");
    if (!(truncation_radius > 0)) throw DomainError("truncation radius must be positive");
    for (const auto& r : rays) {
        if (std::abs(r.direction.norm() - 1) > 1e-12) throw InvalidInput("ray direction is not a unit vector");
        if (r.multiplicity < 1) throw InvalidInput("ray multiplicity must be >= 1");
    }
}

RayVariation ray_first_variation(const RayConfiguration& config, const ScalarField& f) {
    config.validate();
    const Real radius = config.truncation_radius;
    Eigen::Vector2d weighted = Eigen::Vector2d::Zero();
    RayVariation out;
    for (const auto& ray : config.rays) {
        const Eigen::Vector2d eta = ray.direction;
        const FieldJet end = f.eval(radius * eta);
        if (std::abs(end.value) + end.grad.norm() > 1e-12)
            throw SupportViolationError("test function does not vanish at the truncation radius");
        // div_gamma X = <(DX) eta, eta>, with DX = J D^2 f.
        const Real integral = integrate(
            [&](Real s) {
                const FieldJet j = f.eval(s * eta);
                const Eigen::Vector2d hx = j.hess * eta;
                return rotate_quarter(hx).dot(eta);
            },
            0.0, radius);
        out.quadrature -= ray.multiplicity * integral;
        weighted += ray.multiplicity * eta;
    }
    const FieldJet origin = f.eval(Eigen::Vector2d::Zero());
    out.closed_form = rotate_quarter(origin.grad).dot(weighted);
    return out;
}

MultiplicityResult detect_multiplicity(const std::vector<Vector2>& samples, Real relative_tolerance) {
    const std::size_t count = samples.size();
    if (count == 0) throw InvalidInput("no samples");
    Real diameter = 0;
    for (const auto& a : samples)
        for (std::size_t j = 0; j < count; j += std::max<std::size_t>(1, count / 64))
            diameter = std::max(diameter, (a - samples[j]).norm());
    const Real tol = relative_tolerance * std::max(diameter, std::numeric_limits<Real>::min());

    MultiplicityResult out;
    for (std::size_t m = count; m >= 2; --m) {
        if (count % m != 0) continue;
        const std::size_t shift = count / m;
        bool periodic = true;
        for (std::size_t j = 0; j < count && periodic; ++j)
            periodic = (samples[(j + shift) % count] - samples[j]).norm() <= tol;
        if (periodic) {
            out.multiplicity = static_cast<int>(m);
            break;
        }
    }
    const std::size_t base = count / static_cast<std::size_t>(out.multiplicity);
    out.reduced.assign(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(base));
    return out;
}

std::vector<CurveComponent> split_components(const CurveImmersion& curve, const Vector2& center, Real radius) {
    if (!(radius > 0)) throw DomainError("ball radius must be positive");
    const auto& v = curve.vertices();
    const std::size_t k = v.size();
    const Real r2 = radius * radius;

    struct Interval {
        Real begin, end;
    };
    std::vector<Interval> pieces;
    for (std::size_t i = 0; i < k; ++i) {
        const Vector2 p = v[i] - center;
        const Vector2 d = v[(i + 1) % k] - v[i];
        const Real a = d.squaredNorm();
        const Real b = 2 * d.dot(p);
        const Real c = p.squaredNorm() - r2;
        const Real disc = b * b - 4 * a * c;
        if (disc <= 0) continue;
        const Real sq = std::sqrt(disc);
        const Real s0 = std::max(0.0, (-b - sq) / (2 * a));
        const Real s1 = std::min(1.0, (-b + sq) / (2 * a));
        if (s1 <= s0) continue;
        pieces.push_back({static_cast<Real>(i) + s0, static_cast<Real>(i) + s1});
    }

    // Merge pieces that meet at an interior vertex.
    std::vector<Interval> merged;
    for (const auto& piece : pieces) {
        if (!merged.empty() && piece.begin == merged.back().end &&
            (v[static_cast<std::size_t>(piece.begin) % k] - center).squaredNorm() < r2)
            merged.back().end = piece.end;
        else
            merged.push_back(piece);
    }
    bool closed = false;
    if (merged.size() >= 2 && merged.front().begin == 0.0 && merged.back().end == static_cast<Real>(k) &&
        (v[0] - center).squaredNorm() < r2) {
        merged.front().begin = merged.back().begin - static_cast<Real>(k);
        merged.pop_back();
    } else if (merged.size() == 1 && merged.front().begin == 0.0 && merged.front().end == static_cast<Real>(k) &&
               (v[0] - center).squaredNorm() < r2) {
        closed = true;
    }

    auto point_at = [&](Real t) {
        Real tt = std::fmod(t, static_cast<Real>(k));
        if (tt < 0) tt += static_cast<Real>(k);
        const std::size_t i = std::min(static_cast<std::size_t>(tt), k - 1);
        const Real s = tt - static_cast<Real>(i);
        return Vector2(v[i] + s * (v[(i + 1) % k] - v[i]));
    };

    std::vector<CurveComponent> out;
    for (const auto& iv : merged) {
        CurveComponent comp;
        comp.parameter_begin = iv.begin;
        comp.parameter_end = iv.end;
        comp.closed = closed;
        comp.points.push_back(point_at(iv.begin));
        for (long j = static_cast<long>(std::floor(iv.begin)) + 1; j < iv.end; ++j)
            comp.points.push_back(v[static_cast<std::size_t>(((j % static_cast<long>(k)) + static_cast<long>(k)) %
                                                              static_cast<long>(k))]);
        if (!closed) comp.points.push_back(point_at(iv.end));
        out.push_back(std::move(comp));
    }
    return out;
}

ShrinkReport shrink_sequence_scenario(const std::vector<Real>& radii, const std::vector<int>& concentric_k, int samples,
                                      Real tau_circle) {
    ShrinkReport out;
    Real previous = std::numeric_limits<Real>::infinity();
    for (Real r : radii) {
        if (!(r > 0)) throw DomainError("radii must be positive");
        if (r > previous) out.lengths_decreasing = false;
        previous = r;
        const CurveImmersion c = CurveImmersion::circle(r, samples);
        const CurveResidual res = curve_phase_residual(c, tau_circle);
        ShrinkStep step;
        step.radius = r;
        step.length = c.length();
        step.exact_length = 2 * kPi * r;
        for (const auto& p : c.vertices()) step.hausdorff_to_limit = std::max(step.hausdorff_to_limit, p.norm());
        step.max_residual = res.max_residual;
        step.circle_like = res.circle_like;
        out.residuals_ok = out.residuals_ok && res.circle_like;
        if (!out.steps.empty() && !(step.length <= out.steps.back().length)) out.lengths_decreasing = false;
        out.steps.push_back(step);
    }
    for (int k : concentric_k) {
        if (k < 1) throw DomainError("concentric index must be >= 1");
        const Real r2 = 1 + 1.0 / k;
        ConcentricStep step;
        step.k = k;
        step.total_length = CurveImmersion::circle(1, samples).length() + CurveImmersion::circle(r2, samples).length();
        step.exact_total_length = 2 * kPi * (1 + r2);
        step.hausdorff_to_unit_circle = r2 - 1;
        out.concentric.push_back(step);
    }
    return out;
}

}  // namespace hslab
