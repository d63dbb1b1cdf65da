#include "gcomp/model_space.hpp"

#include <algorithm>
#include <cmath>

namespace gcomp {

namespace {

constexpr double kPi = 3.14159265358979323846;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Minkowski form x0 y0 - x1 y1 - ... on the hyperboloid embedding.
double mdot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) s -= a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double lp_norm(const std::vector<double>& a, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (double v : a) s += std::abs(v);
        return s;
    }
    if (p == 2.0) return norm2(a);
    double s = 0.0;
    for (double v : a) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

std::vector<double> diff(const Point& a, const Point& b) {
    std::vector<double> d(a.x.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.x[i] - b.x[i];
    return d;
}

// Isometry of the quadratic form q taking unit vector a to unit vector b
// (composition of two q-reflections).  Callers guard q(a,b) near -1.
std::vector<double> rotate_unit(const std::vector<double>& a, const std::vector<double>& b,
                                const std::vector<double>& x, bool minkowski) {
    auto q = [&](const std::vector<double>& u, const std::vector<double>& v) {
        return minkowski ? mdot(u, v) : dot(u, v);
    };
    const double qab = q(a, b);
    const double qxa = q(x, a);
    const double qxb = q(x, b);
    std::vector<double> out(x);
    const double c = (qxa + qxb) / (1.0 + qab);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += -c * (a[i] + b[i]) + 2.0 * qxa * b[i];
    return out;
}

double unit_sphere_area(int n) {  // area of S^{n-1} in R^n
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double unit_ball_volume(int n) {
    return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

} // namespace

ModelSpace::ModelSpace(Kind k, int dim, double K, double p)
    : kind_(k), dim_(dim), K_(K), p_(p) {}

ModelSpace ModelSpace::euclidean(int dim) {
    if (dim < 1) throw InvalidInput("euclidean: dim >= 1 required");
    return ModelSpace(Kind::Euclidean, dim, 0.0, 2.0);
}

ModelSpace ModelSpace::sphere(int dim, double K) {
    if (dim < 1) throw InvalidInput("sphere: dim >= 1 required");
    if (!(K > 0.0)) throw InvalidInput("sphere: K > 0 required");
    return ModelSpace(Kind::Sphere, dim, K, 2.0);
}

ModelSpace ModelSpace::hyperbolic(int dim, double K) {
    if (dim < 1) throw InvalidInput("hyperbolic: dim >= 1 required");
    if (!(K < 0.0)) throw InvalidInput("hyperbolic: K < 0 required");
    return ModelSpace(Kind::Hyperbolic, dim, K, 2.0);
}

ModelSpace ModelSpace::normed_plane(double p) {
    if (!(p >= 1.0)) throw InvalidInput("normed_plane: p >= 1 required");
    return ModelSpace(Kind::NormedPlane, 2, 0.0, p);
}

int ModelSpace::embedding_dim() const {
    return (kind_ == Kind::Sphere || kind_ == Kind::Hyperbolic) ? dim_ + 1 : dim_;
}

CurvatureDimension ModelSpace::native_cd() const {
    if (kind_ == Kind::NormedPlane) return CurvatureDimension(0.0, 2.0);
    return CurvatureDimension(K_, static_cast<double>(dim_));
}

Point ModelSpace::origin() const {
    std::vector<double> x(embedding_dim(), 0.0);
    if (kind_ == Kind::Sphere) x[0] = 1.0 / std::sqrt(K_);
    if (kind_ == Kind::Hyperbolic) x[0] = 1.0 / std::sqrt(-K_);
    return {x};
}

void ModelSpace::validate(const Point& p) const {
    if (static_cast<int>(p.x.size()) != embedding_dim())
        throw InvalidPoint("point has wrong embedding dimension");
    for (double v : p.x)
        if (!std::isfinite(v)) throw InvalidPoint("point has non-finite coordinate");
    if (kind_ == Kind::Sphere) {
        if (std::abs(K_ * dot(p.x, p.x) - 1.0) > 1e-9)
            throw InvalidPoint("point off the sphere |x|^2 = 1/K");
    } else if (kind_ == Kind::Hyperbolic) {
        if (std::abs(-K_ * mdot(p.x, p.x) - 1.0) > 1e-9 || !(p.x[0] > 0.0))
            throw InvalidPoint("point off the hyperboloid sheet");
    }
}

double ModelSpace::distance(const Point& a, const Point& b) const {
    validate(a);
    validate(b);
    return distance_unchecked(a, b);
}

double ModelSpace::distance_unchecked(const Point& a, const Point& b) const {
    switch (kind_) {
        case Kind::Euclidean:
            return norm2(diff(a, b));
        case Kind::NormedPlane:
            return lp_norm(diff(a, b), p_);
        case Kind::Sphere: {
            const double rho = 1.0 / std::sqrt(K_);
            const double chord = norm2(diff(a, b));
            return 2.0 * rho * std::asin(std::min(1.0, chord / (2.0 * rho)));
        }
        case Kind::Hyperbolic: {
            const double rho = 1.0 / std::sqrt(-K_);
            const std::vector<double> d = diff(a, b);
            const double u = std::max(0.0, -mdot(d, d)) / (2.0 * rho * rho);
            // acosh(1+u) in the asinh form, stable for nearby points
            return rho * std::asinh(std::sqrt(u * (2.0 + u)));
        }
    }
    throw InvalidInput("unreachable");
}

double ModelSpace::ball_volume(double r) const {
    if (!(r >= 0.0)) throw DomainError("ball_volume: r >= 0 required");
    switch (kind_) {
        case Kind::Euclidean:
            return unit_ball_volume(dim_) * std::pow(r, dim_);
        case Kind::NormedPlane: {
            if (std::isinf(p_)) return 4.0 * r * r;
            const double g = std::tgamma(1.0 + 1.0 / p_);
            return 4.0 * g * g / std::tgamma(1.0 + 2.0 / p_) * r * r;
        }
        case Kind::Sphere: {
            const double a = std::sqrt(K_);
            if (r > kPi / a * (1.0 + 1e-12)) throw DomainError("ball_volume: r beyond the model diameter");
            r = std::min(r, kPi / a);
            if (dim_ == 1) return std::min(2.0 * r, 2.0 * kPi / a);
            if (dim_ == 2) return 2.0 * kPi * (1.0 - std::cos(r * a)) / K_;
            if (dim_ == 3) return 4.0 * kPi / K_ * (0.5 * r - std::sin(2.0 * r * a) / (4.0 * a));
            return unit_sphere_area(dim_) *
                   integrate([&](double t) { return std::pow(std::sin(t * a) / a, dim_ - 1); }, 0.0, r);
        }
        case Kind::Hyperbolic: {
            const double a = std::sqrt(-K_);
            if (dim_ == 1) return 2.0 * r;
            if (dim_ == 2) return 2.0 * kPi * (std::cosh(r * a) - 1.0) / (-K_);
            if (dim_ == 3) return 4.0 * kPi / (-K_) * (std::sinh(2.0 * r * a) / (4.0 * a) - 0.5 * r);
            return unit_sphere_area(dim_) *
                   integrate([&](double t) { return std::pow(std::sinh(t * a) / a, dim_ - 1); }, 0.0, r);
        }
    }
    throw InvalidInput("unreachable");
}

Point ModelSpace::sample_uniform_ball(const Point& center, double r, Rng& rng) const {
    validate(center);
    if (!(r > 0.0)) throw DomainError("sample_uniform_ball: r > 0 required");

    switch (kind_) {
        case Kind::Euclidean: {
            std::vector<double> v(dim_);
            for (auto& c : v) c = rng.normal();
            const double n = norm2(v);
            const double rad = r * std::pow(rng.uniform(), 1.0 / dim_);
            Point out = center;
            for (int i = 0; i < dim_; ++i) out.x[i] += rad * v[i] / std::max(n, 1e-300);
            return out;
        }
        case Kind::NormedPlane: {
            // rejection from the bounding square; the lp ball contains
            // a fixed fraction of it for every p >= 1
            for (int it = 0; it < 10000; ++it) {
                std::vector<double> v{rng.uniform(-r, r), rng.uniform(-r, r)};
                if (lp_norm(v, p_) <= r) {
                    return {{center.x[0] + v[0], center.x[1] + v[1]}};
                }
            }
            throw ConvergenceError("sample_uniform_ball: rejection loop exhausted");
        }
        case Kind::Sphere:
        case Kind::Hyperbolic: {
            const bool hyper = kind_ == Kind::Hyperbolic;
            const double rho = 1.0 / std::sqrt(std::abs(K_));
            if (!hyper && r > kPi * rho * (1.0 + 1e-12))
                throw DomainError("sample_uniform_ball: r beyond the model diameter");
            // radius by inverting the cap volume, direction uniform on the
            // tangent sphere at the canonical base point
            const double u = rng.uniform();
            const double vol = ball_volume(r);
            double t;
            if (u <= 0.0) {
                t = 0.0;
            } else {
                t = find_root([&](double s) { return ball_volume(s) - u * vol; }, 0.0, r, 400);
            }
            std::vector<double> v(dim_);
            for (auto& c : v) c = rng.normal();
            const double n = std::max(norm2(v), 1e-300);
            std::vector<double> p(dim_ + 1, 0.0);
            const double ang = t / rho;
            p[0] = hyper ? rho * std::cosh(ang) : rho * std::cos(ang);
            const double tang = hyper ? rho * std::sinh(ang) : rho * std::sin(ang);
            for (int i = 0; i < dim_; ++i) p[i + 1] = tang * v[i] / n;

            // transport from the base point to the requested center
            std::vector<double> a = origin().x, b = center.x;
            for (auto& c : a) c /= rho;
            for (auto& c : b) c /= rho;
            const double qab = hyper ? mdot(a, b) : dot(a, b);
            for (auto& c : p) c /= rho;
            std::vector<double> moved;
            if (!hyper && qab < -1.0 + 1e-9) {
                // nearly antipodal center: route through an intermediate pole
                std::vector<double> m(a.size(), 0.0);
                m[a.size() - 1] = 1.0;
                moved = rotate_unit(m, b, rotate_unit(a, m, p, false), false);
            } else {
                moved = rotate_unit(a, b, p, hyper);
            }
            for (auto& c : moved) c *= rho;
            Point out{moved};
            // renormalize against accumulated roundoff before validating
            if (!hyper) {
                const double s = rho / norm2(out.x);
                for (auto& c : out.x) c *= s;
            } else {
                const double s = rho / std::sqrt(std::max(mdot(out.x, out.x), 1e-300));
                for (auto& c : out.x) c *= s;
            }
            return out;
        }
    }
    throw InvalidInput("unreachable");
}

Point ModelSpace::sample_uniform_ball(const Point& center, double r, std::uint64_t seed) const {
    Rng rng(seed);
    return sample_uniform_ball(center, r, rng);
}

void validate_config(const ModelSpace& space, const GeodesicConfig& cfg) {
    space.validate(cfg.x0);
    space.validate(cfg.x1);
    const double d = space.distance(cfg.x0, cfg.x1);
    if (!(d > 0.0)) throw InvalidConfig("geodesic endpoints must be distinct");
    if (space.kind() == ModelSpace::Kind::Sphere) {
        const double cap = kPi / std::sqrt(space.curvature());
        if (!(d < cap * (1.0 - 1e-12)))
            throw InvalidConfig("sphere geodesic must be shorter than pi/sqrt(K)");
    }
}

Point geodesic_point(const ModelSpace& space, const GeodesicConfig& cfg, double t) {
    validate_config(space, cfg);
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("geodesic parameter must lie in [0,1]");
    const auto& a = cfg.x0.x;
    const auto& b = cfg.x1.x;
    switch (space.kind()) {
        case ModelSpace::Kind::Euclidean:
        case ModelSpace::Kind::NormedPlane: {
            std::vector<double> out(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - t) * a[i] + t * b[i];
            return {out};
        }
        case ModelSpace::Kind::Sphere: {
            const double rho = 1.0 / std::sqrt(space.curvature());
            const double alpha = space.distance(cfg.x0, cfg.x1) / rho;
            const double s = std::sin(alpha);
            std::vector<double> out(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                out[i] = (std::sin((1.0 - t) * alpha) * a[i] + std::sin(t * alpha) * b[i]) / s;
            return {out};
        }
        case ModelSpace::Kind::Hyperbolic: {
            const double rho = 1.0 / std::sqrt(-space.curvature());
            const double beta = space.distance(cfg.x0, cfg.x1) / rho;
            const double s = std::sinh(beta);
            std::vector<double> out(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                out[i] = (std::sinh((1.0 - t) * beta) * a[i] + std::sinh(t * beta) * b[i]) / s;
            return {out};
        }
    }
    throw InvalidInput("unreachable");
}

TriangleStats excess_stats(const ModelSpace& space, const GeodesicConfig& cfg,
                           const Point& x) {
    validate_config(space, cfg);
    space.validate(x);
    const double d0 = space.distance_unchecked(x, cfg.x0);
    const double d1 = space.distance_unchecked(x, cfg.x1);
    const double len = space.distance_unchecked(cfg.x0, cfg.x1);

    // local interpolator; the config was validated once above
    const auto& a = cfg.x0.x;
    const auto& b = cfg.x1.x;
    const bool curved = space.kind() == ModelSpace::Kind::Sphere ||
                        space.kind() == ModelSpace::Kind::Hyperbolic;
    const bool hyper = space.kind() == ModelSpace::Kind::Hyperbolic;
    const double rho = curved ? 1.0 / std::sqrt(std::abs(space.curvature())) : 1.0;
    const double ang = len / rho;
    const double denom = curved ? (hyper ? std::sinh(ang) : std::sin(ang)) : 1.0;
    Point probe{std::vector<double>(a.size())};
    auto f = [&](double t) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!curved) {
                probe.x[i] = (1.0 - t) * a[i] + t * b[i];
            } else if (hyper) {
                probe.x[i] = (std::sinh((1.0 - t) * ang) * a[i] + std::sinh(t * ang) * b[i]) / denom;
            } else {
                probe.x[i] = (std::sin((1.0 - t) * ang) * a[i] + std::sin(t * ang) * b[i]) / denom;
            }
        }
        return space.distance_unchecked(x, probe);
    };

    // pre-scan guards against the flat stretches of lp distance profiles
    constexpr int kScan = 64;
    int best = 0;
    double best_val = f(0.0);
    for (int i = 1; i <= kScan; ++i) {
        const double v = f(static_cast<double>(i) / kScan);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = std::max(0.0, (best - 1.0) / kScan);
    const double hi = std::min(1.0, (best + 1.0) / kScan);
    MinResult m = golden_section_minimize(f, lo, hi, 1e-12);

    TriangleStats st;
    st.excess = std::max(0.0, d0 + d1 - len);
    st.leg = std::min(d0, d1);
    st.height = std::min({m.value, best_val, st.leg});
    return st;
}

MaxNormCounterexample max_norm_counterexample(double L, double eps) {
    if (!(L > 0.0) || !(eps > 0.0) || !(eps < L / 2.0))
        throw InvalidInput("max_norm_counterexample: need 0 < eps < L/2");
    MaxNormCounterexample out{
        ModelSpace::normed_plane(HUGE_VAL),
        GeodesicConfig{Point{{0.0, 0.0}}, Point{{L, L}}},
        Point{{L / 2.0 + eps, L / 2.0}},
        TriangleStats{}};
    out.stats = excess_stats(out.space, out.cfg, out.apex);
    return out;
}

} // namespace gcomp
