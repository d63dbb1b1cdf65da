#ifndef GCOMP_MODEL_SPACE_HPP
#define GCOMP_MODEL_SPACE_HPP

#include "gcomp/excess.hpp"
#include "gcomp/kernels.hpp"
#include "gcomp/numerics.hpp"

#include <cstdint>
#include <vector>

namespace gcomp {

// Embedding coordinates: Cartesian for Euclidean and the normed plane,
// radius-1/sqrt(K) sphere embedding for Sphere, hyperboloid coordinates
// for Hyperbolic.
struct Point {
    std::vector<double> x;
};

// Exact geodesic model geometries with closed-form distances.
class ModelSpace {
public:
    enum class Kind { Euclidean, Sphere, Hyperbolic, NormedPlane };

    static ModelSpace euclidean(int dim);
    static ModelSpace sphere(int dim, double K);      // K > 0
    static ModelSpace hyperbolic(int dim, double K);  // K < 0
    static ModelSpace normed_plane(double p);         // p in [1, inf]; HUGE_VAL = max norm

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double curvature() const { return K_; }
    double norm_exponent() const { return p_; }
    int embedding_dim() const;

    // (K, N = dim) for the curved models and Euclidean; (0, 2) for any
    // normed plane.
    CurvatureDimension native_cd() const;

    Point origin() const;
    void validate(const Point& p) const;  // throws InvalidPoint
    double distance(const Point& a, const Point& b) const;
    // distance without the constraint checks; for hot loops over points that
    // were validated on entry
    double distance_unchecked(const Point& a, const Point& b) const;
    double ball_volume(double r) const;

    // Uniform sample from the metric ball w.r.t. the model volume measure;
    // deterministic for a given rng state.
    Point sample_uniform_ball(const Point& center, double r, Rng& rng) const;
    Point sample_uniform_ball(const Point& center, double r, std::uint64_t seed) const;

private:
    ModelSpace(Kind k, int dim, double K, double p);
    Kind kind_;
    int dim_;
    double K_;  // curvature for Sphere/Hyperbolic, 0 otherwise
    double p_;  // norm exponent for NormedPlane
};

// Endpoints of the reference minimizing geodesic.  Requires positive
// separation; on the sphere also separation < pi/sqrt(K) so the minimizing
// geodesic is unique.
struct GeodesicConfig {
    Point x0;
    Point x1;
};

void validate_config(const ModelSpace& space, const GeodesicConfig& cfg);

// Constant speed geodesic through cfg at parameter t in [0, 1].  The normed
// plane, where geodesics are non-unique, uses the affine segment.
Point geodesic_point(const ModelSpace& space, const GeodesicConfig& cfg, double t);

// excess / height / leg of x relative to cfg.  The height minimization runs
// a 64-point pre-scan plus golden section, which covers the flat segments of
// non-strictly-convex norms.
TriangleStats excess_stats(const ModelSpace& space, const GeodesicConfig& cfg,
                           const Point& x);

// The max-norm plane configuration x0=(0,0), x1=(L,L), x=(L/2+eps, L/2):
// excess = 2 * height = eps while height/leg = eps/L, so excess/height stays
// at 2 as the triangle thins out and the thin-triangle decay fails.
struct MaxNormCounterexample {
    ModelSpace space;
    GeodesicConfig cfg;
    Point apex;
    TriangleStats stats;
};

MaxNormCounterexample max_norm_counterexample(double L, double eps);

} // namespace gcomp

#endif
