#ifndef GCOMP_GRAPH_CALCULUS_HPP
#define GCOMP_GRAPH_CALCULUS_HPP

#include "gcomp/kernels.hpp"
#include "gcomp/model_space.hpp"
#include "gcomp/numerics.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace gcomp {

using VertexFunction = std::vector<double>;
using SignedVertexMeasure = std::vector<double>;

// Finite metric measure space: a connected weighted graph with symmetric
// positive conductances w, positive edge lengths and a strictly positive
// vertex measure.  The path metric comes from the edge lengths.
class MeasuredGraph {
public:
    struct Edge {
        int u;
        int v;
        double w;    // conductance
        double len;  // edge length
    };

    struct Neighbor {
        int to;
        double w;
        double len;
    };

    MeasuredGraph() = default;
    MeasuredGraph(int n, std::vector<Edge> edges, std::vector<double> measure);

    int size() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<double>& measure() const { return measure_; }
    const std::vector<Neighbor>& neighbors(int v) const { return adj_[v]; }

    // Dijkstra over edge lengths.
    std::vector<double> shortest_distances(int src) const;

    // Text format: vertex lines "v m", edge lines "v u w len".
    void save(std::ostream& out) const;
    static MeasuredGraph load(std::istream& in);

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> measure_;
    std::vector<std::vector<Neighbor>> adj_;
};

// Gamma(f,g)(v) = (1/(2 m(v))) sum_u w(v,u) (f(u)-f(v)) (g(u)-g(v)).
// Bilinear, symmetric, Gamma(f,f) >= 0, pointwise Cauchy-Schwarz.
VertexFunction carre_du_champ(const MeasuredGraph& g, const VertexFunction& f1,
                              const VertexFunction& f2);

// (Gamma(g+eps f, g+eps f) - Gamma(g, g)) / (2 eps).  Equals
// Gamma(f,g) + (eps/2) Gamma(f,f) identically, so the eps -> 0 limit (and the
// infimum over eps > 0) recovers carre_du_champ.
VertexFunction energy_difference_quotient(const MeasuredGraph& g, const VertexFunction& f,
                                          const VertexFunction& base, double eps);

// max_v |Gamma(f+g) + Gamma(f-g) - 2 Gamma(f) - 2 Gamma(g)|: zero up to
// roundoff, the quadratic-form identity is exact on graphs.
double parallelogram_residual(const MeasuredGraph& g, const VertexFunction& f1,
                              const VertexFunction& f2);

// Mass of the distributional Laplacian per vertex:
//   (lap g m)(v) = sum_u w(v,u) (g(u) - g(v)).
// Satisfies sum_v Gamma(f,g)(v) m(v) = - sum_v f(v) (lap g m)(v) exactly.
SignedVertexMeasure laplacian_measure(const MeasuredGraph& g, const VertexFunction& f);

// sum_v Gamma(f,f)(v) m(v).
double dirichlet_energy(const MeasuredGraph& g, const VertexFunction& f);

struct MaxPrincipleResult {
    bool subharmonic;       // (lap g m) >= -tol on omega
    bool boundary_attains;  // max over omega and its boundary sits on the boundary
    int max_vertex;
    double interior_max;
    double boundary_max;
};

// Boundary convention: vertices outside omega adjacent to omega.  Throws
// BoundaryEmpty when there are none.
MaxPrincipleResult max_principle_check(const MeasuredGraph& g, const VertexFunction& f,
                                       const std::vector<int>& omega);

// max_v |lap(g1 g2) - g1 lap g2 - g2 lap g1 - 2 Gamma(g1,g2)| as densities;
// exact on graphs, so the residual is roundoff only.
double leibniz_residual(const MeasuredGraph& g, const VertexFunction& g1,
                        const VertexFunction& g2);

// Empirical constant of the local 1-1 Poincare inequality on the metric ball
// B_r(v0) against the gradient term on B_2r(v0).
double poincare_ratio(const MeasuredGraph& g, int v0, double r, const VertexFunction& f);

// Solves (lap g m)(v) = lap_mass_target(v) on omega with the given values
// outside omega (dense elimination; graphs here are desk scale).
VertexFunction solve_dirichlet(const MeasuredGraph& g, const std::vector<int>& omega,
                               const VertexFunction& outside_values,
                               const std::vector<double>& lap_mass_target);

// Seeded generator used by tests and campaigns: random spanning tree plus
// extra edges, weights and measures in [0.5, 2].
MeasuredGraph random_connected_graph(int n, double extra_edge_prob, Rng& rng);

// ---------------------------------------------------------------------------
// Lattice discretizations of the model spaces.

// Euclidean / normed-plane grids are cubic lattices with cell measure
// mesh^dim.  The hyperbolic plane is laid out on a conformal-disk lattice
// whose cell measure is the model area; in both cases the conductance is
// w = m_edge / len^2 with m_edge the geometric mean of the endpoint cells
// and len the exact model distance.
struct GridGraph {
    MeasuredGraph graph;
    ModelSpace space;
    std::vector<Point> points;
    int center = 0;
    std::vector<std::uint8_t> interior;  // all lattice neighbors present
    double mesh = 0.0;
    std::vector<double> center_dist;     // exact model distance to the center
};

GridGraph grid_discretize(const ModelSpace& space, const Point& center, double radius,
                          double mesh, std::size_t max_vertices = 1000000);

// Laplacian density (lap f m)(v) / m(v) for every vertex.
VertexFunction laplacian_density(const MeasuredGraph& g, const VertexFunction& f);

// Margins of the distance-Laplacian comparisons on interior vertices at
// distance > inner_exclusion from the center (default 3 * mesh):
//   sq_margin   = lap(d^2/2) - N * distortion_rate(d)
//   dist_margin = lap(d)     - comparison_cot(d)
// Positive margins beyond tol are violations.
struct ComparisonReport {
    double worst_sq_margin = 0.0;
    double worst_dist_margin = 0.0;
    int checked = 0;
    int violations = 0;
};

ComparisonReport distance_laplacian_comparison(const GridGraph& grid,
                                               const CurvatureDimension& cd, double tol,
                                               double inner_exclusion = -1.0);

// Margin lap(phi(d, R)) - 1 on the annulus, which must stay >= -tol;
// vertices whose lattice neighbors leave B_R are masked out.
struct SupersolutionReport {
    double worst_margin = 0.0;  // most negative observed
    int checked = 0;
    int violations = 0;
};

SupersolutionReport potential_supersolution_check(const GridGraph& grid,
                                                  const CurvatureDimension& cd, double R,
                                                  double tol, double inner_exclusion = -1.0);

// Discrete replay of the maximum-principle excess argument on the annulus
// theta < d(., center) < R:
//   step "laplacian":  lap(a phi - E) >= -tol with a = 2 c(l - R)
//   step "boundary":   a phi - E <= tol on the outer band; on the inner band
//                      the Lipschitz propagation E(v) >= E(apex) - 2 d(apex,v)
//   step "maximum-principle": the corrected function attains its max on the
//                      annulus boundary
// The apex bound 2 theta + a phi(theta, R) + slack is reported alongside the
// measured apex excess.
struct ReplayStep {
    std::string name;
    bool passed;
    double margin;
};

struct ReplayReport {
    std::vector<ReplayStep> steps;
    std::string failing_step;  // empty when all steps pass
    bool passed = false;
    double apex_excess = 0.0;
    double apex_bound = 0.0;
    double a = 0.0;
};

ReplayReport maximum_principle_replay(const GridGraph& grid, const GeodesicConfig& cfg,
                                      const CurvatureDimension& cd, double theta, double R,
                                      double tol);

// Scalar map with two derivatives, for the chain-rule residual.
struct ScalarMap {
    std::function<double(double)> f;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

// max interior |lap(phi o g) - phi'(g) lap g - phi''(g) Gamma(g,g)| as
// densities, optionally masking vertices within inner_exclusion of the grid
// center (radial profiles are singular there).
double chain_rule_residual(const GridGraph& grid, const VertexFunction& g,
                           const ScalarMap& phi, double inner_exclusion = 0.0);

} // namespace gcomp

#endif
