#include "gcomp/graph_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>

namespace gcomp {

namespace {

void check_sizes(const MeasuredGraph& g, const VertexFunction& f, const char* what) {
    if (static_cast<int>(f.size()) != g.size())
        throw DimensionMismatch(std::string(what) + ": vertex function size mismatch");
}

} // namespace

MeasuredGraph::MeasuredGraph(int n, std::vector<Edge> edges, std::vector<double> measure)
    : n_(n), edges_(std::move(edges)), measure_(std::move(measure)) {
    if (n_ <= 0) throw InvalidInput("graph needs at least one vertex");
    if (static_cast<int>(measure_.size()) != n_)
        throw DimensionMismatch("measure size must equal vertex count");
    for (double m : measure_)
        if (!(m > 0.0) || !std::isfinite(m)) throw InvalidInput("vertex measure must be positive");
    adj_.assign(n_, {});
    for (const Edge& e : edges_) {
        if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_ || e.u == e.v)
            throw InvalidInput("edge endpoints out of range");
        if (!(e.w > 0.0) || !(e.len > 0.0)) throw InvalidInput("edge weight and length must be positive");
        adj_[e.u].push_back({e.v, e.w, e.len});
        adj_[e.v].push_back({e.u, e.w, e.len});
    }
    // connectivity
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const Neighbor& nb : adj_[v]) {
            if (!seen[nb.to]) {
                seen[nb.to] = 1;
                ++count;
                stack.push_back(nb.to);
            }
        }
    }
    if (count != n_) throw InvalidInput("graph must be connected");
}

std::vector<double> MeasuredGraph::shortest_distances(int src) const {
    if (src < 0 || src >= n_) throw InvalidInput("shortest_distances: bad source");
    std::vector<double> dist(n_, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        for (const Neighbor& nb : adj_[v]) {
            const double nd = d + nb.len;
            if (nd < dist[nb.to]) {
                dist[nb.to] = nd;
                pq.push({nd, nb.to});
            }
        }
    }
    return dist;
}

void MeasuredGraph::save(std::ostream& out) const {
    out.precision(17);
    for (int v = 0; v < n_; ++v) out << v << " " << measure_[v] << "\n";
    for (const Edge& e : edges_) out << e.u << " " << e.v << " " << e.w << " " << e.len << "\n";
}

MeasuredGraph MeasuredGraph::load(std::istream& in) {
    std::vector<std::pair<int, double>> verts;
    std::vector<Edge> edges;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.size() == 2) {
            verts.push_back({std::stoi(tok[0]), std::stod(tok[1])});
        } else if (tok.size() == 4) {
            edges.push_back({std::stoi(tok[0]), std::stoi(tok[1]), std::stod(tok[2]), std::stod(tok[3])});
        } else {
            throw IOError("graph file: lines must be 'v m' or 'v u w len'");
        }
    }
    if (verts.empty()) throw IOError("graph file: no vertex lines");
    int n = 0;
    for (auto& [v, m] : verts) n = std::max(n, v + 1);
    std::vector<double> measure(n, -1.0);
    for (auto& [v, m] : verts) {
        if (v < 0) throw IOError("graph file: negative vertex id");
        measure[v] = m;
    }
    for (double m : measure)
        if (m < 0.0) throw IOError("graph file: missing vertex measure line");
    return MeasuredGraph(n, std::move(edges), std::move(measure));
}

VertexFunction carre_du_champ(const MeasuredGraph& g, const VertexFunction& f1,
                              const VertexFunction& f2) {
    check_sizes(g, f1, "carre_du_champ");
    check_sizes(g, f2, "carre_du_champ");
    VertexFunction out(g.size(), 0.0);
    for (int v = 0; v < g.size(); ++v) {
        double s = 0.0;
        for (const auto& nb : g.neighbors(v))
            s += nb.w * (f1[nb.to] - f1[v]) * (f2[nb.to] - f2[v]);
        out[v] = s / (2.0 * g.measure()[v]);
    }
    return out;
}

VertexFunction energy_difference_quotient(const MeasuredGraph& g, const VertexFunction& f,
                                          const VertexFunction& base, double eps) {
    if (eps == 0.0) throw InvalidInput("energy_difference_quotient: eps must be nonzero");
    check_sizes(g, f, "energy_difference_quotient");
    check_sizes(g, base, "energy_difference_quotient");
    VertexFunction perturbed(base);
    for (int v = 0; v < g.size(); ++v) perturbed[v] += eps * f[v];
    const VertexFunction gp = carre_du_champ(g, perturbed, perturbed);
    const VertexFunction gb = carre_du_champ(g, base, base);
    VertexFunction out(g.size());
    for (int v = 0; v < g.size(); ++v) out[v] = (gp[v] - gb[v]) / (2.0 * eps);
    return out;
}

double parallelogram_residual(const MeasuredGraph& g, const VertexFunction& f1,
                              const VertexFunction& f2) {
    check_sizes(g, f1, "parallelogram_residual");
    check_sizes(g, f2, "parallelogram_residual");
    VertexFunction sum(g.size()), dif(g.size());
    for (int v = 0; v < g.size(); ++v) {
        sum[v] = f1[v] + f2[v];
        dif[v] = f1[v] - f2[v];
    }
    const VertexFunction gs = carre_du_champ(g, sum, sum);
    const VertexFunction gd = carre_du_champ(g, dif, dif);
    const VertexFunction ga = carre_du_champ(g, f1, f1);
    const VertexFunction gb = carre_du_champ(g, f2, f2);
    double worst = 0.0;
    for (int v = 0; v < g.size(); ++v)
        worst = std::max(worst, std::abs(gs[v] + gd[v] - 2.0 * ga[v] - 2.0 * gb[v]));
    return worst;
}

SignedVertexMeasure laplacian_measure(const MeasuredGraph& g, const VertexFunction& f) {
    check_sizes(g, f, "laplacian_measure");
    SignedVertexMeasure out(g.size(), 0.0);
    for (int v = 0; v < g.size(); ++v) {
        double s = 0.0;
        for (const auto& nb : g.neighbors(v)) s += nb.w * (f[nb.to] - f[v]);
        out[v] = s;
    }
    return out;
}

double dirichlet_energy(const MeasuredGraph& g, const VertexFunction& f) {
    check_sizes(g, f, "dirichlet_energy");
    double e = 0.0;
    for (const auto& edge : g.edges()) {
        const double d = f[edge.u] - f[edge.v];
        e += edge.w * d * d;
    }
    return e;
}

MaxPrincipleResult max_principle_check(const MeasuredGraph& g, const VertexFunction& f,
                                       const std::vector<int>& omega) {
    check_sizes(g, f, "max_principle_check");
    if (omega.empty()) throw InvalidInput("max_principle_check: omega is empty");
    std::vector<char> in_omega(g.size(), 0);
    for (int v : omega) {
        if (v < 0 || v >= g.size()) throw InvalidInput("max_principle_check: vertex out of range");
        in_omega[v] = 1;
    }
    std::vector<int> boundary;
    for (int v : omega)
        for (const auto& nb : g.neighbors(v))
            if (!in_omega[nb.to]) boundary.push_back(nb.to);
    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    if (boundary.empty()) throw BoundaryEmpty("max_principle_check: omega has no exterior neighbors");

    double scale = 0.0;
    for (double v : f) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * std::max(scale, 1.0);

    const SignedVertexMeasure lap = laplacian_measure(g, f);
    double lap_scale = 0.0;
    for (double v : lap) lap_scale = std::max(lap_scale, std::abs(v));
    const double lap_tol = 1e-12 * std::max(lap_scale, 1.0);
    bool subharmonic = true;
    for (int v : omega)
        if (lap[v] < -lap_tol) subharmonic = false;

    double interior_max = -std::numeric_limits<double>::infinity();
    for (int v : omega) interior_max = std::max(interior_max, f[v]);
    double boundary_max = -std::numeric_limits<double>::infinity();
    int argmax = boundary[0];
    for (int v : boundary)
        if (f[v] > boundary_max) {
            boundary_max = f[v];
            argmax = v;
        }

    MaxPrincipleResult res;
    res.subharmonic = subharmonic;
    res.boundary_attains = boundary_max >= interior_max - tol;
    res.max_vertex = argmax;
    res.interior_max = interior_max;
    res.boundary_max = boundary_max;
    return res;
}

double leibniz_residual(const MeasuredGraph& g, const VertexFunction& g1,
                        const VertexFunction& g2) {
    check_sizes(g, g1, "leibniz_residual");
    check_sizes(g, g2, "leibniz_residual");
    VertexFunction prod(g.size());
    for (int v = 0; v < g.size(); ++v) prod[v] = g1[v] * g2[v];
    const SignedVertexMeasure lp = laplacian_measure(g, prod);
    const SignedVertexMeasure l1 = laplacian_measure(g, g1);
    const SignedVertexMeasure l2 = laplacian_measure(g, g2);
    const VertexFunction gamma = carre_du_champ(g, g1, g2);
    double worst = 0.0;
    for (int v = 0; v < g.size(); ++v) {
        const double m = g.measure()[v];
        const double r = lp[v] / m - g1[v] * l2[v] / m - g2[v] * l1[v] / m - 2.0 * gamma[v];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double poincare_ratio(const MeasuredGraph& g, int v0, double r, const VertexFunction& f) {
    check_sizes(g, f, "poincare_ratio");
    if (!(r > 0.0)) throw InvalidInput("poincare_ratio: r > 0 required");
    const std::vector<double> dist = g.shortest_distances(v0);
    std::vector<int> ball, ball2;
    for (int v = 0; v < g.size(); ++v) {
        if (dist[v] <= r) ball.push_back(v);
        if (dist[v] <= 2.0 * r) ball2.push_back(v);
    }
    if (ball.size() < 2) throw DegenerateBall("poincare_ratio: B_r has a single vertex");

    double mass = 0.0, mean = 0.0;
    for (int v : ball) {
        mass += g.measure()[v];
        mean += f[v] * g.measure()[v];
    }
    mean /= mass;
    double lhs = 0.0;
    for (int v : ball) lhs += std::abs(f[v] - mean) * g.measure()[v];
    lhs /= mass;

    const VertexFunction gamma = carre_du_champ(g, f, f);
    double mass2 = 0.0, grad = 0.0;
    for (int v : ball2) {
        mass2 += g.measure()[v];
        grad += std::sqrt(std::max(0.0, gamma[v])) * g.measure()[v];
    }
    const double rhs = r * grad / mass2;
    if (lhs == 0.0) return 0.0;
    return lhs / rhs;
}

VertexFunction solve_dirichlet(const MeasuredGraph& g, const std::vector<int>& omega,
                               const VertexFunction& outside_values,
                               const std::vector<double>& lap_mass_target) {
    check_sizes(g, outside_values, "solve_dirichlet");
    if (omega.size() != lap_mass_target.size())
        throw DimensionMismatch("solve_dirichlet: omega/target size mismatch");
    std::vector<int> idx(g.size(), -1);
    for (std::size_t i = 0; i < omega.size(); ++i) idx[omega[i]] = static_cast<int>(i);
    const std::size_t n = omega.size();
    std::vector<double> A(n * n, 0.0), b(lap_mass_target);
    for (std::size_t i = 0; i < n; ++i) {
        const int v = omega[i];
        double deg = 0.0;
        for (const auto& nb : g.neighbors(v)) {
            deg += nb.w;
            if (idx[nb.to] >= 0) {
                A[i * n + idx[nb.to]] += nb.w;
            } else {
                b[i] -= nb.w * outside_values[nb.to];
            }
        }
        A[i * n + i] -= deg;
    }
    const std::vector<double> sol = solve_dense(std::move(A), std::move(b));
    VertexFunction out(outside_values);
    for (std::size_t i = 0; i < n; ++i) out[omega[i]] = sol[i];
    return out;
}

MeasuredGraph random_connected_graph(int n, double extra_edge_prob, Rng& rng) {
    if (n < 2) throw InvalidInput("random_connected_graph: n >= 2 required");
    std::vector<MeasuredGraph::Edge> edges;
    for (int v = 1; v < n; ++v) {
        const int parent = rng.uniform_int(0, v - 1);
        edges.push_back({parent, v, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)});
    }
    for (int v = 0; v < n; ++v)
        for (int u = v + 2; u < n; ++u)
            if (rng.uniform() < extra_edge_prob)
                edges.push_back({v, u, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)});
    std::vector<double> measure(n);
    for (auto& m : measure) m = rng.uniform(0.5, 2.0);
    return MeasuredGraph(n, std::move(edges), std::move(measure));
}

// ---------------------------------------------------------------------------
// Grids.

namespace {

struct LatticeSpec {
    int dim;
    double coord_step;   // lattice spacing in chart coordinates
    double coord_limit;  // keep |z| (chart norm) within this
};

Point chart_to_point(const ModelSpace& space, const std::vector<double>& z) {
    switch (space.kind()) {
        case ModelSpace::Kind::Euclidean:
        case ModelSpace::Kind::NormedPlane:
            return {z};
        case ModelSpace::Kind::Hyperbolic: {
            // Conformal disk chart: x0 = rho (1+|z|^2)/(1-|z|^2), xi = 2 rho zi/(1-|z|^2).
            const double rho = 1.0 / std::sqrt(-space.curvature());
            double zz = 0.0;
            for (double c : z) zz += c * c;
            const double denom = 1.0 - zz;
            std::vector<double> x(z.size() + 1);
            x[0] = rho * (1.0 + zz) / denom;
            for (std::size_t i = 0; i < z.size(); ++i) x[i + 1] = 2.0 * rho * z[i] / denom;
            return {x};
        }
        default:
            throw InvalidInput("grid_discretize: unsupported space");
    }
}

double cell_measure(const ModelSpace& space, const std::vector<double>& z, double step) {
    if (space.kind() == ModelSpace::Kind::Hyperbolic) {
        const double rho = 1.0 / std::sqrt(-space.curvature());
        double zz = 0.0;
        for (double c : z) zz += c * c;
        const double lam = 2.0 * rho / (1.0 - zz);
        return lam * lam * step * step;
    }
    double m = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) m *= step;
    return m;
}

bool chart_in_domain(const ModelSpace& space, const std::vector<double>& z, double limit) {
    if (space.kind() == ModelSpace::Kind::NormedPlane) {
        double p = space.norm_exponent();
        double n;
        if (std::isinf(p)) {
            n = std::max(std::abs(z[0]), std::abs(z[1]));
        } else {
            n = std::pow(std::pow(std::abs(z[0]), p) + std::pow(std::abs(z[1]), p), 1.0 / p);
        }
        return n <= limit;
    }
    double zz = 0.0;
    for (double c : z) zz += c * c;
    return std::sqrt(zz) <= limit;
}

} // namespace

GridGraph grid_discretize(const ModelSpace& space, const Point& center, double radius,
                          double mesh, std::size_t max_vertices) {
    if (!(mesh > 0.0) || !(radius > 2.0 * mesh))
        throw InvalidInput("grid_discretize: need 0 < mesh << radius");
    space.validate(center);

    LatticeSpec spec{};
    const auto kind = space.kind();
    if (kind == ModelSpace::Kind::Euclidean || kind == ModelSpace::Kind::NormedPlane) {
        if (space.dim() > 3) throw InvalidInput("grid_discretize: euclidean grids support dim <= 3");
        spec = {space.dim(), mesh, radius};
    } else if (kind == ModelSpace::Kind::Hyperbolic) {
        if (space.dim() != 2) throw InvalidInput("grid_discretize: hyperbolic grids support dim 2");
        const double rho = 1.0 / std::sqrt(-space.curvature());
        spec = {2, mesh / (2.0 * rho), std::tanh(radius / (2.0 * rho))};
    } else {
        throw InvalidInput("grid_discretize: spheres are not discretized");
    }

    const int reach = static_cast<int>(std::floor(spec.coord_limit / spec.coord_step)) + 1;
    const int side = 2 * reach + 1;
    const bool curved = kind == ModelSpace::Kind::Hyperbolic;

    // enumerate lattice cells inside the chart ball
    std::vector<int> id_of;
    id_of.assign(static_cast<std::size_t>(std::pow(side, spec.dim)), -1);
    auto flat = [&](const std::vector<int>& iv) {
        std::size_t f = 0;
        for (int d = 0; d < spec.dim; ++d) f = f * side + static_cast<std::size_t>(iv[d] + reach);
        return f;
    };

    std::vector<std::vector<int>> cells;
    std::vector<int> iv(spec.dim, -reach);
    while (true) {
        std::vector<double> z(spec.dim);
        for (int d = 0; d < spec.dim; ++d) z[d] = iv[d] * spec.coord_step;
        if (chart_in_domain(space, z, spec.coord_limit)) {
            id_of[flat(iv)] = static_cast<int>(cells.size());
            cells.push_back(iv);
            if (cells.size() > max_vertices)
                throw ResourceError("grid_discretize: vertex budget exceeded");
        }
        int d = spec.dim - 1;
        while (d >= 0 && iv[d] == reach) {
            iv[d] = -reach;
            --d;
        }
        if (d < 0) break;
        ++iv[d];
    }

    const int n = static_cast<int>(cells.size());
    GridGraph out{MeasuredGraph(), space, {}, 0, std::vector<std::uint8_t>(n, 1), mesh, {}};
    out.points.reserve(n);
    std::vector<double> measure(n);
    for (int v = 0; v < n; ++v) {
        std::vector<double> z(spec.dim);
        for (int d = 0; d < spec.dim; ++d) z[d] = cells[v][d] * spec.coord_step;
        Point p = chart_to_point(space, z);
        if (!curved) {
            for (int d = 0; d < spec.dim; ++d) p.x[d] += center.x[d];
        }
        out.points.push_back(std::move(p));
        measure[v] = cell_measure(space, z, spec.coord_step);
        bool is_center = true;
        for (int d = 0; d < spec.dim; ++d) is_center = is_center && cells[v][d] == 0;
        if (is_center) out.center = v;
    }

    // hyperbolic grids are built around the chart origin, then transported
    if (curved) {
        const double rho = 1.0 / std::sqrt(-space.curvature());
        const Point base = space.origin();
        double sep = 0.0;
        for (std::size_t i = 0; i < center.x.size(); ++i) sep += std::abs(center.x[i] - base.x[i]);
        if (sep > 1e-14) {
            std::vector<double> a = base.x, b = center.x;
            for (auto& c : a) c /= rho;
            for (auto& c : b) c /= rho;
            for (auto& p : out.points) {
                std::vector<double> x = p.x;
                for (auto& c : x) c /= rho;
                const double qxa = x[0] * a[0] - x[1] * a[1] - x[2] * a[2];
                const double qxb = x[0] * b[0] - x[1] * b[1] - x[2] * b[2];
                const double qab = a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
                const double c0 = (qxa + qxb) / (1.0 + qab);
                for (std::size_t i = 0; i < x.size(); ++i)
                    x[i] += -c0 * (a[i] + b[i]) + 2.0 * qxa * b[i];
                for (auto& c : x) c *= rho;
                p.x = std::move(x);
            }
        }
    }

    std::vector<MeasuredGraph::Edge> edges;
    for (int v = 0; v < n; ++v) {
        for (int d = 0; d < spec.dim; ++d) {
            for (int sgn : {-1, 1}) {
                std::vector<int> jv(cells[v]);
                jv[d] += sgn;
                int u = -1;
                if (std::abs(jv[d]) <= reach) u = id_of[flat(jv)];
                if (u < 0) {
                    out.interior[v] = 0;
                    continue;
                }
                if (sgn < 0) continue;  // add each edge once
                const double len = space.distance_unchecked(out.points[v], out.points[u]);
                const double w = std::sqrt(measure[v] * measure[u]) / (len * len);
                edges.push_back({v, u, w, len});
            }
        }
    }

    out.graph = MeasuredGraph(n, std::move(edges), std::move(measure));
    out.center_dist.resize(n);
    for (int v = 0; v < n; ++v)
        out.center_dist[v] = space.distance_unchecked(out.points[v], out.points[out.center]);
    return out;
}

VertexFunction laplacian_density(const MeasuredGraph& g, const VertexFunction& f) {
    SignedVertexMeasure lap = laplacian_measure(g, f);
    for (int v = 0; v < g.size(); ++v) lap[v] /= g.measure()[v];
    return lap;
}

// ---------------------------------------------------------------------------
// Radial potential profile: phi(r, R) and its companion integral tabulated by
// an RK4 sweep of
//   G'(r)   = -s(r)^{N-1}
//   phi'(r) = -G(r) s(r)^{1-N}
// from R down, then evaluated with cubic Hermite interpolation.

namespace {

class RadialPotential {
public:
    RadialPotential(const CurvatureDimension& cd, double r_min, double R, int steps = 20000)
        : cd_(cd), r_min_(r_min), R_(R), step_((R - r_min) / steps) {
        const int m = steps;
        G_.assign(m + 1, 0.0);
        phi_.assign(m + 1, 0.0);
        auto s_pow = [&](double r, double p) { return std::pow(generalized_sin(cd_, r), p); };
        const double p = cd_.N - 1.0;
        for (int k = m; k-- > 0;) {
            const double r1 = r_min_ + (k + 1) * step_;
            const double h = -step_;  // integrating downward
            auto fG = [&](double r) { return -s_pow(r, p); };
            auto fphi = [&](double r, double G) { return -G * s_pow(r, -p); };
            const double G1 = G_[k + 1], P1 = phi_[k + 1];
            const double k1G = fG(r1), k1P = fphi(r1, G1);
            const double k2G = fG(r1 + 0.5 * h), k2P = fphi(r1 + 0.5 * h, G1 + 0.5 * h * k1G);
            const double k3G = fG(r1 + 0.5 * h), k3P = fphi(r1 + 0.5 * h, G1 + 0.5 * h * k2G);
            const double k4G = fG(r1 + h), k4P = fphi(r1 + h, G1 + h * k3G);
            G_[k] = G1 + h / 6.0 * (k1G + 2.0 * k2G + 2.0 * k3G + k4G);
            phi_[k] = P1 + h / 6.0 * (k1P + 2.0 * k2P + 2.0 * k3P + k4P);
        }
    }

    double value(double r) const {
        if (r >= R_) return 0.0;
        if (r < r_min_ - 1e-12) throw InvalidInput("radial potential queried below its table");
        r = std::max(r, r_min_);
        const int m = static_cast<int>(G_.size()) - 1;
        int k = std::min(m - 1, static_cast<int>((r - r_min_) / step_));
        const double r0 = r_min_ + k * step_;
        const double t = (r - r0) / step_;
        const double p = cd_.N - 1.0;
        auto deriv = [&](int idx) {
            const double rr = r_min_ + idx * step_;
            return -G_[idx] * std::pow(generalized_sin(cd_, rr), -p);
        };
        const double y0 = phi_[k], y1 = phi_[k + 1];
        const double d0 = deriv(k) * step_, d1 = deriv(k + 1) * step_;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 +
               (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * d1;
    }

private:
    CurvatureDimension cd_;
    double r_min_, R_, step_;
    std::vector<double> G_, phi_;
};

} // namespace

ComparisonReport distance_laplacian_comparison(const GridGraph& grid,
                                               const CurvatureDimension& cd, double tol,
                                               double inner_exclusion) {
    const double excl = inner_exclusion > 0.0 ? inner_exclusion : 3.0 * grid.mesh;
    const int n = grid.graph.size();
    VertexFunction half_sq(n), dist(n);
    for (int v = 0; v < n; ++v) {
        dist[v] = grid.center_dist[v];
        half_sq[v] = 0.5 * dist[v] * dist[v];
    }
    const VertexFunction lap_sq = laplacian_density(grid.graph, half_sq);
    const VertexFunction lap_d = laplacian_density(grid.graph, dist);

    ComparisonReport rep;
    rep.worst_sq_margin = -std::numeric_limits<double>::infinity();
    rep.worst_dist_margin = -std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; ++v) {
        if (!grid.interior[v] || dist[v] <= excl) continue;
        const double m_sq = lap_sq[v] - cd.N * distortion_rate(cd, dist[v]);
        const double m_d = lap_d[v] - comparison_cot(cd, dist[v]);
        rep.worst_sq_margin = std::max(rep.worst_sq_margin, m_sq);
        rep.worst_dist_margin = std::max(rep.worst_dist_margin, m_d);
        if (m_sq > tol || m_d > tol) ++rep.violations;
        ++rep.checked;
    }
    if (rep.checked == 0) throw InvalidInput("distance_laplacian_comparison: empty annulus");
    return rep;
}

SupersolutionReport potential_supersolution_check(const GridGraph& grid,
                                                  const CurvatureDimension& cd, double R,
                                                  double tol, double inner_exclusion) {
    const double excl = inner_exclusion > 0.0 ? inner_exclusion : 3.0 * grid.mesh;
    if (!(excl > grid.mesh)) throw InvalidInput("potential_supersolution_check: exclusion too small");
    const int n = grid.graph.size();
    const RadialPotential profile(cd, 0.25 * grid.mesh, R);
    VertexFunction phi_of_d(n);
    for (int v = 0; v < n; ++v)
        phi_of_d[v] = grid.center_dist[v] >= R ? 0.0 : profile.value(std::max(grid.center_dist[v], 0.25 * grid.mesh));
    const VertexFunction lap = laplacian_density(grid.graph, phi_of_d);

    SupersolutionReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; ++v) {
        if (!grid.interior[v]) continue;
        const double d = grid.center_dist[v];
        if (d <= excl || d >= R) continue;
        // skip vertices whose stencil crosses the kink of the zero extension
        bool clean = true;
        for (const auto& nb : grid.graph.neighbors(v))
            if (grid.center_dist[nb.to] >= R) clean = false;
        if (!clean) continue;
        const double margin = lap[v] - 1.0;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin < -tol) ++rep.violations;
        ++rep.checked;
    }
    if (rep.checked == 0) throw InvalidInput("potential_supersolution_check: empty annulus");
    return rep;
}

ReplayReport maximum_principle_replay(const GridGraph& grid, const GeodesicConfig& cfg,
                                      const CurvatureDimension& cd, double theta, double R,
                                      double tol) {
    const ModelSpace& space = grid.space;
    validate_config(space, cfg);
    const Point apex = grid.points[grid.center];
    const TriangleStats apex_stats = excess_stats(space, cfg, apex);
    if (!(theta > 0.0) || theta >= apex_stats.height)
        throw InvalidConfig("replay: theta must stay below the apex height");
    if (!(R > theta)) throw InvalidConfig("replay: need theta < R");
    if (theta <= 3.0 * grid.mesh)
        throw InvalidConfig("replay: annulus is empty at this mesh");

    const int n = grid.graph.size();
    const double len = space.distance(cfg.x0, cfg.x1);
    VertexFunction excess(n);
    for (int v = 0; v < n; ++v)
        excess[v] = space.distance_unchecked(grid.points[v], cfg.x0) +
                    space.distance_unchecked(grid.points[v], cfg.x1) - len;

    const double leg = apex_stats.leg;
    if (!(leg > R)) throw InvalidConfig("replay: ball must stay clear of the endpoints");
    const double a = 2.0 * comparison_cot(cd, leg - R);

    const double r_table = std::max(0.25 * grid.mesh, theta - 4.0 * grid.mesh);
    const RadialPotential profile(cd, r_table, R);
    VertexFunction u(n);
    for (int v = 0; v < n; ++v) {
        const double d = grid.center_dist[v];
        const double phi = d >= R ? 0.0 : profile.value(std::max(d, r_table));
        u[v] = a * phi - excess[v];
    }

    // annulus vertices keep their whole stencil inside B_R; the ring whose
    // neighbors cross R joins the outer boundary band, where phi is already
    // within O(mesh^2) of its zero boundary value
    std::vector<int> annulus;
    std::vector<int> inner_band, outer_band;
    std::vector<char> in_annulus(n, 0);
    for (int v = 0; v < n; ++v) {
        const double d = grid.center_dist[v];
        if (d > theta && d < R) {
            if (!grid.interior[v])
                throw InvalidConfig("replay: grid too small for the annulus");
            bool clean = true;
            for (const auto& nb : grid.graph.neighbors(v))
                if (grid.center_dist[nb.to] >= R) clean = false;
            if (!clean) continue;
            annulus.push_back(v);
            in_annulus[v] = 1;
        }
    }
    if (annulus.empty()) throw InvalidConfig("replay: annulus is empty at this mesh");
    for (int v : annulus)
        for (const auto& nb : grid.graph.neighbors(v))
            if (!in_annulus[nb.to])
                (grid.center_dist[nb.to] <= theta ? inner_band : outer_band).push_back(nb.to);

    ReplayReport rep;
    rep.a = a;
    rep.apex_excess = apex_stats.excess;

    // step 1: lap(a phi - E) >= -tol on the annulus
    const VertexFunction lap_u = laplacian_density(grid.graph, u);
    double lap_min = std::numeric_limits<double>::infinity();
    for (int v : annulus) lap_min = std::min(lap_min, lap_u[v]);
    rep.steps.push_back({"laplacian", lap_min >= -tol, lap_min});

    // step 2: outer band nonpositive; inner band obeys Lipschitz propagation
    double outer_max = -std::numeric_limits<double>::infinity();
    for (int v : outer_band) outer_max = std::max(outer_max, u[v]);
    double lip_min = std::numeric_limits<double>::infinity();
    for (int v : inner_band)
        lip_min = std::min(lip_min, excess[v] - (apex_stats.excess - 2.0 * grid.center_dist[v]));
    const bool boundary_ok = outer_max <= tol && lip_min >= -1e-9;
    rep.steps.push_back({"boundary", boundary_ok, std::max(outer_max, -lip_min)});

    // step 3: maximum principle for the corrected function
    VertexFunction corrected(u);
    for (int v = 0; v < n; ++v)
        corrected[v] += 0.5 * tol * grid.center_dist[v] * grid.center_dist[v];
    const MaxPrincipleResult mp = max_principle_check(grid.graph, corrected, annulus);
    rep.steps.push_back({"maximum-principle", mp.boundary_attains,
                         mp.boundary_max - mp.interior_max});

    rep.passed = true;
    for (const auto& s : rep.steps)
        if (!s.passed) {
            rep.passed = false;
            if (rep.failing_step.empty()) rep.failing_step = s.name;
        }

    // discrete apex bound: the band width and the corrector each contribute slack
    double band = 0.0;
    for (int v : inner_band)
        for (const auto& nb : grid.graph.neighbors(v)) band = std::max(band, nb.len);
    const double slope = -comparison_potential_d1(cd, theta, R);
    const double slack = 0.5 * tol * R * R + (2.0 + a * slope) * 2.0 * band;
    rep.apex_bound = 2.0 * theta + a * comparison_potential(cd, theta, R) + slack;
    return rep;
}

double chain_rule_residual(const GridGraph& grid, const VertexFunction& g,
                           const ScalarMap& phi, double inner_exclusion) {
    check_sizes(grid.graph, g, "chain_rule_residual");
    const int n = grid.graph.size();
    VertexFunction composed(n);
    for (int v = 0; v < n; ++v) composed[v] = phi.f(g[v]);
    const VertexFunction lap_c = laplacian_density(grid.graph, composed);
    const VertexFunction lap_g = laplacian_density(grid.graph, g);
    const VertexFunction gamma = carre_du_champ(grid.graph, g, g);
    double worst = 0.0;
    for (int v = 0; v < n; ++v) {
        if (!grid.interior[v] || grid.center_dist[v] <= inner_exclusion) continue;
        const double r = lap_c[v] - phi.d1(g[v]) * lap_g[v] - phi.d2(g[v]) * gamma[v];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

} // namespace gcomp
