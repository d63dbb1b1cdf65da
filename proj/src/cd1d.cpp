#include "gcomp/cd1d.hpp"
#include "gcomp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace gcomp {

namespace {

constexpr double kPiSq = 3.14159265358979323846 * 3.14159265358979323846;

// Cumulative masses at the cell edges.
std::vector<double> cumulative(const Measure1D& mu) {
    std::vector<double> M(mu.edges.size(), 0.0);
    for (int i = 0; i < mu.cells(); ++i)
        M[i + 1] = M[i] + mu.density[i] * (mu.edges[i + 1] - mu.edges[i]);
    return M;
}

// Quantile of mu at mass m with M = cumulative(mu): inf{x : F(x) >= m}.
// Zero-density plateaus at the support edges resolve toward the support.
double quantile(const Measure1D& mu, const std::vector<double>& M, double m) {
    if (m <= 0.0) {
        for (int i = 0; i < mu.cells(); ++i)
            if (mu.density[i] > 0.0) return mu.edges[i];
        return mu.edges.front();
    }
    m = std::min(m, M.back());
    const auto it = std::lower_bound(M.begin(), M.end(), m);
    const int j = static_cast<int>(it - M.begin());  // M[j] >= m > M[j-1]
    if (j == 0) return mu.edges.front();
    // density[j-1] > 0 since the cumulative strictly increases across it
    return mu.edges[j - 1] + (m - M[j - 1]) / mu.density[j - 1];
}

// Merged mass breakpoints of the two coupled measures.
std::vector<double> mass_slices(const std::vector<double>& M0, const std::vector<double>& M1) {
    std::vector<double> m;
    m.reserve(M0.size() + M1.size());
    m.insert(m.end(), M0.begin(), M0.end());
    m.insert(m.end(), M1.begin(), M1.end());
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
            m.end());
    if (m.front() > 0.0) m.insert(m.begin(), 0.0);
    if (m.back() < 1.0) m.push_back(1.0);
    return m;
}

void require_same_grid(const Measure1D& a, const Measure1D& b) {
    if (a.edges.size() != b.edges.size())
        throw GridMismatch("measures live on different grids");
    for (std::size_t i = 0; i < a.edges.size(); ++i)
        if (a.edges[i] != b.edges[i]) throw GridMismatch("measures live on different grids");
}

} // namespace

Space1D Space1D::lebesgue(double a, double b) {
    if (!(a < b)) throw InvalidInput("space interval must be nonempty");
    return {a, b, [](double) { return 1.0; }};
}

Space1D Space1D::exponential(double a, double b) {
    if (!(a < b)) throw InvalidInput("space interval must be nonempty");
    return {a, b, [](double x) { return std::exp(x); }};
}

Space1D Space1D::from_samples(const std::vector<double>& xs, const std::vector<double>& ds) {
    if (xs.size() < 2 || xs.size() != ds.size())
        throw InvalidInput("reference samples: need matching xs/ds with at least 2 points");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw InvalidInput("reference samples must be strictly increasing");
    for (double d : ds)
        if (!(d > 0.0)) throw InvalidInput("reference density must be positive");
    auto xs_c = xs;
    auto ds_c = ds;
    auto ref = [xs_c, ds_c](double x) {
        if (x <= xs_c.front()) return ds_c.front();
        if (x >= xs_c.back()) return ds_c.back();
        const auto it = std::upper_bound(xs_c.begin(), xs_c.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs_c.begin());
        const double t = (x - xs_c[i - 1]) / (xs_c[i] - xs_c[i - 1]);
        return (1.0 - t) * ds_c[i - 1] + t * ds_c[i];
    };
    return {xs.front(), xs.back(), ref};
}

double Measure1D::total_mass() const {
    double m = 0.0;
    for (int i = 0; i < cells(); ++i) m += density[i] * (edges[i + 1] - edges[i]);
    return m;
}

Measure1D Measure1D::make(std::vector<double> edges, std::vector<double> density) {
    if (edges.size() < 2 || edges.size() != density.size() + 1)
        throw InvalidInput("measure: edges must be one longer than densities");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1])) throw InvalidInput("measure: grid must be strictly increasing");
    for (double d : density)
        if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidInput("measure: density must be nonnegative");
    Measure1D mu{std::move(edges), std::move(density)};
    const double m = mu.total_mass();
    if (!(m > 0.0)) throw InvalidInput("measure: zero total mass");
    for (auto& d : mu.density) d /= m;
    return mu;
}

Measure1D Measure1D::from_profile(double a, double b, int cells,
                                  const std::function<double(double)>& profile) {
    if (!(a < b) || cells < 1) throw InvalidInput("measure profile: bad interval or cell count");
    std::vector<double> edges(cells + 1), density(cells);
    for (int i = 0; i <= cells; ++i) edges[i] = a + (b - a) * i / cells;
    for (int i = 0; i < cells; ++i) density[i] = profile(0.5 * (edges[i] + edges[i + 1]));
    return make(std::move(edges), std::move(density));
}

Space1D load_density_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open density file: " + path);
    std::vector<double> xs, ds;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x, d;
        if (ls >> x >> d) {
            xs.push_back(x);
            ds.push_back(d);
        }
    }
    return Space1D::from_samples(xs, ds);
}

Measure1D load_measure_csv(const std::string& path, int cells) {
    const Space1D profile = load_density_csv(path);
    return Measure1D::from_profile(profile.a, profile.b, cells, profile.reference);
}

Measure1D displacement_interpolation(const Measure1D& mu0, const Measure1D& mu1, double t) {
    require_same_grid(mu0, mu1);
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("interpolation parameter must lie in [0,1]");
    const std::vector<double> M0 = cumulative(mu0);
    const std::vector<double> M1 = cumulative(mu1);
    const std::vector<double> slices = mass_slices(M0, M1);

    const std::vector<double>& edges = mu0.edges;
    std::vector<double> mass(mu0.cells(), 0.0);

    auto deposit = [&](double lo, double hi, double dm) {
        lo = std::max(lo, edges.front());
        hi = std::min(hi, edges.back());
        if (hi - lo < 1e-300) {
            // point-like image: all mass into the containing cell
            const auto it = std::upper_bound(edges.begin(), edges.end(), lo);
            int c = static_cast<int>(it - edges.begin()) - 1;
            c = std::min(std::max(c, 0), mu0.cells() - 1);
            mass[c] += dm;
            return;
        }
        const double inv = dm / (hi - lo);
        auto it = std::upper_bound(edges.begin(), edges.end(), lo);
        int c = std::max(0, static_cast<int>(it - edges.begin()) - 1);
        for (; c < mu0.cells() && edges[c] < hi; ++c) {
            const double seg = std::min(hi, edges[c + 1]) - std::max(lo, edges[c]);
            if (seg > 0.0) mass[c] += inv * seg;
        }
    };

    for (std::size_t k = 0; k + 1 < slices.size(); ++k) {
        const double dm = slices[k + 1] - slices[k];
        if (dm <= 1e-15) continue;
        const double ya = (1.0 - t) * quantile(mu0, M0, slices[k]) + t * quantile(mu1, M1, slices[k]);
        const double yb = (1.0 - t) * quantile(mu0, M0, slices[k + 1]) + t * quantile(mu1, M1, slices[k + 1]);
        deposit(std::min(ya, yb), std::max(ya, yb), dm);
    }

    std::vector<double> density(mu0.cells());
    for (int i = 0; i < mu0.cells(); ++i) density[i] = mass[i] / (edges[i + 1] - edges[i]);
    return Measure1D::make(edges, std::move(density));
}

double w2_distance(const Measure1D& mu0, const Measure1D& mu1) {
    require_same_grid(mu0, mu1);
    const std::vector<double> M0 = cumulative(mu0);
    const std::vector<double> M1 = cumulative(mu1);
    const std::vector<double> slices = mass_slices(M0, M1);
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < slices.size(); ++k) {
        const double dm = slices[k + 1] - slices[k];
        if (dm <= 1e-15) continue;
        const double da = quantile(mu0, M0, slices[k]) - quantile(mu1, M1, slices[k]);
        const double db = quantile(mu0, M0, slices[k + 1]) - quantile(mu1, M1, slices[k + 1]);
        acc += dm * (da * da + da * db + db * db) / 3.0;
    }
    return std::sqrt(std::max(acc, 0.0));
}

double renyi_entropy(const Measure1D& mu, const Space1D& space, double Nprime) {
    if (!(Nprime > 1.0)) throw InvalidInput("renyi_entropy: Nprime > 1 required");
    const double expo = 1.0 - 1.0 / Nprime;
    double u = 0.0;
    for (int i = 0; i < mu.cells(); ++i) {
        if (mu.density[i] <= 0.0) continue;
        const double dx = mu.edges[i + 1] - mu.edges[i];
        const double mid = 0.5 * (mu.edges[i] + mu.edges[i + 1]);
        const double ref = space.reference(mid);
        if (!(ref > 0.0)) throw InvalidInput("renyi_entropy: reference density must be positive");
        u -= std::pow(mu.density[i] / ref, expo) * ref * dx;
    }
    return u;
}

ConvexityReport entropy_convexity_check(const Space1D& space, const Measure1D& mu0,
                                        const Measure1D& mu1, double K, double N,
                                        const std::vector<double>& t_grid) {
    require_same_grid(mu0, mu1);
    const CurvatureDimension cd_probe(K, N);  // validates N > 1
    (void)cd_probe;

    if (K > 0.0) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int i = 0; i < mu0.cells(); ++i) {
            if (mu0.density[i] > 0.0 || mu1.density[i] > 0.0) {
                lo = std::min(lo, mu0.edges[i]);
                hi = std::max(hi, mu0.edges[i + 1]);
            }
        }
        const double diam = hi - lo;
        if (!(K * diam * diam < (N - 1.0) * kPiSq))
            throw DomainError("entropy_convexity_check: support diameter too large for K > 0");
    }

    const std::vector<double> M0 = cumulative(mu0);
    const std::vector<double> M1 = cumulative(mu1);
    const std::vector<double> slices = mass_slices(M0, M1);

    ConvexityReport rep;
    rep.binning_tol = 2.0 / mu0.cells();
    rep.max_violation = -std::numeric_limits<double>::infinity();

    for (double t : t_grid) {
        const Measure1D mid = displacement_interpolation(mu0, mu1, t);
        for (double Nprime : {N, 2.0 * N}) {
            const CurvatureDimension cd(K, Nprime);
            const double lhs = renyi_entropy(mid, space, Nprime);

            double rhs_sum = 0.0;
            bool infinite = false;
            for (std::size_t k = 0; k + 1 < slices.size() && !infinite; ++k) {
                const double dm = slices[k + 1] - slices[k];
                if (dm <= 1e-15) continue;
                const double x_a = quantile(mu0, M0, slices[k]);
                const double x_b = quantile(mu0, M0, slices[k + 1]);
                const double y_a = quantile(mu1, M1, slices[k]);
                const double y_b = quantile(mu1, M1, slices[k + 1]);
                const double theta = std::abs(0.5 * ((x_a - y_a) + (x_b - y_b)));
                const double rho_leb = dm / std::max(x_b - x_a, 1e-300);
                const double eta_leb = dm / std::max(y_b - y_a, 1e-300);
                const double rho_m = rho_leb / space.reference(0.5 * (x_a + x_b));
                const double eta_m = eta_leb / space.reference(0.5 * (y_a + y_b));
                const ExtendedReal t0 = distortion_coefficient(cd, 1.0 - t, theta);
                const ExtendedReal t1 = distortion_coefficient(cd, t, theta);
                if (t0.is_infinite() || t1.is_infinite()) {
                    infinite = true;
                    break;
                }
                rhs_sum += dm * (t0.value * std::pow(rho_m, -1.0 / Nprime) +
                                 t1.value * std::pow(eta_m, -1.0 / Nprime));
            }
            const double rhs = infinite ? -std::numeric_limits<double>::infinity() : -rhs_sum;
            rep.items.push_back({t, Nprime, lhs, rhs, lhs - rhs});
            rep.max_violation = std::max(rep.max_violation, lhs - rhs);
        }
    }
    return rep;
}

bool entropy_convexity_expected(const Space1D& space, int samples, double N) {
    if (samples < 3) throw InvalidInput("entropy_convexity_expected: need >= 3 samples");
    if (!(N > 1.0)) throw InvalidInput("entropy_convexity_expected: need N > 1");
    std::vector<double> f(samples);
    double scale = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = space.a + (space.b - space.a) * i / (samples - 1);
        f[i] = std::pow(space.reference(x), 1.0 / (N - 1.0));
        scale = std::max(scale, std::abs(f[i]));
    }
    for (int i = 1; i + 1 < samples; ++i)
        if (f[i - 1] - 2.0 * f[i] + f[i + 1] > 1e-10 * scale) return false;
    return true;
}

} // namespace gcomp
