#ifndef GCOMP_CD1D_HPP
#define GCOMP_CD1D_HPP

#include "gcomp/kernels.hpp"

#include <functional>
#include <string>
#include <vector>

namespace gcomp {

// Interval with a positive reference density; the weighted 1-D metric
// measure space all entropies refer to.
struct Space1D {
    double a;
    double b;
    std::function<double(double)> reference;

    static Space1D lebesgue(double a, double b);
    static Space1D exponential(double a, double b);          // density e^x
    static Space1D from_samples(const std::vector<double>& xs,
                                const std::vector<double>& ds);  // piecewise linear
};

// Absolutely continuous probability measure: piecewise-constant Lebesgue
// density on a strictly increasing edge grid, total mass 1.
struct Measure1D {
    std::vector<double> edges;    // size cells + 1
    std::vector<double> density;  // size cells, >= 0

    int cells() const { return static_cast<int>(density.size()); }
    double total_mass() const;

    // Normalizes the profile to mass one; throws InvalidInput on
    // non-monotone grids or negative densities.
    static Measure1D from_profile(double a, double b, int cells,
                                  const std::function<double(double)>& profile);
    static Measure1D make(std::vector<double> edges, std::vector<double> density);
};

// Loads (x, density) CSV samples, one pair per line.
Space1D load_density_csv(const std::string& path);
Measure1D load_measure_csv(const std::string& path, int cells);

// Pushforward of mu0 under x -> (1-t) x + t T(x), T the monotone
// (inverse-CDF) rearrangement onto mu1, re-binned mass-preservingly onto the
// common grid.  Throws GridMismatch when the grids differ.
Measure1D displacement_interpolation(const Measure1D& mu0, const Measure1D& mu1, double t);

// Quantile-coupling transport distance between measures on the same grid.
double w2_distance(const Measure1D& mu0, const Measure1D& mu1);

// sum over cells of u(rho/ref) * ref * dx with u(z) = -z^{1 - 1/Nprime};
// always <= 0, and -1 for the uniform density on [0,1] against Lebesgue.
double renyi_entropy(const Measure1D& mu, const Space1D& space, double Nprime);

// Entropy convexity check along the displacement interpolation: for each t
// and Nprime in {N, 2N} compares the interpolant entropy against the
// distortion-weighted endpoint bound.  Positive violation = convexity fails.
struct ConvexityItem {
    double t;
    double Nprime;
    double lhs;
    double rhs;
    double violation;  // lhs - rhs
};

struct ConvexityReport {
    std::vector<ConvexityItem> items;
    double max_violation = 0.0;
    double binning_tol = 0.0;  // 2 / cells
};

ConvexityReport entropy_convexity_check(const Space1D& space, const Measure1D& mu0,
                                        const Measure1D& mu1, double K, double N,
                                        const std::vector<double>& t_grid);

// Whether reference^{1/(N-1)} is concave on an n-point sample grid
// (second-difference test); predicts the pass/fail label of the convexity
// check for K = 0.
bool entropy_convexity_expected(const Space1D& space, int samples, double N);

} // namespace gcomp

#endif
