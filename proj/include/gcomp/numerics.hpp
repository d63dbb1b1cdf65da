#ifndef GCOMP_NUMERICS_HPP
#define GCOMP_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace gcomp {

// Adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b].
// Stops when the local error estimate drops below
// max(abs_tol, rel_tol * |integral so far|) on every segment.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-12);

// Adaptive segmentation of int_a^b f, queryable for tail integrals
// int_x^b f at the cost of one extra quadrature panel per call.  Backs the
// nested integrals of the comparison potential.
class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<double(double)> f, double a, double b,
                       double abs_tol = 1e-13, double rel_tol = 1e-13);
    double total() const { return suffix_.front(); }
    double tail(double x) const;  // int_x^b f

private:
    std::function<double(double)> f_;
    double a_, b_;
    std::vector<double> bounds_;  // segment boundaries, ascending, size m+1
    std::vector<double> suffix_;  // suffix_[k] = int_{bounds_[k]}^{b} f
};

struct MinResult {
    double x;
    double value;
};

// Golden-section search on [a, b]; assumes a unimodal (or convex) objective.
// Shrinks the bracket below x_tol and returns the best sampled point,
// endpoints included.
MinResult golden_section_minimize(const std::function<double(double)>& f,
                                  double a, double b, double x_tol);

// Bracketed root of a continuous monotone f with f(a), f(b) of opposite sign.
// Bisection with a secant acceleration step; max_iter guards the loop.
double find_root(const std::function<double(double)>& f, double a, double b,
                 int max_iter = 200);

// Gaussian elimination with partial pivoting; A is n x n row-major.
std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b);

// Deterministic RNG.  The mt19937_64 engine itself is fully specified by the
// standard; the float conversions are done by hand because the standard
// distributions are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal();  // standard normal, Box-Muller

    int uniform_int(int lo, int hi) {  // inclusive range
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace gcomp

#endif
