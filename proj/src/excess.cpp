#include "gcomp/excess.hpp"
#include "gcomp/numerics.hpp"

#include <cmath>

namespace gcomp {

namespace {

void require_thin_triangle(const CurvatureDimension& cd, double h, double l) {
    if (cd.K > 0.0) throw DomainError("excess bound: defined for K <= 0 only");
    if (!(h > 0.0) || !(l > h)) throw DomainError("excess bound: need 0 < h < l");
}

} // namespace

double excess_coefficient(const CurvatureDimension& cd, double h, double l) {
    require_thin_triangle(cd, h, l);
    const double s_ratio = generalized_sin(cd, h) / h;
    return std::pow(s_ratio, cd.N - 1.0) * comparison_cot(cd, l - h) / cd.N;
}

double optimal_cutoff(double D, double h, double N) {
    if (!(D > 0.0) || !(h > 0.0) || !(N > 1.0))
        throw InvalidInput("optimal_cutoff: need D > 0, h > 0, N > 1");
    // Solve in log scale: with y = log theta the defining equation
    // theta^{N-1} (1 + D theta) = D h^N becomes
    //   g(y) = (N-1) y + log1p(D e^y) - log(D h^N) = 0,
    // strictly increasing, and well conditioned even when the root sits
    // hundreds of orders below h (N close to 1, D small).
    const double L = std::log(D) + N * std::log(h);
    auto g = [&](double y) { return (N - 1.0) * y + std::log1p(D * std::exp(y)) - L; };
    const double hi = std::log(h);  // g(log h) = log((1 + Dh)/(Dh)) > 0
    const double lo = (L - std::log1p(D * h)) / (N - 1.0) - 1.0;
    double y = find_root(g, std::min(lo, hi - 1e-9), hi, 200);
    for (int i = 0; i < 6; ++i) {
        const double dth = D * std::exp(y);
        const double deriv = (N - 1.0) + dth / (1.0 + dth);
        const double next = y - g(y) / deriv;
        if (std::isfinite(next) && next < hi) y = next;
    }
    return std::exp(y);
}

double excess_bound(const CurvatureDimension& cd, double h, double l) {
    require_thin_triangle(cd, h, l);
    const double N = cd.N;
    const double D = excess_coefficient(cd, h, l);
    if (N > 2.0) {
        return 2.0 * (N - 1.0) / (N - 2.0) * std::pow(D * std::pow(h, N), 1.0 / (N - 1.0));
    }
    if (N < 2.0) {
        return N / (2.0 - N) * D * h * h;
    }
    // N = 2: the majorant 2 theta + 2D (h^2 log(h/theta) - (h^2-theta^2)/2)
    // minimizes at theta0 with 2D theta0^2 + 2 theta0 - 2D h^2 = 0; the
    // minimum value takes the closed log form below with d = 2D.
    const double d = 2.0 * D;
    const double root = std::sqrt(1.0 + d * d * h * h);
    return d * h * h * (1.0 / (1.0 + root) + std::log((1.0 + root) / (d * h)));
}

double comparison_bound(const CurvatureDimension& cd, double lip, double a,
                        double h, double R) {
    if (!(lip >= 0.0) || !(a >= 0.0)) throw DomainError("comparison_bound: need lip, a >= 0");
    if (!(h > 0.0) || !(h < R)) throw DomainError("comparison_bound: need 0 < h < R");
    if (cd.K * R * R >= (cd.N - 1.0) * 3.14159265358979323846 * 3.14159265358979323846)
        throw DomainError("comparison_bound: K R^2 must stay below (N-1) pi^2");
    auto objective = [&](double theta) {
        return lip * theta + a * comparison_potential(cd, theta, R);
    };
    // theta -> 0 has a singular derivative when N >= 2; keep the bracket off 0
    const double lo = 1e-12 * h;
    const double hi = h * (1.0 - 1e-12);
    MinResult m = golden_section_minimize(objective, lo, hi, 1e-12 * std::max(h, 1.0));
    return m.value;
}

double admissibility_constant(double N, double alpha) {
    if (!(N > 1.0) || !(alpha > 0.0))
        throw InvalidInput("admissibility_constant: need N > 1, alpha > 0");
    const CurvatureDimension cd(-4.0 * alpha, N);
    return N / std::pow(2.0, N) * std::pow(generalized_sin(cd, 1.0), 1.0 - N);
}

double ball_excess_bound(const BallExcessHypotheses& hyp) {
    const double N = hyp.N;
    if (!(N > 2.0))
        throw DomainError("ball_excess_bound: implemented for N > 2 only");
    if (hyp.K > 0.0) throw DomainError("ball_excess_bound: need K <= 0");
    if (!(hyp.R > 0.0) || !(hyp.alpha > 0.0) || !(hyp.p_excess >= 0.0))
        throw DomainError("ball_excess_bound: need R > 0, alpha > 0, E(p) >= 0");

    if (!(hyp.l_p > 3.0 * hyp.R))
        throw HypothesisError(1, "ball_excess_bound: condition (i) l(p) > 3R fails");
    if (!(hyp.K * hyp.R * hyp.R >= -hyp.alpha))
        throw HypothesisError(2, "ball_excess_bound: condition (ii) K R^2 >= -alpha fails");

    const CurvatureDimension cd(hyp.K, N);
    const double c = comparison_cot(cd, hyp.l_p - 3.0 * hyp.R);
    const double A = admissibility_constant(N, hyp.alpha);
    if (!(2.0 * hyp.R * c <= A))
        throw HypothesisError(3, "ball_excess_bound: condition (iii) 2R c <= A fails");

    const CurvatureDimension flat(0.0, N);
    const double phi12 = comparison_potential(flat, 1.0, 2.0);
    const double front = 2.0 * (N - 1.0) / (N - 2.0);
    const double inv_exp = 1.0 / (N - 1.0);
    const double E = hyp.p_excess;
    const double R = hyp.R;

    const double case1 = front * std::pow(c * std::pow(R, N) / A, inv_exp);
    const double case2 = front * std::pow(E * std::pow(R, N - 2.0) / (A * phi12), inv_exp);
    const double case3 = E + 2.0 * std::sqrt(E * R / (A * phi12));
    return case1 + case2 + case3;
}

} // namespace gcomp
