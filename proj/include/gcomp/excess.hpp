#ifndef GCOMP_EXCESS_HPP
#define GCOMP_EXCESS_HPP

#include "gcomp/kernels.hpp"

namespace gcomp {

// Triangle statistics of a point relative to a reference geodesic:
//   excess = d(x, x0) + d(x, x1) - d(x0, x1)
//   height = min over the geodesic of d(x, .)
//   leg    = min(d(x, x0), d(x, x1))
// Always 0 <= excess <= 2 * height and height <= leg.
struct TriangleStats {
    double excess;
    double height;
    double leg;
};

// Inputs of the ball excess bound: excess and leg at the ball center p,
// ball radius R, curvature budget alpha with K R^2 >= -alpha.
struct BallExcessHypotheses {
    double p_excess;
    double l_p;
    double R;
    double alpha;
    double K;
    double N;
};

// Coefficient driving the thin-triangle bound:
//   (s(h)/h)^{N-1} * comparison_cot(l - h) / N.
// Requires K <= 0 and 0 < h < l; for K = 0 it reduces to (N-1)/(N (l-h)).
double excess_coefficient(const CurvatureDimension& cd, double h, double l);

// Unique root theta in (0, h) of theta^{N-1} = D (h^N - theta^N); the
// minimizer of the thin-triangle objective.  Residual below
// 1e-12 * max(1, D h^N).
double optimal_cutoff(double D, double h, double N);

// Closed-form thin-triangle excess bound.  With D = excess_coefficient:
//   N > 2   : 2 (N-1)/(N-2) (D h^N)^{1/(N-1)}
//   1 < N < 2 : N/(2-N) D h^2
//   N = 2   : exact minimum of the flat-majorant objective (log form).
// Requires K <= 0, 0 < h < l.
double excess_bound(const CurvatureDimension& cd, double h, double l);

// inf over theta in (0, h) of  lip * theta + a * phi(theta, R),
// by golden section on the convex objective.  Requires 0 < h < R and
// K R^2 < (N-1) pi^2.
double comparison_bound(const CurvatureDimension& cd, double lip, double a,
                        double h, double R);

// Admissibility threshold of the ball excess bound:
//   A(N, alpha) = N / 2^N * (s_{-4 alpha, N}(1))^{1-N}.
// Positive, decreasing in alpha, -> N / 2^N as alpha -> 0.
double admissibility_constant(double N, double alpha);

// Ball excess bound: certified sum of the three case estimates
//   2 (N-1)/(N-2) (c R^N / A)^{1/(N-1)}
// + 2 (N-1)/(N-2) (E(p) R^{N-2} / (A phi0(1,2)))^{1/(N-1)}
// + E(p) + 2 sqrt(E(p) R / (A phi0(1,2)))
// with c = comparison_cot(l(p) - 3R) and A = admissibility_constant.
// Implemented for N > 2; throws HypothesisError naming the violated
// condition: (1) l > 3R, (2) K R^2 >= -alpha, (3) 2R c <= A.
double ball_excess_bound(const BallExcessHypotheses& hyp);

} // namespace gcomp

#endif
