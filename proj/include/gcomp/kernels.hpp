#ifndef GCOMP_KERNELS_HPP
#define GCOMP_KERNELS_HPP

#include "gcomp/errors.hpp"

namespace gcomp {

// Curvature lower bound K (units 1/length^2) and dimension upper bound N.
// N > 1 strictly; K any finite real.  Operations that need K <= 0 or K > 0
// enforce that themselves.
struct CurvatureDimension {
    double K;
    double N;
    CurvatureDimension(double K_, double N_);
};

// Finite value or an explicit +infinity tag.  The tag is never the result of
// overflow; it is set only where a formula's singular branch applies.
struct ExtendedReal {
    double value;
    bool infinite;

    static ExtendedReal finite(double v) { return {v, false}; }
    static ExtendedReal inf() { return {0.0, true}; }
    bool is_infinite() const { return infinite; }
};

// Generalized sine: the solution of s'' + (K/(N-1)) s = 0 with s(0)=0, s'(0)=1.
//   K > 0 : sqrt((N-1)/K)  * sin (theta * sqrt( K/(N-1)))
//   K = 0 : theta
//   K < 0 : sqrt((N-1)/-K) * sinh(theta * sqrt(-K/(N-1)))
// Continuous across K = 0 (series evaluation for small |K| theta^2 / (N-1)).
// Requires theta >= 0; for K > 0 also theta * sqrt(K/(N-1)) <= pi.
double generalized_sin(const CurvatureDimension& cd, double theta);

// d/dtheta of generalized_sin: cos / 1 / cosh branch-wise.
double generalized_sin_deriv(const CurvatureDimension& cd, double theta);

// Mean-curvature comparison value for the distance sphere of radius theta:
//   (N-1) * s'(theta) / s(theta), i.e.
//   K = 0 : (N-1)/theta
//   K < 0 : sqrt(-K(N-1)) * coth(theta * sqrt(-K/(N-1)))
// Defined for K <= 0, theta > 0; nonincreasing in theta.
double comparison_cot(const CurvatureDimension& cd, double theta);

// Distortion coefficient of the convexity inequality:
//   +inf                                          if K theta^2 >= (N-1) pi^2
//   t^{1/N} (sin (t x)/sin (x))^{1-1/N},  x = theta sqrt( K/(N-1)), if K theta^2 > 0
//   t                                             if K theta^2 = 0
//   t^{1/N} (sinh(t x)/sinh(x))^{1-1/N},  x = theta sqrt(-K/(N-1)), if K theta^2 < 0
// t in [0,1], theta >= 0.  No throwing branch: the singular regime maps to +inf.
ExtendedReal distortion_coefficient(const CurvatureDimension& cd, double t, double theta);

// One-sided t-derivative of the distortion coefficient at t = 1:
//   (1/N) (1 + theta sqrt(|K|(N-1)) cot/cotanh(theta sqrt(|K|/(N-1)))), and 1 at K = 0.
// Satisfies (N * value - 1)/theta = (N-1) s'(theta)/s(theta).
// For K > 0 requires K theta^2 < (N-1) pi^2.
double distortion_rate(const CurvatureDimension& cd, double theta);

// Comparison potential: the double integral
//   phi(r, R) = int_{r <= xi <= eta <= R} (s(eta)/s(xi))^{N-1} deta dxi,
// for 0 < r <= R with K R^2 < (N-1) pi^2.  Vanishes at r = R, positive for
// r < R.  Closed form for K = 0, nested adaptive quadrature otherwise.
double comparison_potential(const CurvatureDimension& cd, double r, double R);

// d/dr and d^2/dr^2 of the comparison potential:
//   d1 = -int_r^R (s(eta)/s(r))^{N-1} deta             (<= 0)
//   d2 = 1 + (N-1) (s'(r)/s(r)) int_r^R (s(eta)/s(r))^{N-1} deta
double comparison_potential_d1(const CurvatureDimension& cd, double r, double R);
double comparison_potential_d2(const CurvatureDimension& cd, double r, double R);

// Lower bound for the concentric ball volume ratio m(B_r)/m(B_R):
//   int_0^r s(t)^{N-1} dt / int_0^R s(t)^{N-1} dt   (r^N / R^N when K = 0).
// Requires 0 < r <= R <= pi sqrt((N-1)/max(K,0)).  Value in (0, 1].
double bishop_gromov_ratio(const CurvatureDimension& cd, double r, double R);

// pi sqrt((N-1)/K) for K > 0, +inf otherwise.
ExtendedReal max_diameter(const CurvatureDimension& cd);

// Scale-invariant excess modulus for the ball excess bound.  Requires N > 1,
// R > 0, E >= 0, K <= 0 and l > 3R.  Tends to 0 as (E, 1/l, -K) -> 0.
double excess_modulus(double N, double R, double E, double l, double K);

} // namespace gcomp

#endif
