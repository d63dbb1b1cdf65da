#include "gcomp/kernels.hpp"
#include "gcomp/numerics.hpp"

#include <cmath>

namespace gcomp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPiSq = kPi * kPi;

// All branch formulas below are driven by the single parameter
//   u = K * theta^2 / (N - 1),
// which is positive in the spherical regime and negative in the hyperbolic
// one.  Each helper switches to a truncated series for |u| < 1e-6; the
// naive sin/sinh ratios lose precision there.

// sin(sqrt(u))/sqrt(u) for u > 0, sinh(sqrt(-u))/sqrt(-u) for u < 0.
double sinc_like(double u) {
    if (std::abs(u) < 1e-6) {
        return 1.0 + u * (-1.0 / 6.0 + u * (1.0 / 120.0 + u * (-1.0 / 5040.0)));
    }
    if (u > 0) {
        const double x = std::sqrt(u);
        return std::sin(x) / x;
    }
    const double x = std::sqrt(-u);
    return std::sinh(x) / x;
}

// cos(sqrt(u)) / cosh(sqrt(-u)).
double cos_like(double u) {
    if (std::abs(u) < 1e-6) {
        return 1.0 + u * (-0.5 + u * (1.0 / 24.0 + u * (-1.0 / 720.0)));
    }
    if (u > 0) return std::cos(std::sqrt(u));
    return std::cosh(std::sqrt(-u));
}

// x cot(x) with x = sqrt(u), or x coth(x) with x = sqrt(-u).
double xcot_like(double u) {
    if (std::abs(u) < 1e-6) {
        return 1.0 + u * (-1.0 / 3.0 + u * (-1.0 / 45.0 + u * (-2.0 / 945.0)));
    }
    if (u > 0) {
        const double x = std::sqrt(u);
        return x * std::cos(x) / std::sin(x);
    }
    const double x = std::sqrt(-u);
    return x / std::tanh(x);
}

double curvature_parameter(const CurvatureDimension& cd, double theta) {
    return cd.K * theta * theta / (cd.N - 1.0);
}

void require_theta(double theta) {
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw InvalidInput("theta must be finite and nonnegative");
}

// (r^{2-N} - R^{2-N}) / (N - 2), continuous through N = 2 where it becomes
// log(R/r).  expm1 keeps it stable for N near 2.
double power_gap(double r, double R, double N) {
    const double L = std::log(r / R);
    if (std::abs(N - 2.0) < 1e-12) return -L;
    const double a = 2.0 - N;
    return std::pow(R, a) * std::expm1(a * L) / (N - 2.0);
}

double potential_flat(double N, double r, double R) {
    return (std::pow(R, N) * power_gap(r, R, N) - 0.5 * (R * R - r * r)) / N;
}

void require_potential_domain(const CurvatureDimension& cd, double r, double R) {
    if (!(r > 0.0) || !(r <= R)) throw DomainError("comparison_potential: need 0 < r <= R");
    if (cd.K * R * R >= (cd.N - 1.0) * kPiSq)
        throw DomainError("comparison_potential: K R^2 must stay below (N-1) pi^2");
}

} // namespace

CurvatureDimension::CurvatureDimension(double K_, double N_) : K(K_), N(N_) {
    if (!std::isfinite(K) || !std::isfinite(N)) throw InvalidInput("curvature-dimension pair must be finite");
    if (!(N > 1.0)) throw InvalidInput("dimension bound N must exceed 1");
}

double generalized_sin(const CurvatureDimension& cd, double theta) {
    require_theta(theta);
    const double u = curvature_parameter(cd, theta);
    if (u > kPiSq * (1.0 + 4e-16))
        throw DomainError("generalized_sin: theta beyond the conjugate radius");
    return theta * sinc_like(std::min(u, kPiSq));
}

double generalized_sin_deriv(const CurvatureDimension& cd, double theta) {
    require_theta(theta);
    const double u = curvature_parameter(cd, theta);
    if (u > kPiSq * (1.0 + 4e-16))
        throw DomainError("generalized_sin_deriv: theta beyond the conjugate radius");
    return cos_like(std::min(u, kPiSq));
}

double comparison_cot(const CurvatureDimension& cd, double theta) {
    if (cd.K > 0.0) throw DomainError("comparison_cot: defined for K <= 0 only");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("comparison_cot: theta must be positive");
    return (cd.N - 1.0) / theta * xcot_like(curvature_parameter(cd, theta));
}

ExtendedReal distortion_coefficient(const CurvatureDimension& cd, double t, double theta) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("distortion_coefficient: t must lie in [0,1]");
    require_theta(theta);
    const double ktheta2 = cd.K * theta * theta;
    if (ktheta2 >= (cd.N - 1.0) * kPiSq) return ExtendedReal::inf();
    if (ktheta2 == 0.0) return ExtendedReal::finite(t);
    const double u = ktheta2 / (cd.N - 1.0);
    const double ratio = sinc_like(t * t * u) / sinc_like(u);
    return ExtendedReal::finite(t * std::pow(ratio, 1.0 - 1.0 / cd.N));
}

double distortion_rate(const CurvatureDimension& cd, double theta) {
    require_theta(theta);
    if (cd.K * theta * theta >= (cd.N - 1.0) * kPiSq)
        throw DomainError("distortion_rate: K theta^2 must stay below (N-1) pi^2");
    const double u = curvature_parameter(cd, theta);
    return (1.0 + (cd.N - 1.0) * xcot_like(u)) / cd.N;
}

double comparison_potential(const CurvatureDimension& cd, double r, double R) {
    require_potential_domain(cd, r, R);
    if (r == R) return 0.0;
    if (cd.K == 0.0) return potential_flat(cd.N, r, R);
    const double p = cd.N - 1.0;
    const CumulativeIntegral inner([&](double eta) { return std::pow(generalized_sin(cd, eta), p); },
                                   r, R, 1e-15, 1e-13);
    auto outer = [&](double xi) { return inner.tail(xi) / std::pow(generalized_sin(cd, xi), p); };
    return integrate(outer, r, R, 1e-14, 5e-13);
}

double comparison_potential_d1(const CurvatureDimension& cd, double r, double R) {
    require_potential_domain(cd, r, R);
    if (r == R) return 0.0;
    if (cd.K == 0.0) return -(std::pow(R, cd.N) - std::pow(r, cd.N)) / (cd.N * std::pow(r, cd.N - 1.0));
    const double p = cd.N - 1.0;
    const double sr = std::pow(generalized_sin(cd, r), p);
    const double inner = integrate([&](double eta) { return std::pow(generalized_sin(cd, eta), p); },
                                   r, R, 1e-15, 5e-14);
    return -inner / sr;
}

double comparison_potential_d2(const CurvatureDimension& cd, double r, double R) {
    require_potential_domain(cd, r, R);
    const double slope = (cd.N - 1.0) * generalized_sin_deriv(cd, r) / generalized_sin(cd, r);
    return 1.0 - slope * comparison_potential_d1(cd, r, R);
}

double bishop_gromov_ratio(const CurvatureDimension& cd, double r, double R) {
    if (!(r > 0.0) || !(r <= R)) throw DomainError("bishop_gromov_ratio: need 0 < r <= R");
    if (cd.K > 0.0) {
        const double cap = kPi * std::sqrt((cd.N - 1.0) / cd.K);
        if (R > cap * (1.0 + 4e-16)) throw DomainError("bishop_gromov_ratio: R beyond the model diameter");
        R = std::min(R, cap);
        r = std::min(r, cap);
    }
    if (r == R) return 1.0;
    if (cd.K == 0.0) return std::exp(cd.N * std::log(r / R));
    const double p = cd.N - 1.0;
    auto sp = [&](double t) { return std::pow(generalized_sin(cd, t), p); };
    const double num = integrate(sp, 0.0, r, 1e-15, 5e-14);
    const double den = num + integrate(sp, r, R, 1e-15, 5e-14);
    return num / den;
}

ExtendedReal max_diameter(const CurvatureDimension& cd) {
    if (cd.K > 0.0) return ExtendedReal::finite(kPi * std::sqrt((cd.N - 1.0) / cd.K));
    return ExtendedReal::inf();
}

double excess_modulus(double N, double R, double E, double l, double K) {
    if (!(N > 1.0)) throw DomainError("excess_modulus: need N > 1");
    if (!(R > 0.0)) throw DomainError("excess_modulus: need R > 0");
    if (!(E >= 0.0)) throw DomainError("excess_modulus: need E >= 0");
    if (K > 0.0) throw DomainError("excess_modulus: defined for K <= 0");
    if (!(l > 3.0 * R)) throw DomainError("excess_modulus: need l > 3R");

    const CurvatureDimension cd(K, N);
    const double c = comparison_cot(cd, l - 3.0 * R);
    const double sqrt_er = std::sqrt(E * R);
    if (N > 2.0) {
        const double e_term = std::pow(E * std::pow(R, N - 2.0), 1.0 / (N - 1.0));
        const double c_term = std::pow(c * std::pow(R, N), 1.0 / (N - 1.0));
        return E + sqrt_er + e_term + c_term;
    }
    if (N < 2.0) {
        return E + sqrt_er + c * R * R;
    }
    const double e_log = E > 0.0 ? E * std::log(2.0 + R / E) : 0.0;
    return e_log + sqrt_er + c * R * R * std::log(2.0 + 1.0 / (c * R));
}

} // namespace gcomp
