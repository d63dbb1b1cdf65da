#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gcomp/kernels.hpp"
#include "gcomp/numerics.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace gcomp;

namespace {
constexpr double kPi = 3.14159265358979323846;

CurvatureDimension cd(double K, double N) { return CurvatureDimension(K, N); }
} // namespace

TEST_CASE("curvature-dimension pair validates N > 1") {
    CHECK_THROWS_AS(cd(0.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(cd(0.0, 0.5), InvalidInput);
    CHECK_NOTHROW(cd(-3.0, 1.0001));
}

TEST_CASE("generalized sine: flat, hyperbolic and scaling") {
    CHECK(generalized_sin(cd(0, 3), 2.5) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(generalized_sin(cd(-1, 2), 1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
    CHECK(generalized_sin(cd(1, 2), 1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-15));

    // s(K, lambda t) = lambda s(lambda^2 K, t)
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        const double K = rng.uniform(-4.0, 4.0);
        const double N = rng.uniform(1.05, 6.0);
        const double t = rng.uniform(0.0, 2.0);
        const double lam = rng.uniform(0.1, 3.0);
        if (K > 0 && K * lam * lam * t * t >= (N - 1) * kPi * kPi) continue;
        const double lhs = generalized_sin(cd(K, N), lam * t);
        const double rhs = lam * generalized_sin(cd(lam * lam * K, N), t);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("generalized sine: continuity through K = 0 and domain errors") {
    for (double theta : {0.3, 1.0, 2.7}) {
        const double base = generalized_sin(cd(0, 2.5), theta);
        CHECK(std::abs(generalized_sin(cd(1e-12, 2.5), theta) - base) < 1e-8);
        CHECK(std::abs(generalized_sin(cd(-1e-12, 2.5), theta) - base) < 1e-8);
    }
    CHECK_THROWS_AS(generalized_sin(cd(1, 2), kPi + 0.01), DomainError);
    CHECK_THROWS_AS(generalized_sin(cd(0, 2), -0.5), InvalidInput);
    // derivative branches
    CHECK(generalized_sin_deriv(cd(0, 4), 1.7) == doctest::Approx(1.0));
    CHECK(generalized_sin_deriv(cd(-2, 3), 1.0) ==
          doctest::Approx(std::cosh(std::sqrt(1.0))).epsilon(1e-14));
}

TEST_CASE("comparison cotangent") {
    CHECK(comparison_cot(cd(0, 3), 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    // coth(1) against a long-double evaluation of the defining formula
    const long double want = std::sqrt(1.0L) * std::cosh(1.0L) / std::sinh(1.0L);
    CHECK(comparison_cot(cd(-1, 2), 1.0) == doctest::Approx((double)want).epsilon(1e-14));
    CHECK(comparison_cot(cd(-1, 2), 1.0) == doctest::Approx(1.3130352854993312).epsilon(1e-12));

    // nonincreasing in theta, and -> 0 for K = 0
    double prev = comparison_cot(cd(0, 2), 0.5);
    for (double t = 1.0; t < 300.0; t *= 2.0) {
        const double cur = comparison_cot(cd(0, 2), t);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(prev < 1e-2);
    // continuity at K = 0^-
    CHECK(std::abs(comparison_cot(cd(-1e-12, 3), 1.3) - comparison_cot(cd(0, 3), 1.3)) < 1e-8);

    CHECK_THROWS_AS(comparison_cot(cd(1, 2), 1.0), DomainError);
    CHECK_THROWS_AS(comparison_cot(cd(0, 2), 0.0), DomainError);
}

TEST_CASE("distortion coefficient branches") {
    CHECK(distortion_coefficient(cd(0, 5), 0.3, 7.0).value == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(distortion_coefficient(cd(1, 2), 0.5, 4.0).is_infinite());  // 16 >= pi^2
    CHECK_FALSE(distortion_coefficient(cd(1, 2), 0.5, 3.0).is_infinite());

    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const double K = rng.uniform(-5.0, 2.0);
        const double N = rng.uniform(1.05, 6.0);
        const double theta = rng.uniform(0.0, 2.0);
        if (K * theta * theta >= (N - 1) * kPi * kPi) continue;
        CHECK(distortion_coefficient(cd(K, N), 1.0, theta).value == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(distortion_coefficient(cd(K, N), 0.0, theta).value == doctest::Approx(0.0));
    }
}

TEST_CASE("distortion coefficient: monotone in t away from the conjugate regime") {
    Rng rng(13);
    for (int i = 0; i < 60; ++i) {
        const double N = rng.uniform(1.1, 6.0);
        double K = rng.uniform(-4.0, 4.0);
        double theta = rng.uniform(0.05, 2.0);
        if (K > 0) {
            // keep theta sqrt(K/(N-1)) <= pi/2; beyond it the coefficient
            // genuinely stops being monotone
            theta = std::min(theta, 0.5 * kPi / std::sqrt(K / (N - 1)));
        }
        double prev = 0.0;
        for (int k = 0; k <= 20; ++k) {
            const double t = k / 20.0;
            const double v = distortion_coefficient(cd(K, N), t, theta).value;
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("distortion coefficient continuity through K = 0") {
    for (double t : {0.2, 0.7}) {
        const double base = distortion_coefficient(cd(0, 3), t, 1.4).value;
        CHECK(std::abs(distortion_coefficient(cd(1e-12, 3), t, 1.4).value - base) < 1e-8);
        CHECK(std::abs(distortion_coefficient(cd(-1e-12, 3), t, 1.4).value - base) < 1e-8);
    }
    // spherical branch literal: t^{1/N} (sin(t x)/sin(x))^{1-1/N}
    const double x = 1.0;
    const double want = std::sqrt(0.5) * std::sqrt(std::sin(0.5 * x) / std::sin(x));
    CHECK(distortion_coefficient(cd(1, 2), 0.5, 1.0).value == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("remaining kernels are continuous through K = 0") {
    for (double K : {1e-12, -1e-12}) {
        CHECK(std::abs(comparison_potential(cd(K, 3), 1.0, 2.0) -
                       comparison_potential(cd(0, 3), 1.0, 2.0)) < 1e-8);
        CHECK(std::abs(distortion_rate(cd(K, 3), 1.3) - distortion_rate(cd(0, 3), 1.3)) < 1e-8);
        CHECK(std::abs(comparison_potential_d1(cd(K, 2.5), 0.7, 1.9) -
                       comparison_potential_d1(cd(0, 2.5), 0.7, 1.9)) < 1e-8);
        CHECK(std::abs(comparison_potential_d2(cd(K, 2.5), 0.7, 1.9) -
                       comparison_potential_d2(cd(0, 2.5), 0.7, 1.9)) < 1e-8);
    }
}

TEST_CASE("distortion rate: values, difference quotient, cotangent identity") {
    CHECK(distortion_rate(cd(0, 7), 3.0) == doctest::Approx(1.0).epsilon(1e-15));
    const double want = (1.0 + 1.0 / std::tanh(1.0)) / 2.0;
    CHECK(distortion_rate(cd(-1, 2), 1.0) == doctest::Approx(want).epsilon(1e-14));
    // spherical branch: (1/N)(1 + theta sqrt(K(N-1)) cot(theta sqrt(K/(N-1))))
    CHECK(distortion_rate(cd(1, 2), 1.0) ==
          doctest::Approx(0.5 * (1.0 + std::cos(1.0) / std::sin(1.0))).epsilon(1e-14));

    // one-sided difference of the distortion coefficient at t = 1
    {
        const CurvatureDimension c(-2, 3);
        const double theta = 1.2, t = 1e-6;
        const double quot = (distortion_coefficient(c, 1.0, theta).value -
                             distortion_coefficient(c, 1.0 - t, theta).value) / t;
        CHECK(std::abs(quot - distortion_rate(c, theta)) < 1e-5);
    }

    // (N tau~ - 1)/r = (N-1) s'/s, which is the comparison cotangent
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        const double K = rng.uniform(-4.0, 0.0);
        const double N = rng.uniform(1.05, 6.0);
        const double r = rng.uniform(0.05, 3.0);
        const CurvatureDimension c(K, N);
        const double lhs = (N * distortion_rate(c, r) - 1.0) / r;
        const double rhs = (N - 1.0) * generalized_sin_deriv(c, r) / generalized_sin(c, r);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
        CHECK(std::abs(lhs - comparison_cot(c, r)) < 1e-10 * std::max(1.0, std::abs(rhs)));
    }

    CHECK_THROWS_AS(distortion_rate(cd(1, 2), kPi), DomainError);
}

TEST_CASE("comparison potential: flat closed form and oracle agreement") {
    CHECK(comparison_potential(cd(-1, 2), 1.7, 1.7) == 0.0);
    CHECK(comparison_potential(cd(0, 3), 1.0, 2.0) == doctest::Approx(5.0 / 6.0).epsilon(1e-13));

    Rng rng(5);
    for (int i = 0; i < 25; ++i) {
        const double K = rng.uniform(-4.0, 0.0);
        const double N = rng.uniform(1.05, 6.0);
        const double R = rng.uniform(0.3, 3.0);
        const double r = R * rng.uniform(0.05, 0.95);
        const double got = comparison_potential(cd(K, N), r, R);
        const double want = (double)oracle::phi_defining(K, N, r, R);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
    CHECK_THROWS_AS(comparison_potential(cd(0, 2), 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(comparison_potential(cd(4, 2), 1.0, 2.0), DomainError);
}

TEST_CASE("comparison potential scaling identity") {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        const double K = rng.uniform(-4.0, 0.5);
        const double N = rng.uniform(1.05, 6.0);
        const double R = rng.uniform(0.3, 2.0);
        const double r = R * rng.uniform(0.05, 0.95);
        const double lam = rng.uniform(0.2, 2.5);
        if (K > 0 && K * lam * lam * R * R >= (N - 1) * kPi * kPi) continue;
        const double lhs = comparison_potential(cd(K, N), lam * r, lam * R);
        const double rhs = lam * lam * comparison_potential(cd(lam * lam * K, N), r, R);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("comparison potential sandwich and ratio monotonicity for K <= 0") {
    Rng rng(19);
    for (int i = 0; i < 100; ++i) {
        const double K = rng.uniform(-4.0, 0.0);
        const double N = rng.uniform(1.05, 6.0);
        const double R = rng.uniform(0.3, 3.0);
        const double r = R * rng.uniform(0.05, 0.95);
        const CurvatureDimension c(K, N);
        const CurvatureDimension flat(0.0, N);
        const double phi_k = comparison_potential(c, r, R);
        const double phi_0 = comparison_potential(flat, r, R);
        const double amp = std::pow(generalized_sin(c, R) / R, N - 1.0);
        CHECK(phi_0 <= phi_k * (1 + 1e-11));
        CHECK(phi_k <= amp * phi_0 * (1 + 1e-11));

        // eta/xi <= s(eta)/s(xi) <= (s(R)/R)(eta/xi) for 0 < xi <= eta <= R
        const double xi = R * rng.uniform(0.02, 1.0);
        const double eta = xi + (R - xi) * rng.uniform(0.0, 1.0);
        const double ratio = generalized_sin(c, eta) / generalized_sin(c, xi);
        CHECK(eta / xi <= ratio * (1 + 1e-12));
        CHECK(ratio <= generalized_sin(c, R) / R * (eta / xi) * (1 + 1e-12));
    }
}

TEST_CASE("potential derivatives: closed forms and finite differences") {
    CHECK(comparison_potential_d1(cd(-1, 2), 1.3, 1.3) == 0.0);
    CHECK(comparison_potential_d1(cd(0, 3), 1.0, 2.0) == doctest::Approx(-7.0 / 3.0).epsilon(1e-13));
    CHECK(comparison_potential_d2(cd(0, 3), 1.0, 2.0) == doctest::Approx(17.0 / 3.0).epsilon(1e-13));

    Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        const double K = rng.uniform(-4.0, 0.0);
        const double N = rng.uniform(1.2, 6.0);
        const double R = rng.uniform(0.5, 3.0);
        const double r = R * rng.uniform(0.2, 0.8);
        const CurvatureDimension c(K, N);
        const double h = 1e-5;
        const double fd1 = (comparison_potential(c, r + h, R) - comparison_potential(c, r - h, R)) / (2 * h);
        const double fd2 = (comparison_potential(c, r + h, R) - 2 * comparison_potential(c, r, R) +
                            comparison_potential(c, r - h, R)) / (h * h);
        const double d1 = comparison_potential_d1(c, r, R);
        const double d2 = comparison_potential_d2(c, r, R);
        CHECK(std::abs(fd1 - d1) <= 1e-6 * std::max(1.0, std::abs(d1)));
        CHECK(std::abs(fd2 - d2) <= 1e-4 * std::max(1.0, std::abs(d2)));
        CHECK(d1 <= 0.0);
    }
}

TEST_CASE("bishop-gromov ratio") {
    CHECK(bishop_gromov_ratio(cd(0, 4), 1.0, 2.0) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(bishop_gromov_ratio(cd(-2, 3), 0.7, 0.7) == 1.0);
    CHECK(bishop_gromov_ratio(cd(1, 2), kPi / 2, kPi) == doctest::Approx(0.5).epsilon(1e-12));

    // oracle cross-check of the sinh branch
    const double got = bishop_gromov_ratio(cd(-1, 2), 0.5, 2.0);
    const long double num = oracle::simpson(
        [](long double t) { return std::sinh(t); }, 0.0L, 0.5L, 1e-15L);
    const long double den = oracle::simpson(
        [](long double t) { return std::sinh(t); }, 0.0L, 2.0L, 1e-15L);
    CHECK(got == doctest::Approx((double)(num / den)).epsilon(1e-11));

    // value in (0, 1], continuity at K = 0
    CHECK(std::abs(bishop_gromov_ratio(cd(1e-12, 3), 1.0, 2.0) -
                   bishop_gromov_ratio(cd(0, 3), 1.0, 2.0)) < 1e-8);
    CHECK(std::abs(bishop_gromov_ratio(cd(-1e-12, 3), 1.0, 2.0) -
                   bishop_gromov_ratio(cd(0, 3), 1.0, 2.0)) < 1e-8);

    CHECK_THROWS_AS(bishop_gromov_ratio(cd(1, 2), 1.0, kPi + 0.1), DomainError);
    CHECK_THROWS_AS(bishop_gromov_ratio(cd(0, 2), 0.0, 1.0), DomainError);
}

TEST_CASE("max diameter") {
    CHECK(max_diameter(cd(1, 2)).value == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(max_diameter(cd(0, 5)).is_infinite());
    CHECK(max_diameter(cd(-3, 2)).is_infinite());
    CHECK(max_diameter(cd(4, 5)).value == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("excess modulus") {
    // N > 2 branch, term by term
    {
        const double N = 3, R = 1, E = 0.01, l = 10, K = 0;
        const double c = comparison_cot(cd(K, N), l - 3 * R);
        const double want = E + std::sqrt(E * R) + std::sqrt(E) + std::sqrt(c);
        CHECK(excess_modulus(N, R, E, l, K) == doctest::Approx(want).epsilon(1e-13));
    }
    // N = 2 branch with both logarithms finite
    {
        const double N = 2, R = 1, E = 0.01, l = 10, K = -0.01;
        const double c = comparison_cot(cd(K, N), l - 3 * R);
        const double want = E * std::log(2 + R / E) + std::sqrt(E * R) +
                            c * R * R * std::log(2 + 1 / (c * R));
        CHECK(excess_modulus(N, R, E, l, K) == doctest::Approx(want).epsilon(1e-13));
    }
    // N < 2 branch
    {
        const double N = 1.5, R = 1, E = 0.02, l = 8, K = -0.5;
        const double c = comparison_cot(cd(K, N), l - 3 * R);
        CHECK(excess_modulus(N, R, E, l, K) ==
              doctest::Approx(E + std::sqrt(E * R) + c * R * R).epsilon(1e-13));
    }
    // tends to zero as (E, 1/l, -K) -> 0, monotonically along the ladder
    double prev = excess_modulus(3, 1, 0.0, 10, 0.0) + 1.0;
    for (int k = 1; k <= 12; ++k) {
        const double v = excess_modulus(3, 1, 0.0, 10.0 * std::pow(2.0, k), 0.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-2);
    CHECK(excess_modulus(2, 1, 0.0, 1e9, 0.0) < 1e-6);

    CHECK_THROWS_AS(excess_modulus(3, 1, 0.0, 2.9, 0.0), DomainError);
    CHECK_THROWS_AS(excess_modulus(3, 1, 0.0, 10.0, 0.5), DomainError);
}
