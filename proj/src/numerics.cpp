#include "gcomp/numerics.hpp"
#include "gcomp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gcomp {

namespace {

// G7/K15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr double kKronrodWeights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

// Gauss weights sit on the odd Kronrod nodes.
constexpr double kGaussWeights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct SegmentResult {
    double integral;
    double error;
};

SegmentResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * kKronrodNodes[i]);
        kron += kKronrodWeights[i] * v;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * v;
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth) {
    SegmentResult r = gk15(f, a, b);
    if (r.error <= tol || depth >= 40 || b - a < 1e-15 * (std::abs(a) + 1.0)) {
        return r.integral;
    }
    const double c = 0.5 * (a + b);
    return integrate_rec(f, a, c, 0.5 * tol, depth + 1) +
           integrate_rec(f, c, b, 0.5 * tol, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol) {
    if (a == b) return 0.0;
    SegmentResult first = gk15(f, a, b);
    const double scale = std::max(std::abs(first.integral), 1.0);
    const double tol = std::max(abs_tol, rel_tol * scale);
    if (first.error <= tol) return first.integral;
    const double c = 0.5 * (a + b);
    return integrate_rec(f, a, c, 0.5 * tol, 1) + integrate_rec(f, c, b, 0.5 * tol, 1);
}

namespace {

void collect_segments(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth, std::vector<std::pair<double, double>>& segs) {
    SegmentResult r = gk15(f, a, b);
    if (r.error <= tol || depth >= 40 || b - a < 1e-15 * (std::abs(a) + 1.0)) {
        segs.push_back({b, r.integral});
        return;
    }
    const double c = 0.5 * (a + b);
    collect_segments(f, a, c, 0.5 * tol, depth + 1, segs);
    collect_segments(f, c, b, 0.5 * tol, depth + 1, segs);
}

} // namespace

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double a, double b,
                                       double abs_tol, double rel_tol)
    : f_(std::move(f)), a_(a), b_(b) {
    if (!(a < b)) {
        bounds_ = {a, b};
        suffix_ = {0.0, 0.0};
        return;
    }
    SegmentResult first = gk15(f_, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::max(std::abs(first.integral), 1.0));
    std::vector<std::pair<double, double>> segs;  // (right endpoint, integral)
    collect_segments(f_, a, b, tol, 0, segs);
    bounds_.resize(segs.size() + 1);
    suffix_.assign(segs.size() + 1, 0.0);
    bounds_[0] = a;
    for (std::size_t k = 0; k < segs.size(); ++k) bounds_[k + 1] = segs[k].first;
    for (std::size_t k = segs.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + segs[k].second;
}

double CumulativeIntegral::tail(double x) const {
    if (x <= a_) return suffix_.front();
    if (x >= b_) return 0.0;
    const auto it = std::upper_bound(bounds_.begin(), bounds_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - bounds_.begin());  // x < bounds_[k]
    // one panel for the partial stretch; the segmentation already resolved it
    return gk15(f_, x, bounds_[k]).integral + suffix_[k];
}

MinResult golden_section_minimize(const std::function<double(double)>& f,
                                  double a, double b, double x_tol) {
    if (!(a < b)) throw InvalidInput("golden_section_minimize: empty bracket");
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    double best_x = f1 < f2 ? x1 : x2;
    double best_f = std::min(f1, f2);

    while (b - a > x_tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        if (f1 < best_f) { best_f = f1; best_x = x1; }
        if (f2 < best_f) { best_f = f2; best_x = x2; }
    }
    const double fa = f(a), fb = f(b);
    if (fa < best_f) { best_f = fa; best_x = a; }
    if (fb < best_f) { best_f = fb; best_x = b; }
    return {best_x, best_f};
}

double find_root(const std::function<double(double)>& f, double a, double b,
                 int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw InvalidInput("find_root: endpoints do not bracket");
    for (int it = 0; it < max_iter; ++it) {
        double mid = 0.5 * (a + b);
        // secant candidate on alternating iterations only, so the bracket
        // still halves geometrically when the secant crawls along one end
        if (it % 2 == 1 && std::abs(fb - fa) > 0.0) {
            const double sec = a - fa * (b - a) / (fb - fa);
            if (sec > a + 0.01 * (b - a) && sec < b - 0.01 * (b - a)) mid = sec;
        }
        const double fm = f(mid);
        if (fm == 0.0 || b - a < 4e-16 * (std::abs(mid) + 1.0)) return mid;
        if ((fm > 0) == (fa > 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    throw ConvergenceError("find_root: no convergence within iteration budget");
}

std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    if (A.size() != n * n) throw DimensionMismatch("solve_dense: matrix/vector size mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (std::abs(A[piv * n + col]) < 1e-300)
            throw InvalidInput("solve_dense: singular matrix");
        if (piv != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        const double d = A[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = A[r * n + col] / d;
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= factor * A[col * n + c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= A[i * n + c] * x[c];
        x[i] = s / A[i * n + i];
    }
    return x;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

} // namespace gcomp
