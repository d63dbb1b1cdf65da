// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one pass/fail line per criterion.  Exit status is the
// number of failed criteria.
#include "gcomp/campaign.hpp"
#include "gcomp/cd1d.hpp"
#include "gcomp/excess.hpp"
#include "gcomp/graph_calculus.hpp"
#include "gcomp/kernels.hpp"
#include "gcomp/model_space.hpp"
#include "gcomp/numerics.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace gcomp;
using nlohmann::json;

namespace {

struct Criterion {
    bool pass;
    std::string detail;
};

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch()).count();
}

// 1. potential and derivatives against the independent quadrature oracle
Criterion kernel_oracle_equivalence() {
    const double t0 = now_s();
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double K = rng.uniform(-4.0, 0.0);
        const double N = rng.uniform(1.0 + 1e-3, 6.0);
        const double R = rng.uniform(0.2, 3.0);
        const double r = R * rng.uniform(0.02, 0.999);
        const CurvatureDimension cd(K, N);

        const double phi = comparison_potential(cd, r, R);
        const double d1 = comparison_potential_d1(cd, r, R);
        const double d2 = comparison_potential_d2(cd, r, R);
        const double o_phi = (double)oracle::phi_defining(K, N, r, R);
        const double o_d1 = (double)oracle::phi_d1_defining(K, N, r, R);
        const double o_d2 = (double)oracle::phi_d2_defining(K, N, r, R);

        worst = std::max(worst, std::abs(phi - o_phi) / std::max(1e-300, std::abs(o_phi)));
        worst = std::max(worst, std::abs(d1 - o_d1) / std::max(1e-300, std::abs(o_d1)));
        worst = std::max(worst, std::abs(d2 - o_d2) / std::max(1e-300, std::abs(o_d2)));
    }
    const double dt = now_s() - t0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "worst relative error %.3g over 500 points, %.1f s", worst, dt);
    return {worst < 1e-10 && dt < 30.0, buf};
}

// 2. scaling, sandwich, monotonicity and distortion-rate identities
Criterion identity_suite() {
    Rng rng(103);
    double worst_scale_s = 0.0, worst_scale_phi = 0.0, worst_rate = 0.0, worst_diff = 0.0;
    bool order_ok = true;
    for (int i = 0; i < 1000; ++i) {
        const double K = rng.uniform(-4.0, 0.0);
        const double N = rng.uniform(1.05, 6.0);
        const double R = rng.uniform(0.2, 3.0);
        const double r = R * rng.uniform(0.05, 0.97);
        const double lam = rng.uniform(0.2, 2.5);
        const double theta = rng.uniform(0.01, 3.0);
        const CurvatureDimension cd(K, N);
        const CurvatureDimension cd_lam(lam * lam * K, N);

        // s(K, lam theta) = lam s(lam^2 K, theta)
        {
            const double lhs = generalized_sin(cd, lam * theta);
            const double rhs = lam * generalized_sin(cd_lam, theta);
            worst_scale_s =
                std::max(worst_scale_s, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        // phi(K; lam r, lam R) = lam^2 phi(lam^2 K; r, R)
        {
            const double lhs = comparison_potential(cd, lam * r, lam * R);
            const double rhs = lam * lam * comparison_potential(cd_lam, r, R);
            worst_scale_phi =
                std::max(worst_scale_phi, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        // flat potential sandwich and the integrand ratio bounds
        {
            const CurvatureDimension flat(0.0, N);
            const double pk = comparison_potential(cd, r, R);
            const double p0 = comparison_potential(flat, r, R);
            const double amp = std::pow(generalized_sin(cd, R) / R, N - 1.0);
            if (!(p0 <= pk * (1 + 1e-11) && pk <= amp * p0 * (1 + 1e-11))) order_ok = false;
            const double xi = R * rng.uniform(0.02, 1.0);
            const double eta = xi + (R - xi) * rng.uniform(0.0, 1.0);
            const double ratio = generalized_sin(cd, eta) / generalized_sin(cd, xi);
            if (!(eta / xi <= ratio * (1 + 1e-12) &&
                  ratio <= generalized_sin(cd, R) / R * (eta / xi) * (1 + 1e-12)))
                order_ok = false;
        }
        // one-sided difference of the distortion coefficient at t = 1
        {
            const double step = 1e-6;
            const double quot = (distortion_coefficient(cd, 1.0, theta).value -
                                 distortion_coefficient(cd, 1.0 - step, theta).value) / step;
            worst_diff = std::max(worst_diff, std::abs(quot - distortion_rate(cd, theta)));
        }
        // (N tau~ - 1)/theta = (N-1) s'/s
        {
            const double lhs = (N * distortion_rate(cd, theta) - 1.0) / theta;
            const double rhs =
                (N - 1.0) * generalized_sin_deriv(cd, theta) / generalized_sin(cd, theta);
            worst_rate = std::max(worst_rate, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "s-scaling %.2g, phi-scaling %.2g, rate-identity %.2g, t-difference %.2g",
                  worst_scale_s, worst_scale_phi, worst_rate, worst_diff);
    return {worst_scale_s < 1e-12 && worst_scale_phi < 1e-10 && order_ok &&
                worst_rate < 1e-10 && worst_diff < 1e-5,
            buf};
}

// 3. thin-triangle bound on 10^4 samples in each smooth model
Criterion thin_triangle_models() {
    const double t0 = now_s();
    int failures = 0;
    double worst = 1e300;
    const json spaces[] = {
        {{"kind", "euclidean"}, {"dim", 2}, {"radius", 3.0}},
        {{"kind", "euclidean"}, {"dim", 3}, {"radius", 3.0}},
        {{"kind", "hyperbolic"}, {"dim", 2}, {"K", -1.0}, {"radius", 3.0}},
    };
    for (const json& sp : spaces) {
        const Report r = run_campaign(json{{"campaign", "ag1-sample"},
                                           {"space", sp},
                                           {"samples", 10000},
                                           {"seed", 314159}});
        failures += r.summary["failures"].get<int>();
        worst = std::min(worst, r.summary["worst_margin"].get<double>());
    }
    const double dt = now_s() - t0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d violations in 30000 samples, min margin %.3g, %.1f s",
                  failures, worst, dt);
    return {failures == 0 && dt < 60.0, buf};
}

// 4. the max-norm plane violates the bound below a positive threshold
Criterion max_norm_failure() {
    const double t0 = now_s();
    const Report r = run_campaign(json{{"campaign", "linf-counterexample"},
                                       {"L", 1.0},
                                       {"ladder", 10},
                                       {"seed", 1}});
    const double dt = now_s() - t0;
    const double eps_star = r.summary["eps_star"].get<double>();
    char buf[160];
    std::snprintf(buf, sizeof buf, "eps* = %.6g, ladder of 10 all violating, %.2f s", eps_star, dt);
    return {r.all_passed && eps_star > 0.0 && eps_star < 0.5 && dt < 5.0, buf};
}

// 5. volume ratios achieve the comparison bound on the model spaces
Criterion volume_ratio_equality() {
    const Report r = run_campaign(json{{"campaign", "bishop-gromov"},
                                       {"pairs", 100},
                                       {"tolerance", 1e-9},
                                       {"seed", 271828}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "worst |ratio - volume ratio| = %.3g over %zu checks",
                  r.summary["worst_margin"].get<double>(), r.records.size());
    return {r.all_passed, buf};
}

// 6 and 7 share one batch of random graphs
const Report& graph_report() {
    static Report r = run_campaign(json{{"campaign", "graph-identities"},
                                        {"graphs", 100},
                                        {"max_vertices", 500},
                                        {"seed", 424242}});
    return r;
}

Criterion exact_discrete_identities() {
    const double t0 = now_s();
    const Report& r = graph_report();
    const double dt = now_s() - t0;
    double worst = 0.0;  // residuals relative to their 1e-12 roundoff scale
    for (const auto& rec : r.records) worst = std::max(worst, rec["margin"].get<double>());
    char buf[160];
    std::snprintf(buf, sizeof buf, "100 graphs, worst residual at %.3g of its allowance, %.1f s",
                  worst, dt);
    return {worst <= 1.0 && dt < 30.0, buf};
}

Criterion discrete_maximum_principle() {
    const Report& r = graph_report();
    int holds = 0;
    for (const auto& rec : r.records)
        if (rec["max_principle"].get<bool>() && rec["subminimizer"].get<bool>()) ++holds;
    char buf[160];
    std::snprintf(buf, sizeof buf, "boundary attainment on %d/100 generated instances", holds);
    return {holds == 100, buf};
}

// 8 and 9: comparison margins shrink under mesh refinement
struct LaplaceRuns {
    Report eu;
    Report hy;
};

const LaplaceRuns& laplace_runs() {
    static LaplaceRuns runs{
        run_campaign(json{{"campaign", "laplace-compare"},
                          {"space", {{"kind", "euclidean"}, {"dim", 2}, {"radius", 0.5}}},
                          {"meshes", {0.04, 0.02, 0.01}},
                          {"exclusion", 0.12},
                          {"tol_coeff", 10.0},
                          {"seed", 1}}),
        run_campaign(json{{"campaign", "laplace-compare"},
                          {"space",
                           {{"kind", "hyperbolic"}, {"dim", 2}, {"K", -1.0}, {"radius", 0.5}}},
                          {"meshes", {0.04, 0.02, 0.01}},
                          {"exclusion", 0.12},
                          {"tol_coeff", 10.0},
                          {"seed", 1}})};
    return runs;
}

bool factor_decay(const std::vector<double>& m, double factor, double floor) {
    for (std::size_t k = 0; k + 1 < m.size(); ++k) {
        const bool below = m[k] <= floor && m[k + 1] <= floor;
        if (!below && !(m[k] >= factor * m[k + 1])) return false;
    }
    return true;
}

Criterion laplacian_comparison_convergence() {
    const double t0 = now_s();
    const LaplaceRuns& runs = laplace_runs();
    const double dt = now_s() - t0;
    bool ok = true;
    std::string detail;
    for (const Report* r : {&runs.eu, &runs.hy}) {
        const auto sq = r->summary["sq_margins"].get<std::vector<double>>();
        const auto di = r->summary["dist_margins"].get<std::vector<double>>();
        ok = ok && factor_decay(sq, 1.8, 1e-10) && factor_decay(di, 1.8, 1e-10);
        ok = ok && sq.back() <= 0.05 && di.back() <= 0.05;
        char buf[120];
        std::snprintf(buf, sizeof buf, "[sq %.2g->%.2g dist %.2g->%.2g] ", sq.front(), sq.back(),
                      di.front(), di.back());
        detail += buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f s", dt);
    return {ok && dt < 300.0, detail + buf};
}

Criterion potential_supersolution_convergence() {
    const LaplaceRuns& runs = laplace_runs();
    bool ok = true;
    std::string detail;
    const std::vector<double> meshes{0.04, 0.02, 0.01};
    for (const Report* r : {&runs.eu, &runs.hy}) {
        const auto sup = r->summary["supersolution_margins"].get<std::vector<double>>();
        ok = ok && factor_decay(sup, 1.8, 1e-10);
        // margin must stay above -C mesh at each mesh
        for (std::size_t k = 0; k < sup.size(); ++k)
            if (!(sup[k] <= 10.0 * meshes[k])) ok = false;
        char buf[120];
        std::snprintf(buf, sizeof buf, "[neg margin %.2g->%.2g] ", sup.front(), sup.back());
        detail += buf;
    }
    return {ok, detail};
}

// 10. the maximum-principle replay passes on the plane, breaks on max-norm
Criterion proof_replay() {
    const Report eu = run_campaign(json{{"campaign", "proof-replay"},
                                        {"case", "euclidean"},
                                        {"mesh", 0.01},
                                        {"seed", 1}});
    const Report li = run_campaign(json{{"campaign", "proof-replay"},
                                        {"case", "linf"},
                                        {"mesh", 0.005},
                                        {"seed", 1}});
    const std::string failing = li.summary["failing_step"].get<std::string>();
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "euclidean apex E %.4g <= bound %.4g; max-norm run breaks at step '%s'",
                  eu.summary["apex_excess"].get<double>(), eu.summary["apex_bound"].get<double>(),
                  failing.c_str());
    return {eu.all_passed && li.all_passed && !failing.empty(), buf};
}

// 11. one-dimensional entropy convexity
Criterion entropy_convexity_1d() {
    const Report r = run_campaign(json{{"campaign", "cd1d"},
                                       {"cells", 2000},
                                       {"N", 2.0},
                                       {"seed", 6}});
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "flat violation %.2g <= %.2g; e^x violation %.3g (refined %.3g)",
                  r.summary["flat_violation"].get<double>(),
                  3.0 * r.summary["binning_tol"].get<double>(),
                  r.summary["exp_violation"].get<double>(),
                  r.summary["exp_violation_refined"].get<double>());
    return {r.all_passed, buf};
}

// 12. cutoff root residual and dominance over the exact infimum
Criterion cutoff_and_dominance() {
    Rng rng(107);
    double worst_resid = 0.0;
    bool dominated = true;
    for (int i = 0; i < 1000; ++i) {
        const double K = rng.uniform(-4.0, 0.0);
        const double N = rng.uniform(1.05, 6.0);
        const double h = rng.uniform(0.05, 1.5);
        const double l = h + rng.uniform(0.05, 2.5);
        const CurvatureDimension cd(K, N);
        const double D = excess_coefficient(cd, h, l);
        const double t0 = optimal_cutoff(D, h, N);
        const double resid =
            std::abs(std::pow(t0, N - 1.0) - D * (std::pow(h, N) - std::pow(t0, N)));
        worst_resid = std::max(worst_resid, resid / std::max(1.0, D * std::pow(h, N)));

        const double a = 2.0 * comparison_cot(cd, l - h);
        const double exact = comparison_bound(cd, 2.0, a, h, h * (1.0 + 1e-9));
        if (!(excess_bound(cd, h, l) >= exact - 1e-8 * std::max(1.0, exact))) dominated = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "worst scaled residual %.3g; closed form >= infimum on 1000 draws", worst_resid);
    return {worst_resid < 1e-12 && dominated, buf};
}

} // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<Criterion()> run;
    };
    const std::vector<Entry> entries = {
        {"kernel oracle equivalence", kernel_oracle_equivalence},
        {"identity suite", identity_suite},
        {"thin-triangle bound on model spaces", thin_triangle_models},
        {"max-norm counterexample", max_norm_failure},
        {"volume ratio equality", volume_ratio_equality},
        {"exact discrete identities", exact_discrete_identities},
        {"discrete maximum principle", discrete_maximum_principle},
        {"laplacian comparison convergence", laplacian_comparison_convergence},
        {"potential supersolution convergence", potential_supersolution_convergence},
        {"maximum-principle replay", proof_replay},
        {"one-dimensional entropy convexity", entropy_convexity_1d},
        {"cutoff residual and infimum dominance", cutoff_and_dominance},
    };

    int failed = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Criterion c;
        try {
            c = entries[i].run();
        } catch (const std::exception& e) {
            c = {false, std::string("exception: ") + e.what()};
        }
        if (!c.pass) ++failed;
        std::printf("[%s] criterion %zu: %s — %s\n", c.pass ? "PASS" : "FAIL", i + 1,
                    entries[i].name, c.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu criteria, %d failed\n", entries.size(), failed);
    return failed;
}
