#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gcomp/campaign.hpp"
#include "gcomp/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace gcomp;
using nlohmann::json;

TEST_CASE("config validation names the offending field") {
    CHECK_THROWS_AS(run_campaign(json{{"campaign", "unknown-kind"}, {"seed", 1}}), ConfigError);

    try {
        run_campaign(json{{"campaign", "ag1-sample"},
                          {"space", {{"kind", "euclidean"}, {"dim", 2}, {"radius", -1.0}}},
                          {"samples", 5},
                          {"seed", 1}});
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.field == "space.radius");
    }

    // seeds are mandatory
    try {
        run_campaign(json{{"campaign", "ag1-sample"},
                          {"space", {{"kind", "euclidean"}, {"dim", 2}}},
                          {"samples", 5}});
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.field == "seed");
    }

    try {
        run_campaign(json{{"campaign", "ag1-sample"},
                          {"space", {{"kind", "sphere"}, {"dim", 2}, {"K", 1.0}}},
                          {"samples", 5},
                          {"seed", 1}});
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.field == "space.kind");
    }
}

TEST_CASE("small thin-triangle campaign passes and replays byte for byte") {
    const json spec{{"campaign", "ag1-sample"},
                    {"space", {{"kind", "euclidean"}, {"dim", 2}, {"radius", 3.0}}},
                    {"samples", 200},
                    {"seed", 20240401}};
    const Report a = run_campaign(spec);
    CHECK(a.all_passed);
    CHECK(a.records.size() == 200);
    CHECK(a.summary["failures"].get<int>() == 0);

    const Report b = run_campaign(spec);
    json ja = a.to_json(), jb = b.to_json();
    ja.erase("wall_time_s");
    jb.erase("wall_time_s");
    CHECK(ja == jb);
}

TEST_CASE("hyperbolic thin-triangle campaign") {
    const json spec{{"campaign", "ag1-sample"},
                    {"space", {{"kind", "hyperbolic"}, {"dim", 2}, {"K", -1.0}, {"radius", 2.5}}},
                    {"samples", 100},
                    {"seed", 7}};
    const Report r = run_campaign(spec);
    CHECK(r.all_passed);
}

TEST_CASE("max-norm counterexample campaign finds the violation threshold") {
    const Report r = run_campaign(json{{"campaign", "linf-counterexample"},
                                       {"L", 1.0},
                                       {"ladder", 6},
                                       {"seed", 3}});
    CHECK(r.all_passed);
    const double eps_star = r.summary["eps_star"].get<double>();
    CHECK(eps_star > 0.0);
    CHECK(eps_star < 0.5);
    int ladder_records = 0;
    for (const auto& rec : r.records)
        if (rec["phase"] == "ladder") {
            CHECK(rec["pass"].get<bool>());
            ++ladder_records;
        }
    CHECK(ladder_records == 6);
}

TEST_CASE("emit: csv columns, empty report, json mirror") {
    const json spec{{"campaign", "ag1-sample"},
                    {"space", {{"kind", "euclidean"}, {"dim", 2}, {"radius", 2.0}}},
                    {"samples", 10},
                    {"seed", 5}};
    const Report r = run_campaign(spec);

    std::ostringstream csv;
    emit_table(r, "csv", csv);
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "campaign,seed,K,N,h,l,E,bound,margin,pass");
    int count = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) ++count;
    CHECK(count == 10);

    Report empty;
    empty.campaign = json{{"campaign", "ag1-sample"}};
    std::ostringstream ecsv;
    emit_table(empty, "csv", ecsv);
    CHECK(ecsv.str() == "campaign,seed,K,N,h,l,E,bound,margin,pass\n");

    // json table mirrors the records losslessly
    std::ostringstream js;
    emit_table(r, "json", js);
    const json parsed = json::parse(js.str());
    REQUIRE(parsed.size() == r.records.size());
    for (std::size_t i = 0; i < r.records.size(); ++i) CHECK(parsed[i] == r.records[i]);

    // report round trip through its json form
    const Report back = Report::from_json(r.to_json());
    CHECK(back.records == r.records);
    CHECK(back.summary == r.summary);
    CHECK(back.all_passed == r.all_passed);

    CHECK_THROWS_AS(emit_table(r, "xml", js), InvalidInput);
}

TEST_CASE("large report emits quickly") {
    const json spec{{"campaign", "ag1-sample"},
                    {"space", {{"kind", "euclidean"}, {"dim", 2}, {"radius", 3.0}}},
                    {"samples", 10000},
                    {"seed", 11}};
    const Report r = run_campaign(spec);
    REQUIRE(r.records.size() == 10000);
    std::ostringstream out;
    const auto t0 = std::chrono::steady_clock::now();
    emit_table(r, "csv", out);
    const auto t1 = std::chrono::steady_clock::now();
    CHECK(std::chrono::duration<double>(t1 - t0).count() < 1.0);
    CHECK(out.str().size() > 100000);
}

TEST_CASE("proof replay campaigns") {
    const Report eu = run_campaign(json{{"campaign", "proof-replay"},
                                        {"case", "euclidean"},
                                        {"mesh", 0.02},
                                        {"seed", 1}});
    CHECK(eu.all_passed);
    CHECK(eu.summary["failing_step"].get<std::string>().empty());

    const Report li = run_campaign(json{{"campaign", "proof-replay"},
                                        {"case", "linf"},
                                        {"mesh", 0.005},
                                        {"seed", 1}});
    CHECK(li.all_passed);  // for the max-norm case, "pass" means the argument broke
    CHECK(li.summary["failing_step"].get<std::string>() == "laplacian");
}

TEST_CASE("graph identity campaign on a small batch") {
    const Report r = run_campaign(json{{"campaign", "graph-identities"},
                                       {"graphs", 10},
                                       {"max_vertices", 80},
                                       {"seed", 99}});
    CHECK(r.all_passed);
    CHECK(r.records.size() == 10);
}

TEST_CASE("graph-identities accepts a user graph file") {
    const char* path = "campaign_graph_test.txt";
    {
        std::ofstream out(path);
        out << "0 1.0\n1 0.5\n2 2.0\n3 1.5\n";
        out << "0 1 1.0 1.0\n1 2 0.5 2.0\n2 3 1.5 0.5\n3 0 2.0 1.0\n";
    }
    const Report r = run_campaign(json{{"campaign", "graph-identities"},
                                       {"graphs", 3},
                                       {"max_vertices", 40},
                                       {"graph_file", path},
                                       {"seed", 17}});
    std::remove(path);
    CHECK(r.all_passed);
    REQUIRE(r.records.size() == 4);
    CHECK(r.records.back()["source"] == path);
    CHECK(r.records.back()["vertices"] == 4);

    try {
        run_campaign(json{{"campaign", "graph-identities"},
                          {"graphs", 1},
                          {"graph_file", "missing_graph.txt"},
                          {"seed", 17}});
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.field == "graph_file");
    }
}

TEST_CASE("cd1d accepts a csv reference and labels it") {
    const char* path = "campaign_density_test.csv";
    {
        // concave-power reference: cos profile on a short interval
        std::ofstream out(path);
        for (int i = 0; i <= 80; ++i) {
            const double x = -0.6 + 1.2 * i / 80.0;
            out << x << "," << std::cos(x) << "\n";
        }
    }
    const Report r = run_campaign(json{{"campaign", "cd1d"},
                                       {"cells", 2000},
                                       {"N", 2.0},
                                       {"reference_csv", path},
                                       {"seed", 2}});
    std::remove(path);
    CHECK(r.all_passed);
    CHECK(r.summary["expected_csv"].get<bool>());
    CHECK(r.summary["csv_violation"].get<double>() <=
          3.0 * r.summary["binning_tol"].get<double>());
}

TEST_CASE("proof replay accepts explicit points") {
    const Report r = run_campaign(json{
        {"campaign", "proof-replay"},
        {"case", "euclidean"},
        {"mesh", 0.02},
        {"theta", 0.1},
        {"R", 0.4},
        {"points",
         {{"x0", {-1.5, 0.0}}, {"x1", {2.5, 0.0}}, {"apex", {0.5, 0.35}}}},
        {"seed", 1}});
    CHECK(r.all_passed);
}

TEST_CASE("worker pool reproduces the serial report") {
    const json spec{{"campaign", "ag1-sample"},
                    {"space", {{"kind", "euclidean"}, {"dim", 2}, {"radius", 3.0}}},
                    {"samples", 300},
                    {"seed", 4242}};
    setenv("GCOMP_WORKERS", "1", 1);
    const Report serial = run_campaign(spec);
    setenv("GCOMP_WORKERS", "4", 1);
    const Report threaded = run_campaign(spec);
    unsetenv("GCOMP_WORKERS");
    CHECK(serial.records == threaded.records);
    CHECK(serial.summary == threaded.summary);
}

TEST_CASE("cd1d campaign separates the two references") {
    const Report r = run_campaign(json{{"campaign", "cd1d"},
                                       {"cells", 2000},
                                       {"N", 2.0},
                                       {"seed", 2}});
    CHECK(r.all_passed);
    CHECK(r.summary["expected_flat"].get<bool>());
    CHECK_FALSE(r.summary["expected_exp"].get<bool>());
}
