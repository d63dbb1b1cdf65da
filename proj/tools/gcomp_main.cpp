#include "gcomp/campaign.hpp"
#include "gcomp/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gcomp::IOError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"comparison-geometry verification campaigns"};
    app.require_subcommand(1);

    std::string spec_path, report_out;
    CLI::App* run = app.add_subcommand("run", "run a campaign spec and write its report");
    run->add_option("spec", spec_path, "campaign spec JSON file")->required();
    run->add_option("-o,--output", report_out, "report output path (default: stdout)");

    std::string report_path, format = "csv", table_out;
    CLI::App* emit = app.add_subcommand("emit", "emit a table from an existing report");
    emit->add_option("report", report_path, "report JSON file")->required();
    emit->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    emit->add_option("-o,--output", table_out, "table output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const gcomp::Report rep = gcomp::run_campaign(read_json(spec_path));
            const std::string body = rep.to_json().dump(2);
            if (report_out.empty()) {
                std::cout << body << "\n";
            } else {
                std::ofstream out(report_out);
                if (!out) throw gcomp::IOError("cannot write " + report_out);
                out << body << "\n";
            }
            std::cerr << (rep.all_passed ? "all checks passed" : "some checks FAILED")
                      << " (" << rep.records.size() << " records, " << rep.wall_time_s << " s)\n";
            return rep.all_passed ? 0 : 1;
        }
        const gcomp::Report rep = gcomp::Report::from_json(read_json(report_path));
        if (table_out.empty()) {
            gcomp::emit_table(rep, format, std::cout);
        } else {
            std::ofstream out(table_out);
            if (!out) throw gcomp::IOError("cannot write " + table_out);
            gcomp::emit_table(rep, format, out);
        }
        return 0;
    } catch (const gcomp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
