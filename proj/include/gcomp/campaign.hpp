#ifndef GCOMP_CAMPAIGN_HPP
#define GCOMP_CAMPAIGN_HPP

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace gcomp {

// Verification campaign output: the echoed spec, one record per check and a
// summary.  Every record carries the inputs needed to replay it; re-running
// the same spec reproduces the body byte for byte (wall time excluded).
struct Report {
    nlohmann::json campaign;
    std::vector<nlohmann::json> records;
    nlohmann::json summary;
    bool all_passed = false;
    double wall_time_s = 0.0;

    nlohmann::json to_json() const;
    static Report from_json(const nlohmann::json& j);
};

// Campaign kinds: ag1-sample, linf-counterexample, bishop-gromov,
// laplace-compare, graph-identities, cd1d, proof-replay.  Specs must carry an
// explicit seed; malformed specs raise ConfigError naming the field.
Report run_campaign(const nlohmann::json& spec);

// format "csv" (fixed columns campaign,seed,K,N,h,l,E,bound,margin,pass) or
// "json" (lossless mirror of the records).
void emit_table(const Report& report, const std::string& format, std::ostream& out);

// Worker count for parallel campaign sections: GCOMP_WORKERS when set, else
// the hardware concurrency.
int worker_count();

} // namespace gcomp

#endif
