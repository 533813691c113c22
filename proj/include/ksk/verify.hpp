#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ksk::verify {

enum class CheckName {
    TheoremEnvelope,
    GradientLog,
    ChordLemma,
    MomentLemma,
    LargeJumpLemma,
    GrubeD1,
    ScalingExact,
    ConditionalMoment,
    SmallJumpTail,
    DecomposeLemma,
    KolmogorovOracle,
};

const char* to_string(CheckName name);
CheckName check_from_string(const std::string& s);

struct CheckSpec {
    CheckName name = CheckName::KolmogorovOracle;
    int d = 1;
    double alpha = 1.5;
    double t = 1.0;
    std::string kernel = "constant";
    std::uint64_t seed = 7;
    long budget = 10000;        // points / paths / samples, per check semantics
    double ratio_budget = 50.0; // allowed max/min ratio spread
    double tolerance = 1e-4;    // for exactness-style checks
    // series-estimator knobs (LargeJumpLemma)
    int n_max = 13;
    long m_per_term = 400000;
};

struct RatioStats {
    double min = 0, p1 = 0, p50 = 0, p99 = 0, max = 0;
};

struct ComparabilityReport {
    std::string check;
    std::string domain;  // human description of the sampled domain
    long n_points = 0;
    RatioStats ratio;
    double c_lower = 0.0;  // fitted empirical constants (extreme ratios)
    double c_upper = 0.0;
    bool pass = false;
    double runtime_s = 0.0;
    std::uint64_t seed = 0;
    std::string note;  // details / failure locus
    // effective params echoed into the report
    int d = 1;
    double alpha = 0.0;
    double t = 0.0;
    std::string kernel;
    long budget = 0;
    double ratio_budget = 0.0;
    double tolerance = 0.0;
};

ComparabilityReport run_check(const CheckSpec& spec);

// one spec per default certification run (several alphas where a result
// covers a range)
std::vector<CheckSpec> default_suite(std::uint64_t seed = 7);

std::string report_to_json(const ComparabilityReport& r);
ComparabilityReport report_from_json(const std::string& json_text);

// Writes <dir>/report_<check>_<seed>.json per report plus a summary CSV;
// returns the file paths (CSV last). `header` is prepended to the CSV as
// comment lines.
std::vector<std::string> emit_report(const std::vector<ComparabilityReport>& reports,
                                     const std::string& dir, const std::string& header);

}  // namespace ksk::verify
