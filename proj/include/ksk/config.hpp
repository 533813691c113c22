#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksk::cli {

class UsageError : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string command;  // eval | grid | simulate | bounds | verify | figure
    // kernel
    int d = 1;
    double alpha = 1.5;
    std::string kernel = "constant";  // constant|even-demo|nonsym-demo|band-demo|gaussian
    double kappa = 1.0;
    // run
    double t = 1.0;
    std::uint64_t seed = 7;
    unsigned threads = 0;
    std::string out_dir = "out";
    // eval
    std::vector<double> zx, zv;
    int jx = 0, jv = 0;
    // grid
    int nx = 512, nv = 256;
    double dx = 0.1, dv = 0.1;
    std::string format = "csv";  // csv | binary | both
    // simulate
    long paths = 1;
    double eps = 0.01;
    std::string scheme = "gaussian";  // truncate | gaussian | euler
    // verify
    std::string suite = "all";
    // figure
    std::string kind = "envelope";  // envelope | path

    // effective key=value view plus provenance (file/flag), for output headers
    std::map<std::string, std::string> effective;
    std::vector<std::string> provenance;
};

// one key=value per line; '#' comments and blank lines ignored
std::vector<std::pair<std::string, std::string>> parse_kv_file(const std::string& path);

// Builds the config for `command` from ordered (key, value, source) triples;
// later entries win (callers append flag values after file values). Unknown
// keys and out-of-range values raise UsageError.
RunConfig build_config(
    const std::string& command,
    const std::vector<std::tuple<std::string, std::string, std::string>>& entries);

// header comment block: version, effective config, seed
std::string config_header(const RunConfig& cfg);

extern const char* kVersion;

}  // namespace ksk::cli
