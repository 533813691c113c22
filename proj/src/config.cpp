#include "ksk/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ksk::cli {

const char* kVersion = "0.1.0";

namespace {

const char* kKnownKeys[] = {
    "kernel.d",     "kernel.alpha", "kernel.kind", "kernel.kappa", "run.t",
    "run.seed",     "run.threads",  "run.out",     "eval.x",       "eval.v",
    "eval.jx",      "eval.jv",      "grid.nx",     "grid.nv",      "grid.dx",
    "grid.dv",      "grid.format",  "sim.paths",   "sim.eps",      "sim.scheme",
    "verify.suite", "figure.kind",
};

bool known(const std::string& k) {
    for (const char* s : kKnownKeys)
        if (k == s) return true;
    return false;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw UsageError("cannot parse number: " + item);
        }
    }
    if (out.empty()) throw UsageError("empty coordinate list");
    return out;
}

long to_long(const std::string& k, const std::string& v) {
    try {
        return std::stol(v);
    } catch (...) {
        throw UsageError("key " + k + ": not an integer: " + v);
    }
}

double to_double(const std::string& k, const std::string& v) {
    try {
        return std::stod(v);
    } catch (...) {
        throw UsageError("key " + k + ": not a number: " + v);
    }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_kv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw UsageError("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto ltrim = line.find_first_not_of(" \t\r");
        if (ltrim == std::string::npos) continue;
        auto rtrim = line.find_last_not_of(" \t\r");
        line = line.substr(ltrim, rtrim - ltrim + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string k = line.substr(0, eq), v = line.substr(eq + 1);
        k.erase(std::remove_if(k.begin(), k.end(), ::isspace), k.end());
        auto vl = v.find_first_not_of(" \t");
        v = vl == std::string::npos ? "" : v.substr(vl);
        out.emplace_back(k, v);
    }
    return out;
}

RunConfig build_config(
    const std::string& command,
    const std::vector<std::tuple<std::string, std::string, std::string>>& entries) {
    static const char* kCommands[] = {"eval", "grid", "simulate", "bounds", "verify", "figure"};
    if (std::find(std::begin(kCommands), std::end(kCommands), command) == std::end(kCommands))
        throw UsageError("unknown command: " + command);

    RunConfig cfg;
    cfg.command = command;
    std::map<std::string, std::string> source;
    for (const auto& [k, v, src] : entries) {
        if (!known(k)) throw UsageError("unknown key: " + k);
        if (cfg.effective.count(k) && source[k] != src)
            cfg.provenance.push_back(k + ": " + src + " overrides " + source[k]);
        cfg.effective[k] = v;
        source[k] = src;
    }

    auto has = [&](const char* k) { return cfg.effective.count(k) > 0; };
    auto get = [&](const char* k) { return cfg.effective.at(k); };

    if (has("kernel.d")) cfg.d = static_cast<int>(to_long("kernel.d", get("kernel.d")));
    if (cfg.d < 1 || cfg.d > 3) throw UsageError("d must lie in {1,2,3}");
    if (has("kernel.kind")) cfg.kernel = get("kernel.kind");
    if (has("kernel.alpha")) cfg.alpha = to_double("kernel.alpha", get("kernel.alpha"));
    bool gaussian = cfg.kernel == "gaussian";
    if (!gaussian && !(cfg.alpha > 0.0 && cfg.alpha < 2.0))
        throw UsageError("alpha must lie in (0,2)");
    if (has("kernel.kappa")) cfg.kappa = to_double("kernel.kappa", get("kernel.kappa"));
    if (!(cfg.kappa > 0.0)) throw UsageError("kappa must be positive");
    if (has("run.t")) cfg.t = to_double("run.t", get("run.t"));
    if (!(cfg.t > 0.0)) throw UsageError("t must be positive");
    if (has("run.seed")) cfg.seed = static_cast<std::uint64_t>(to_long("run.seed", get("run.seed")));
    if (has("run.threads"))
        cfg.threads = static_cast<unsigned>(to_long("run.threads", get("run.threads")));
    if (has("run.out")) cfg.out_dir = get("run.out");
    if (has("eval.x")) cfg.zx = parse_list(get("eval.x"));
    if (has("eval.v")) cfg.zv = parse_list(get("eval.v"));
    if (has("eval.jx")) cfg.jx = static_cast<int>(to_long("eval.jx", get("eval.jx")));
    if (has("eval.jv")) cfg.jv = static_cast<int>(to_long("eval.jv", get("eval.jv")));
    if (cfg.jx < 0 || cfg.jv < 0 || cfg.jx + cfg.jv > 2)
        throw UsageError("derivative orders must satisfy jx,jv >= 0 and jx+jv <= 2");
    if (has("grid.nx")) cfg.nx = static_cast<int>(to_long("grid.nx", get("grid.nx")));
    if (has("grid.nv")) cfg.nv = static_cast<int>(to_long("grid.nv", get("grid.nv")));
    if (cfg.nx <= 0 || cfg.nx % 2 || cfg.nv <= 0 || cfg.nv % 2)
        throw UsageError("grid node counts must be positive and even");
    if (has("grid.dx")) cfg.dx = to_double("grid.dx", get("grid.dx"));
    if (has("grid.dv")) cfg.dv = to_double("grid.dv", get("grid.dv"));
    if (!(cfg.dx > 0.0 && cfg.dv > 0.0)) throw UsageError("grid steps must be positive");
    if (has("grid.format")) cfg.format = get("grid.format");
    if (cfg.format != "csv" && cfg.format != "binary" && cfg.format != "both")
        throw UsageError("format must be csv, binary or both");
    if (has("sim.paths")) cfg.paths = to_long("sim.paths", get("sim.paths"));
    if (cfg.paths < 1) throw UsageError("paths must be >= 1");
    if (has("sim.eps")) cfg.eps = to_double("sim.eps", get("sim.eps"));
    if (!(cfg.eps > 0.0 && cfg.eps <= 1.0)) throw UsageError("eps must lie in (0,1]");
    if (has("sim.scheme")) cfg.scheme = get("sim.scheme");
    if (cfg.scheme != "truncate" && cfg.scheme != "gaussian" && cfg.scheme != "euler")
        throw UsageError("scheme must be truncate, gaussian or euler");
    if (has("verify.suite")) cfg.suite = get("verify.suite");
    if (has("figure.kind")) cfg.kind = get("figure.kind");
    if (cfg.kind != "envelope" && cfg.kind != "path")
        throw UsageError("figure kind must be envelope or path");

    static const char* kKernels[] = {"constant", "even-demo", "nonsym-demo", "band-demo",
                                     "gaussian"};
    if (std::find(std::begin(kKernels), std::end(kKernels), cfg.kernel) == std::end(kKernels))
        throw UsageError("unknown kernel kind: " + cfg.kernel);
    return cfg;
}

std::string config_header(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# ksk version=" << kVersion << "\n";
    os << "# command=" << cfg.command << "\n";
    os << "# seed=" << cfg.seed << "\n";
    for (const auto& [k, v] : cfg.effective) os << "# " << k << "=" << v << "\n";
    for (const auto& p : cfg.provenance) os << "# provenance: " << p << "\n";
    return os.str();
}

}  // namespace ksk::cli
