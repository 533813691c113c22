// ksk: evaluate, simulate and verify the heat kernel of the kinetic
// stable operator (velocity-fractional Laplacian plus transport).

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "ksk/bounds.hpp"
#include "ksk/config.hpp"
#include "ksk/kernel.hpp"
#include "ksk/levy.hpp"
#include "ksk/rng.hpp"
#include "ksk/simulate.hpp"
#include "ksk/threads.hpp"
#include "ksk/verify.hpp"

#include "svg.hpp"

namespace {

using namespace ksk;
using cli::RunConfig;
using Entry = std::tuple<std::string, std::string, std::string>;

std::unique_ptr<levy::Exponent> make_exponent(const RunConfig& cfg) {
    if (cfg.kernel == "gaussian") return std::make_unique<levy::QuadraticExponent>(cfg.d);
    if (cfg.kernel == "constant")
        return std::make_unique<levy::LevyKernel>(
            levy::LevyKernel::isotropic(cfg.d, cfg.alpha, cfg.kappa));
    return std::make_unique<levy::LevyKernel>(
        levy::LevyKernel::builtin(cfg.kernel, cfg.d, cfg.alpha));
}

levy::LevyKernel make_kernel(const RunConfig& cfg) {
    if (cfg.kernel == "gaussian")
        throw cli::UsageError("the gaussian surrogate has no jump kernel; pick a stable kind");
    if (cfg.kernel == "constant")
        return levy::LevyKernel::isotropic(cfg.d, cfg.alpha, cfg.kappa);
    return levy::LevyKernel::builtin(cfg.kernel, cfg.d, cfg.alpha);
}

int cmd_eval(const RunConfig& cfg) {
    if (static_cast<int>(cfg.zx.size()) != cfg.d || static_cast<int>(cfg.zv.size()) != cfg.d)
        throw cli::UsageError("eval needs --x and --v with d components each (colon-separated)");
    auto e = make_exponent(cfg);
    PhasePoint z(cfg.zx, cfg.zv);
    double p = (cfg.jx || cfg.jv) ? kern::density_gradient(*e, cfg.t, z, cfg.jx, cfg.jv)
                                  : kern::density_point(*e, cfg.t, z);
    std::cout << cli::config_header(cfg);
    std::cout << "value=" << std::setprecision(12) << p << "\n";
    return 0;
}

int cmd_grid(const RunConfig& cfg) {
    if (cfg.d != 1) throw cli::UsageError("grid output is d = 1 only");
    auto e = make_exponent(cfg);
    kern::DensityGrid g = kern::density_grid(
        *e, cfg.t, kern::GridSpec{{{cfg.nx, cfg.dx}, {cfg.nv, cfg.dv}}}, cfg.jx, cfg.jv);
    std::filesystem::create_directories(cfg.out_dir);
    std::string base = cfg.out_dir + "/grid";
    if (cfg.format == "csv" || cfg.format == "both")
        kern::write_csv(g, base + ".csv", cli::config_header(cfg));
    if (cfg.format == "binary" || cfg.format == "both") kern::write_binary(g, base + ".bin");
    std::cout << cli::config_header(cfg);
    std::cout << "mass=" << g.mass << " nodes=" << g.nodes << " out=" << base << ".*\n";
    return 0;
}

void render_path_svg(const levy::LevyKernel& k, const RunConfig& cfg, const std::string& path) {
    sim::SimConfig sc;
    sc.seed = cfg.seed;
    sc.eps = cfg.eps;
    sc.t = cfg.t;
    sc.scheme = sim::SmallJumpScheme::Truncate;
    CounterRng rng(cfg.seed, 0);
    sim::PathSample ps = sample_kinetic_path(k, sc, rng);
    ksvg::Series sv{"V_s", {}, {}}, sx{"X_s", {}, {}};
    double run_v = 0.0;
    std::size_t next = 0;
    const int n = 600;
    double run_x = 0.0;
    double prev_s = 0.0;
    for (int i = 0; i <= n; ++i) {
        double s = cfg.t * i / n;
        while (next < ps.jump_times.size() && ps.jump_times[next] <= s) {
            run_x += run_v * (ps.jump_times[next] - prev_s);
            prev_s = ps.jump_times[next];
            run_v += ps.jump_sizes[next][0];
            ++next;
        }
        run_x += run_v * (s - prev_s);
        prev_s = s;
        sv.t.push_back(s);
        sv.y.push_back(run_v);
        sx.t.push_back(s);
        sx.y.push_back(run_x);
    }
    ksvg::write_path_plot(path, "kinetic pair (X_s, V_s), one trajectory", {sx, sv},
                          cli::config_header(cfg));
}

int cmd_simulate(const RunConfig& cfg) {
    levy::LevyKernel k = make_kernel(cfg);
    sim::SimConfig sc;
    sc.seed = cfg.seed;
    sc.eps = cfg.eps;
    sc.t = cfg.t;
    sc.scheme = cfg.scheme == "truncate"
                    ? sim::SmallJumpScheme::Truncate
                    : (cfg.scheme == "euler" ? sim::SmallJumpScheme::EulerMesh
                                             : sim::SmallJumpScheme::GaussianCompensate);
    std::filesystem::create_directories(cfg.out_dir);
    std::string csv = cfg.out_dir + "/samples.csv";
    std::ofstream os(csv);
    os << cli::config_header(cfg);
    os << "path_id";
    for (int i = 0; i < cfg.d; ++i) os << ",x" << i + 1;
    for (int i = 0; i < cfg.d; ++i) os << ",v" << i + 1;
    os << "\n";
    os << std::setprecision(17);
    for (long p = 0; p < cfg.paths; ++p) {
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(p));
        sim::PathSample ps = sample_kinetic_path(k, sc, rng);
        os << p;
        for (int i = 0; i < cfg.d; ++i) os << "," << ps.X[i];
        for (int i = 0; i < cfg.d; ++i) os << "," << ps.V[i];
        os << "\n";
    }
    if (cfg.paths == 1 && cfg.d == 1)
        render_path_svg(k, cfg, cfg.out_dir + "/trajectory.svg");
    std::cout << cli::config_header(cfg) << "wrote " << csv << "\n";
    return 0;
}

int cmd_bounds(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    std::string csv = cfg.out_dir + "/bounds.csv";
    std::ofstream os(csv);
    os << cli::config_header(cfg);
    os << "x,v,comparison,chord_integral,chord_weight,alt_comparator\n";
    os << std::setprecision(12);
    bounds::BoundParams bp{cfg.d + cfg.alpha, cfg.d};
    for (int i = -80; i <= 80; ++i) {
        for (double v : {0.0, 1.0, 5.0}) {
            PhasePoint z = PhasePoint::of(0.5 * i, v);
            os << 0.5 * i << "," << v << "," << bounds::comparison(z, bp) << ","
               << bounds::chord_integral(z, bp) << "," << bounds::chord_weight(z, bp) << ","
               << bounds::alt_comparator(z, cfg.alpha) << "\n";
        }
    }
    std::cout << cli::config_header(cfg) << "wrote " << csv << "\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    std::vector<verify::CheckSpec> specs = verify::default_suite(cfg.seed);
    if (cfg.suite != "all") {
        verify::CheckName want = verify::check_from_string(cfg.suite);
        std::vector<verify::CheckSpec> filtered;
        for (const auto& s : specs)
            if (s.name == want) filtered.push_back(s);
        specs = filtered;
        if (specs.empty()) throw cli::UsageError("no checks selected");
    }
    std::vector<verify::ComparabilityReport> reports;
    bool all_pass = true;
    for (const auto& s : specs) {
        verify::ComparabilityReport r = verify::run_check(s);
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.check << " (alpha=" << r.alpha
                  << ", d=" << r.d << "): " << r.note << "\n";
        reports.push_back(std::move(r));
    }
    auto paths = verify::emit_report(reports, cfg.out_dir, cli::config_header(cfg));
    std::cout << "reports: " << paths.back() << " (+" << paths.size() - 1 << " json)\n";
    return all_pass ? 0 : 1;
}

int cmd_figure(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.kind == "path") {
        render_path_svg(make_kernel(cfg), cfg, cfg.out_dir + "/trajectory.svg");
        std::cout << cli::config_header(cfg) << "wrote trajectory.svg\n";
        return 0;
    }
    if (cfg.d != 1) throw cli::UsageError("envelope figures are d = 1 only");
    auto e = make_exponent(cfg);
    auto w = kern::suggest_truncation_axes(*e, cfg.t, 1e-8);
    kern::DensityGrid g = kern::density_grid(
        *e, cfg.t, kern::GridSpec{{{2048, M_PI / w[0]}, {1024, M_PI / w[1]}}});

    const int nx = 200, nv = 120;
    double ext_x = std::min(30.0, 0.45 * g.axes[0].n * g.axes[0].step);
    double ext_v = std::min(12.0, 0.45 * g.axes[1].n * g.axes[1].step);
    std::vector<double> lp(nx * nv), ln(nx * nv), lr(nx * nv);
    bounds::BoundParams bp{cfg.d + cfg.alpha, cfg.d};
    std::string csv = cfg.out_dir + "/envelope.csv";
    std::ofstream os(csv);
    os << cli::config_header(cfg) << "x,v,log10_p,log10_comparison,log10_ratio\n";
    for (int i = 0; i < nx; ++i) {
        double x = -ext_x + 2.0 * ext_x * (i + 0.5) / nx;
        for (int j = 0; j < nv; ++j) {
            double v = -ext_v + 2.0 * ext_v * (j + 0.5) / nv;
            int gi = static_cast<int>(std::lround(x / g.axes[0].step)) + g.axes[0].n / 2;
            int gj = static_cast<int>(std::lround(v / g.axes[1].step)) + g.axes[1].n / 2;
            double p = std::max(g.at(gi, gj), 0.0);
            double nval = bounds::comparison(PhasePoint::of(x, v), bp);
            lp[i * nv + j] = p > 0 ? std::log10(p) : NAN;
            ln[i * nv + j] = std::log10(nval);
            lr[i * nv + j] = p > 0 ? std::log10(p / nval) : NAN;
            os << x << "," << v << "," << lp[i * nv + j] << "," << ln[i * nv + j] << ","
               << lr[i * nv + j] << "\n";
        }
    }
    std::string h = cli::config_header(cfg);
    ksvg::write_heatmap(cfg.out_dir + "/density_log.svg", "log10 heat kernel", lp, nx, nv,
                        ext_x, ext_v, h);
    ksvg::write_heatmap(cfg.out_dir + "/comparison_log.svg", "log10 comparison profile", ln, nx,
                        nv, ext_x, ext_v, h);
    ksvg::write_heatmap(cfg.out_dir + "/ratio_log.svg", "log10 kernel / comparison", lr, nx, nv,
                        ext_x, ext_v, h);
    std::cout << h << "wrote 3 svg + " << csv << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kinetic stable heat-kernel toolkit"};
    app.require_subcommand(1);

    std::string config_file;
    std::map<std::string, std::pair<CLI::Option*, std::string>> opts;
    std::vector<CLI::App*> subs;
    std::map<std::string, std::string> values;

    auto add_common = [&](CLI::App* sub) {
        auto bind = [&](const char* flag, const char* key, const char* desc) {
            auto* o = sub->add_option(flag, values[std::string(sub->get_name()) + key], desc);
            opts[std::string(sub->get_name()) + key] = {o, key};
        };
        sub->add_option("--config", config_file, "flat key=value config file");
        bind("--d", "kernel.d", "dimension (1..3)");
        bind("--alpha", "kernel.alpha", "stability index in (0,2)");
        bind("--kernel", "kernel.kind", "constant|even-demo|nonsym-demo|band-demo|gaussian");
        bind("--kappa", "kernel.kappa", "kappa for the constant kernel");
        bind("--t", "run.t", "time horizon");
        bind("--seed", "run.seed", "RNG seed");
        bind("--threads", "run.threads", "worker cap (or env KSK_THREADS)");
        bind("--out", "run.out", "output directory");
        return bind;
    };

    {
        auto* s = app.add_subcommand("eval", "pointwise kernel evaluation");
        auto bind = add_common(s);
        bind("--x", "eval.x", "position components, colon separated");
        bind("--v", "eval.v", "velocity components, colon separated");
        bind("--jx", "eval.jx", "x-derivative order");
        bind("--jv", "eval.jv", "v-derivative order");
        subs.push_back(s);
    }
    {
        auto* s = app.add_subcommand("grid", "FFT density grid");
        auto bind = add_common(s);
        bind("--nx", "grid.nx", "x node count (even)");
        bind("--nv", "grid.nv", "v node count (even)");
        bind("--dx", "grid.dx", "x step");
        bind("--dv", "grid.dv", "v step");
        bind("--format", "grid.format", "csv|binary|both");
        subs.push_back(s);
    }
    {
        auto* s = app.add_subcommand("simulate", "sample kinetic trajectories");
        auto bind = add_common(s);
        bind("--paths", "sim.paths", "number of trajectories");
        bind("--eps", "sim.eps", "small-jump cutoff");
        bind("--scheme", "sim.scheme", "truncate|gaussian|euler");
        subs.push_back(s);
    }
    {
        auto* s = app.add_subcommand("bounds", "comparator sweep table");
        add_common(s);
        subs.push_back(s);
    }
    {
        auto* s = app.add_subcommand("verify", "run certification checks");
        auto bind = add_common(s);
        bind("--suite", "verify.suite", "all or a single check name");
        subs.push_back(s);
    }
    {
        auto* s = app.add_subcommand("figure", "render SVG figures");
        auto bind = add_common(s);
        bind("--kind", "figure.kind", "envelope|path");
        bind("--eps", "sim.eps", "small-jump cutoff for path figures");
        subs.push_back(s);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* active = nullptr;
        for (auto* s : subs)
            if (s->parsed()) active = s;
        std::vector<Entry> entries;
        if (!config_file.empty())
            for (const auto& [k, v] : cli::parse_kv_file(config_file))
                entries.emplace_back(k, v, "file");
        for (const auto& [mapkey, ov] : opts) {
            if (ov.first->count() > 0 && mapkey.rfind(active->get_name(), 0) == 0)
                entries.emplace_back(ov.second, values[mapkey], "flag");
        }
        RunConfig cfg = cli::build_config(active->get_name(), entries);

        if (cfg.threads == 0) {
            if (const char* env = std::getenv("KSK_THREADS")) cfg.threads = std::atoi(env);
        }
        set_max_threads(cfg.threads);

        if (cfg.command == "eval") return cmd_eval(cfg);
        if (cfg.command == "grid") return cmd_grid(cfg);
        if (cfg.command == "simulate") return cmd_simulate(cfg);
        if (cfg.command == "bounds") return cmd_bounds(cfg);
        if (cfg.command == "verify") return cmd_verify(cfg);
        if (cfg.command == "figure") return cmd_figure(cfg);
        return 2;
    } catch (const cli::UsageError& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 2;
    } catch (const AccuracyError& ex) {
        std::cerr << "accuracy error: " << ex.what() << " (estimate " << ex.estimate() << ")\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
