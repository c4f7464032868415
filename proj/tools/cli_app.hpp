#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pafour/forward.hpp"
#include "pafour/gridfile.hpp"
#include "pafour/harness.hpp"
#include "pafour/recon.hpp"

namespace pafour::cli {

enum ExitCode : int { ok = 0, usage = 1, data = 2 };

struct SimulateArgs {
    std::string phantom = "circle";
    std::size_t n = 256;
    CirclePhantom circle;
    std::optional<double> cutoff_eps;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

struct ReconstructArgs {
    std::string method = "nufft";
    double c = 2.0;
    double k_interp = 3.0;
    std::optional<double> alpha;
    std::string in;
    std::string out;
    std::string pgm;
};

struct BenchmarkArgs {
    std::size_t n = 512;
    std::vector<std::string> methods;
    std::vector<double> c_list;
    std::uint64_t seed = 0;
    double noise = 0.0;
    CirclePhantom circle;
    std::string out_dir = ".";
};

struct SamplingArgs {
    std::string in;
    std::size_t n = 512;
    double fraction = 0.999;
};

inline RealGrid2D simulate(const SimulateArgs& a)
{
    const GridSpec spec = GridSpec::unit_square(a.n);
    spec.validate();
    RealGrid2D g;
    if (a.phantom == "circle") {
        a.circle.validate(spec.extent());
        g = circle_data(a.circle, spec);
    } else if (a.phantom == "shepp-logan") {
        g = dalembert_forward(sample_shepp_logan(shepp_logan(spec.extent()), spec));
    } else {
        throw ValidationError(ValidationError::Code::bad_parameter, "unknown phantom '" + a.phantom + "'");
    }
    CutoffSpec cutoff = CutoffSpec::from_step(spec.step);
    if (a.cutoff_eps) {
        cutoff.epsilon = *a.cutoff_eps;
    }
    g = apply_cutoff(g, build_cutoff(cutoff, spec));
    return add_gaussian_noise(g, a.noise, a.seed);
}

inline ReconConfig config_for(const std::string& method, double c, double k_interp, std::optional<double> alpha)
{
    ReconConfig cfg;
    cfg.method = parse_method(method);
    cfg.c = c;
    cfg.k_interp = k_interp;
    cfg.alpha = alpha;
    return cfg;
}

/// Comparison suite: direct, nearest/linear at c = 1, 2, truncated sinc and
/// Kaiser-Bessel at c = 2, back-projection.
inline std::vector<ReconConfig> default_suite()
{
    std::vector<ReconConfig> suite;
    suite.push_back(config_for("backprojection", 2.0, 3.0, std::nullopt));
    suite.push_back(config_for("direct", 2.0, 3.0, std::nullopt));
    for (const char* m : {"nearest", "linear"}) {
        for (double c : {1.0, 2.0}) {
            suite.push_back(config_for(m, c, 3.0, std::nullopt));
        }
    }
    suite.push_back(config_for("trunc-sinc", 2.0, 3.0, std::nullopt));
    suite.push_back(config_for("nufft", 2.0, 3.0, std::nullopt));
    return suite;
}

inline std::vector<ReconConfig> benchmark_suite(const BenchmarkArgs& a)
{
    if (a.methods.empty() && a.c_list.empty()) {
        return default_suite();
    }
    const std::vector<std::string> methods = a.methods.empty()
        ? std::vector<std::string>{"nearest", "linear", "trunc-sinc", "nufft"}
        : a.methods;
    const std::vector<double> cs = a.c_list.empty() ? std::vector<double>{2.0} : a.c_list;
    std::vector<ReconConfig> suite;
    for (const auto& m : methods) {
        const Method method = parse_method(m);
        if (method == Method::direct || method == Method::backprojection) {
            suite.push_back(config_for(m, 2.0, 3.0, std::nullopt));
            continue;
        }
        for (double c : cs) {
            suite.push_back(config_for(m, c, 3.0, std::nullopt));
        }
    }
    return suite;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Fourier reconstruction for photoacoustic imaging with a line of detectors"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "Simulate windowed detector data");
    cmd_sim->add_option("--phantom", sim.phantom, "circle or shepp-logan")
        ->check(CLI::IsMember({"circle", "shepp-logan"}));
    cmd_sim->add_option("--n", sim.n, "samples per axis (even)");
    cmd_sim->add_option("--x0", sim.circle.x0, "circle centre, detector coordinate");
    cmd_sim->add_option("--y0", sim.circle.y0, "circle centre, depth");
    cmd_sim->add_option("--a", sim.circle.a, "circle radius");
    cmd_sim->add_option("--cutoff-eps", sim.cutoff_eps, "mollifier epsilon (default (5 step)^2)");
    cmd_sim->add_option("--noise", sim.noise, "noise level, std dev as a fraction of max |g|");
    cmd_sim->add_option("--seed", sim.seed, "noise seed");
    cmd_sim->add_option("--out", sim.out, "output grid file")->required();

    ReconstructArgs rec;
    auto* cmd_rec = app.add_subcommand("reconstruct", "Reconstruct an image from a data grid");
    cmd_rec->add_option("--method", rec.method,
                        "nufft, direct, nearest, linear, trunc-sinc or backprojection");
    cmd_rec->add_option("--c", rec.c, "oversampling factor");
    cmd_rec->add_option("--K", rec.k_interp, "interpolation length");
    cmd_rec->add_option("--alpha", rec.alpha, "Kaiser-Bessel support");
    cmd_rec->add_option("--in", rec.in, "input data grid")->required();
    cmd_rec->add_option("--out", rec.out, "output image grid");
    cmd_rec->add_option("--pgm", rec.pgm, "8-bit PGM rendering, -0.4 black to 1.0 white");

    BenchmarkArgs bench;
    auto* cmd_bench = app.add_subcommand("benchmark", "Error and run time against direct reconstruction");
    cmd_bench->add_option("--n", bench.n, "samples per axis");
    cmd_bench->add_option("--methods", bench.methods, "methods to run")->delimiter(',');
    cmd_bench->add_option("--c-list", bench.c_list, "oversampling factors")->delimiter(',');
    cmd_bench->add_option("--seed", bench.seed, "noise seed");
    cmd_bench->add_option("--noise", bench.noise, "noise level");
    cmd_bench->add_option("--x0", bench.circle.x0, "circle centre, detector coordinate");
    cmd_bench->add_option("--y0", bench.circle.y0, "circle centre, depth");
    cmd_bench->add_option("--a", bench.circle.a, "circle radius");
    cmd_bench->add_option("--out-dir", bench.out_dir, "directory for benchmark.csv and benchmark.json");

    SamplingArgs samp;
    auto* cmd_samp = app.add_subcommand("sampling", "Essential bandwidth and Nyquist check of an image");
    cmd_samp->add_option("--in", samp.in, "image grid (default: sampled circle phantom)");
    cmd_samp->add_option("--n", samp.n, "phantom size when --in is absent");
    cmd_samp->add_option("--fraction", samp.fraction, "energy fraction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (*cmd_sim) {
            write_grid_file(sim.out, simulate(sim));
        } else if (*cmd_rec) {
            const ReconConfig cfg = config_for(rec.method, rec.c, rec.k_interp, rec.alpha);
            const RealGrid2D g = read_grid_file(rec.in);
            if (g.kind() != AxisKind::data) {
                throw FormatError("input grid is not a data grid");
            }
            const RealGrid2D f = reconstruct(g, cfg);
            if (!rec.out.empty()) {
                write_grid_file(rec.out, f);
            }
            if (!rec.pgm.empty()) {
                write_pgm_file(rec.pgm, f);
            }
        } else if (*cmd_bench) {
            BenchmarkOptions opt;
            opt.seed = bench.seed;
            opt.noise = bench.noise;
            bench.circle.validate();
            const auto records = run_benchmark(benchmark_suite(bench), bench.circle, bench.n, opt);
            write_benchmark_text(out, records);
            std::filesystem::create_directories(bench.out_dir);
            const auto dir = std::filesystem::path(bench.out_dir);
            std::ofstream text(dir / "benchmark.csv");
            std::ofstream json(dir / "benchmark.json");
            if (!text || !json) {
                throw FormatError("cannot write benchmark tables to '" + bench.out_dir + "'");
            }
            write_benchmark_text(text, records);
            json << benchmark_json(records).dump(2) << '\n';
        } else if (*cmd_samp) {
            RealGrid2D f = samp.in.empty()
                ? sample_circle(CirclePhantom{}, GridSpec::unit_square(samp.n))
                : read_grid_file(samp.in);
            const SamplingReport r = sampling_check(f, samp.fraction);
            out << nlohmann::json{{"omega_index", r.omega_index},
                                  {"omega", r.omega},
                                  {"step", r.step},
                                  {"nyquist_ok", r.nyquist_ok}}
                       .dump()
                << '\n';
        }
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return data;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return data;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
    return ok;
}

} // namespace pafour::cli
