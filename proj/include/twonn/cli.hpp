#ifndef TWONN_CLI_HPP
#define TWONN_CLI_HPP

#include "twonn/benchmark.hpp"
#include "twonn/dataset.hpp"
#include "twonn/error.hpp"
#include "twonn/estimator.hpp"
#include "twonn/generators.hpp"
#include "twonn/io.hpp"
#include "twonn/neighbors.hpp"
#include "twonn/scan.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/**
 * @file cli.hpp
 *
 * @brief The `twonn` command line: estimate, scan, generate, benchmark.
 *
 * Exit codes: 0 on success, 1 for usage errors (bad or conflicting flags),
 * 2 for data and validation errors. Every failure prints a single line on
 * the error stream.
 */

namespace twonn::cli {

enum ExitCode : int { ok = 0, usage = 1, data = 2 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct MetricChoice {
    enum class Kind { unset, euclidean, periodic, precomputed } kind = Kind::unset;
    std::vector<double> box;
};

inline std::vector<std::string_view> split_list(std::string_view s) {
    return io::detail::split(s, ',');
}

/// "euclidean", "precomputed" or "pbc=L1,L2,..." (a single length applies to every coordinate).
inline MetricChoice parse_metric(const std::string& text) {
    MetricChoice m;
    if (text.empty()) {
        return m;
    }
    if (text == "euclidean") {
        m.kind = MetricChoice::Kind::euclidean;
        return m;
    }
    if (text == "precomputed") {
        m.kind = MetricChoice::Kind::precomputed;
        return m;
    }
    if (text.rfind("pbc=", 0) == 0) {
        m.kind = MetricChoice::Kind::periodic;
        for (auto field : split_list(std::string_view(text).substr(4))) {
            auto v = io::detail::parse_number(field);
            if (!v || !(*v > 0.0) || !std::isfinite(*v)) {
                throw UsageError("--metric: box lengths must be positive numbers, got '" + std::string(field) + "'");
            }
            m.box.push_back(*v);
        }
        return m;
    }
    throw UsageError("--metric must be euclidean, precomputed or pbc=L1,L2,...; got '" + text + "'");
}

inline std::vector<std::size_t> parse_size_list(const std::string& text, const char* flag) {
    std::vector<std::size_t> out;
    for (auto field : split_list(text)) {
        field = io::detail::trim(field);
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
            throw UsageError(std::string(flag) + ": expected a comma-separated list of integers, got '" + text + "'");
        }
        out.push_back(v);
    }
    return out;
}

inline bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline io::TableFormat table_format(const std::string& flag, const std::string& path) {
    if (flag.empty()) {
        return ends_with(path, ".tsv") || ends_with(path, ".txt") ? io::TableFormat::tsv : io::TableFormat::csv;
    }
    if (auto f = io::parse_table_format(flag)) {
        return *f;
    }
    throw UsageError("--format must be csv, tsv, csv-square or tsv-square; got '" + flag + "'");
}

struct GeneratorFlags {
    std::string kind;
    std::size_t dim = 2;
    std::size_t n = 1000;
    bool pbc = false;
    double noise_sigma = 0.0;
    std::size_t noise_dims = 0;

    void add_to(CLI::App& app) {
        app.add_option("--kind", kind, "Synthetic dataset kind")
            ->check(CLI::IsMember({"hypercube", "gaussian", "cauchy_norm", "hypersphere", "swiss_roll", "noisy_plane",
                                   "noisy_gauss_roll"}));
        app.add_option("--dim", dim, "Intrinsic dimension of the generated data")->capture_default_str();
        app.add_option("--n", n, "Number of generated points")->capture_default_str();
        app.add_flag("--pbc", pbc, "Periodic boundaries (hypercube only)");
        app.add_option("--noise-sigma", noise_sigma, "Noise standard deviation (noisy kinds)");
        app.add_option("--noise-dims", noise_dims, "Number of noise directions (noisy kinds)");
    }

    GeneratorSpec spec(std::uint64_t seed) const {
        GeneratorSpec s;
        s.kind = *parse_generator_kind(kind);
        s.d = dim;
        s.n = n;
        s.seed = seed;
        s.pbc = pbc;
        s.noise_sigma = noise_sigma;
        s.noise_dims = noise_dims;
        return s;
    }
};

struct InputFlags {
    std::string input;
    std::string matrix;
    std::string format;
    std::string metric;
    bool drop_duplicates = false;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    GeneratorFlags gen;

    void add_to(CLI::App& app) {
        app.add_option("--input", input, "Points table (rows are samples)");
        app.add_option("--matrix", matrix, "Square distance matrix table");
        app.add_option("--format", format, "csv, tsv, csv-square or tsv-square (default: from extension, else csv)");
        app.add_option("--metric", metric, "euclidean | pbc=L1,L2,... | precomputed");
        app.add_flag("--drop-duplicates", drop_duplicates, "Drop repeated points instead of failing");
        app.add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it");
        app.add_option("--seed", seed, "Seed for generated data and block shuffles")->capture_default_str();
        gen.add_to(app);
    }
};

/// Loaded dataset: either coordinates with a metric or a distance matrix.
struct Dataset {
    std::optional<PointSet> points;
    Metric metric = Metric::euclidean();
    std::optional<DistanceMatrix> matrix;
};

inline Dataset load_input(const InputFlags& f) {
    const int sources = int(!f.input.empty()) + int(!f.matrix.empty()) + int(!f.gen.kind.empty());
    if (sources != 1) {
        throw UsageError("exactly one input source is required: --input, --matrix or --kind");
    }
    const MetricChoice m = parse_metric(f.metric);
    using K = MetricChoice::Kind;
    Dataset ds;
    if (!f.matrix.empty()) {
        if (m.kind != K::unset && m.kind != K::precomputed) {
            throw UsageError("--matrix requires --metric precomputed (or no --metric)");
        }
        ds.metric = Metric::precomputed();
        ds.matrix = io::load_distance_matrix(f.matrix, table_format(f.format, f.matrix));
        return ds;
    }
    if (m.kind == K::precomputed) {
        throw UsageError("--metric precomputed requires --matrix");
    }
    if (!f.gen.kind.empty()) {
        if (m.kind != K::unset) {
            throw UsageError("--metric cannot be combined with --kind; use --pbc for a periodic hypercube");
        }
        auto data = generate(f.gen.spec(f.seed));
        ds.points = std::move(data.points);
        ds.metric = data.metric;
        return ds;
    }
    ds.points = io::load_points(f.input, table_format(f.format, f.input));
    if (m.kind == K::periodic) {
        std::vector<double> box = m.box;
        if (box.size() == 1) {
            box.assign(ds.points->dim(), box.front());
        }
        if (box.size() != ds.points->dim()) {
            throw DimensionMismatchError(box.size(), ds.points->dim());
        }
        ds.metric = Metric::periodic(std::move(box));
    }
    return ds;
}

inline std::ofstream open_in_dir(const std::filesystem::path& dir, const std::string& name) {
    return io::open_output((dir / name).string());
}

inline std::string sigma_tag(double sigma) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", sigma);
    return buf;
}

} // namespace detail

/**
 * @brief Run the command line with explicit output streams.
 *
 * `argv[0]` is the program name. Normal output goes to `out`, diagnostics to
 * `err`.
 */
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Intrinsic dimension from first and second nearest-neighbor distances", "twonn"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "Estimate the intrinsic dimension of one dataset");
    detail::InputFlags est_in;
    est_in.add_to(*est_cmd);
    double discard = 0.10;
    std::string method = "cdf";
    std::string export_fit;
    est_cmd->add_option("--discard", discard, "Fraction of largest ratios left out of the fit")->capture_default_str();
    est_cmd->add_option("--method", method, "cdf or mle")->check(CLI::IsMember({"cdf", "mle"}))->capture_default_str();
    est_cmd->add_option("--export-fit", export_fit, "Write the cumulate points and fit membership as TSV");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "Average estimate over disjoint blocks of decreasing size");
    detail::InputFlags scan_in;
    scan_in.add_to(*scan_cmd);
    double scan_discard = 0.10;
    std::string scan_method = "cdf";
    std::string blocks = "auto";
    std::size_t min_block = 20;
    std::string scan_output;
    std::string plateau_path;
    double rel_tol = 0.05;
    std::size_t min_points = 3;
    scan_cmd->add_option("--discard", scan_discard, "Fraction of largest ratios left out of each fit")
        ->capture_default_str();
    scan_cmd->add_option("--method", scan_method, "cdf or mle")
        ->check(CLI::IsMember({"cdf", "mle"}))
        ->capture_default_str();
    scan_cmd->add_option("--blocks", blocks, "Comma-separated block sizes, or auto")->capture_default_str();
    scan_cmd->add_option("--min-block", min_block, "Smallest block size of the auto grid")->capture_default_str();
    scan_cmd->add_option("--output", scan_output, "Curve TSV path (default: standard output)");
    scan_cmd->add_option("--plateau", plateau_path, "Write the detected plateau as JSON");
    scan_cmd->add_option("--rel-tol", rel_tol, "Relative spread allowed inside a plateau")->capture_default_str();
    scan_cmd->add_option("--min-points", min_points, "Minimum curve points in a plateau")->capture_default_str();

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic dataset");
    detail::GeneratorFlags gen_flags;
    gen_flags.add_to(*gen_cmd);
    std::uint64_t gen_seed = 0;
    std::string gen_output;
    std::string gen_format = "csv";
    gen_cmd->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("--output", gen_output, "Output path (default: standard output)");
    gen_cmd->add_option("--format", gen_format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));

    // benchmark
    auto* bench_cmd = app.add_subcommand("benchmark", "Regenerate reference experiments: fig1, fig2 or fig3");
    std::string figure;
    std::uint64_t bench_seed = 1;
    std::string output_dir = ".";
    std::size_t instances = 20;
    std::size_t max_n = 25000;
    std::size_t bench_n = 50000;
    std::vector<std::string> bench_kinds;
    std::string bench_dims = "2,5,10";
    std::size_t bench_noise_dims = 20;
    double bench_rel_tol = 0.15;
    unsigned bench_threads = 0;
    bench_cmd->add_option("figure", figure, "fig1, fig2 or fig3")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    bench_cmd->add_option("--seed", bench_seed, "Base seed")->capture_default_str();
    bench_cmd->add_option("--output-dir", output_dir, "Directory for result files")->capture_default_str();
    bench_cmd->add_option("--instances", instances, "fig2: datasets per (kind, d, N)")->capture_default_str();
    bench_cmd->add_option("--max-n", max_n, "fig2: largest sample size")->capture_default_str();
    bench_cmd->add_option("--kind", bench_kinds, "fig2: kinds to run (repeatable)")
        ->check(CLI::IsMember({"hypercube", "gaussian", "cauchy_norm", "hypersphere"}));
    bench_cmd->add_option("--dims", bench_dims, "fig2: comma-separated dimensions")->capture_default_str();
    bench_cmd->add_option("--n", bench_n, "fig3/fig1: dataset size (fig1 default 2500)");
    bench_cmd->add_option("--noise-dims", bench_noise_dims, "fig3: noise directions")->capture_default_str();
    bench_cmd->add_option("--rel-tol", bench_rel_tol, "fig3: plateau tolerance")->capture_default_str();
    bench_cmd->add_option("--threads", bench_threads, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "twonn: " << e.what() << '\n';
        return usage;
    }

    try {
        if (est_cmd->parsed()) {
            if (!(discard >= 0.0 && discard < 1.0)) {
                throw UsageError("--discard must lie in [0, 1)");
            }
            const auto ds = detail::load_input(est_in);
            const NeighborOptions nopts{est_in.drop_duplicates, est_in.threads};
            const auto nb = ds.matrix ? two_nearest_from_matrix(*ds.matrix, nopts)
                                      : two_nearest(*ds.points, ds.metric, nopts);
            const auto mu = compute_mu(nb);
            const EstimatorOptions eopts{discard, method == "mle" ? Method::mle : Method::cdf_fit};
            const auto result = estimate_from_mu(mu, eopts);
            if (!export_fit.empty()) {
                io::export_fit(export_fit, empirical_cdf(mu), kept_mask(mu.size(), result), result.d_hat);
            }
            out << io::to_json(result).dump(2) << '\n';
            return ok;
        }

        if (scan_cmd->parsed()) {
            if (!(scan_discard >= 0.0 && scan_discard < 1.0)) {
                throw UsageError("--discard must lie in [0, 1)");
            }
            if (!(rel_tol >= 0.0)) {
                throw UsageError("--rel-tol must be non-negative");
            }
            auto ds = detail::load_input(scan_in);
            ScanOptions sopts;
            sopts.seed = scan_in.seed;
            sopts.estimator = {scan_discard, scan_method == "mle" ? Method::mle : Method::cdf_fit};
            sopts.neighbors = {scan_in.drop_duplicates, scan_in.threads};
            if (ds.points && scan_in.drop_duplicates) {
                ds.points = remove_duplicate_rows(*ds.points);
            }
            const std::size_t n = ds.matrix ? ds.matrix->size() : ds.points->size();
            const auto sizes = blocks == "auto" ? default_block_grid(n, min_block)
                                                : detail::parse_size_list(blocks, "--blocks");
            if (sizes.empty()) {
                throw UsageError("--blocks: no block sizes");
            }
            const auto curve = ds.matrix ? scan(*ds.matrix, sizes, sopts) : scan(*ds.points, ds.metric, sizes, sopts);
            if (scan_output.empty()) {
                io::write_scan(out, curve);
            } else {
                auto f = io::open_output(scan_output);
                io::write_scan(f, curve);
            }
            if (!plateau_path.empty()) {
                auto f = io::open_output(plateau_path);
                f << io::to_json(detect_plateau(curve, rel_tol, min_points)).dump(2) << '\n';
            }
            return ok;
        }

        if (gen_cmd->parsed()) {
            if (gen_flags.kind.empty()) {
                throw UsageError("generate requires --kind");
            }
            const auto data = generate(gen_flags.spec(gen_seed));
            const auto fmt = gen_format == "tsv" ? io::TableFormat::tsv : io::TableFormat::csv;
            if (gen_output.empty()) {
                io::write_points(out, data.points, fmt);
            } else {
                auto f = io::open_output(gen_output);
                io::write_points(f, data.points, fmt);
            }
            return ok;
        }

        // benchmark
        const std::filesystem::path dir(output_dir);
        std::filesystem::create_directories(dir);
        nlohmann::ordered_json summary;
        if (figure == "fig1") {
            const std::size_t n = bench_cmd->count("--n") ? bench_n : 2500;
            summary = nlohmann::ordered_json::array();
            for (const auto& panel : bench::run_fit_panels(bench_seed, n, bench_threads)) {
                const std::string file = "fig1_" + panel.name + ".tsv";
                auto f = detail::open_in_dir(dir, file);
                io::export_fit(f, panel.cdf, kept_mask(panel.cdf.size(), panel.discarded), panel.discarded.d_hat);
                nlohmann::ordered_json j;
                j["kind"] = panel.name;
                j["d"] = panel.spec.d;
                j["n"] = panel.spec.n;
                j["d_hat_discard_0"] = panel.full.d_hat;
                j["d_hat_discard_10"] = panel.discarded.d_hat;
                j["fit_file"] = file;
                summary.push_back(j);
            }
        } else if (figure == "fig2") {
            std::vector<GeneratorKind> kinds;
            if (bench_kinds.empty()) {
                kinds = {GeneratorKind::hypercube, GeneratorKind::gaussian, GeneratorKind::cauchy_norm,
                         GeneratorKind::hypersphere};
            }
            for (const auto& k : bench_kinds) {
                kinds.push_back(*parse_generator_kind(k));
            }
            const auto dims = detail::parse_size_list(bench_dims, "--dims");
            auto f = detail::open_in_dir(dir, "fig2.tsv");
            f << "# kind\td\tn\tinstances\td_mean\td_std\n";
            for (auto kind : kinds) {
                for (auto d : dims) {
                    for (auto n : bench::convergence_sizes()) {
                        if (n > max_n) {
                            continue;
                        }
                        const auto row =
                            bench::run_convergence_point(kind, d, n, instances, bench_seed, {}, bench_threads);
                        f << to_string(kind) << '\t' << d << '\t' << n << '\t' << instances << '\t'
                          << io::format_number(row.d_mean) << '\t' << io::format_number(row.d_std) << '\n';
                        f.flush();
                    }
                }
            }
            summary = {{"table", "fig2.tsv"}};
        } else {
            summary = nlohmann::ordered_json::array();
            for (auto kind : {GeneratorKind::noisy_plane, GeneratorKind::noisy_gauss_roll}) {
                for (double sigma : {0.0, 1e-4, 2e-4}) {
                    const auto res = bench::run_noisy_scan(kind, sigma, bench_seed, bench_n, bench_noise_dims,
                                                           bench_rel_tol, 20, bench_threads);
                    const std::string file =
                        "fig3_" + std::string(to_string(kind)) + "_sigma" + detail::sigma_tag(sigma) + ".tsv";
                    auto f = detail::open_in_dir(dir, file);
                    io::write_scan(f, res.curve);
                    nlohmann::ordered_json j;
                    j["kind"] = std::string(to_string(kind));
                    j["sigma"] = sigma;
                    j["curve_file"] = file;
                    j["plateau"] = io::to_json(res.plateau);
                    summary.push_back(j);
                }
            }
        }
        auto f = detail::open_in_dir(dir, figure + "_summary.json");
        f << summary.dump(2) << '\n';
        out << summary.dump(2) << '\n';
        return ok;
    } catch (const UsageError& e) {
        err << "twonn: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        err << "twonn: " << e.what() << '\n';
        return data;
    }
}

} // namespace twonn::cli

#endif
