#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "fastortho/analysis.hpp"
#include "fastortho/error.hpp"
#include "fastortho/factorizer.hpp"
#include "fastortho/fast_apply.hpp"
#include "fastortho/linalg.hpp"
#include "fastortho/matrix_io.hpp"
#include "fastortho/pca.hpp"
#include "fastortho/product_io.hpp"
#include "fastortho/random.hpp"
#include "fastortho/synthetic.hpp"

namespace fastortho::cli {

namespace {

using Json = nlohmann::ordered_json;

unsigned default_threads() {
    if (const char* env = std::getenv("GF_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path);
    file << text;
    if (!file) throw IoError("write failed for " + path);
}

void emit(const Json& report, const std::string& path, std::ostream& out) {
    write_text(path, report.dump(2) + "\n", out);
}

SigmaRule sigma_rule_from(const std::string& text) {
    if (auto rule = parse_sigma_rule(text)) return *rule;
    throw ValidationError("unknown sigma rule '" + text + "' (identity|original|update)");
}

DiagonalWeights weights_for(std::size_t d, std::size_t p, const std::vector<double>& values) {
    if (values.empty()) return DiagonalWeights::ones(d, p);
    if (values.size() != p)
        throw ValidationError("expected " + std::to_string(p) + " sigma values, got " + std::to_string(values.size()));
    return DiagonalWeights{d, values};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct FactorizeOptions {
    std::string input;
    std::string output;
    std::string json_path;
    std::string log_path;
    std::string report_path;
    std::size_t p = 0;
    std::size_t g = 1;
    std::string sigma_rule = "identity";
    std::vector<double> sigma_values;
    double epsilon = 1e-2;
    int max_sweeps = 100;
    bool rotations_only = false;
    std::string score_init = "consistent";
    std::uint64_t seed = 0;
};

int cmd_factorize(const FactorizeOptions& o, std::ostream& out) {
    DenseMatrix u = load_matrix(o.input);
    const std::size_t p = o.p == 0 ? u.cols() : o.p;
    if (p > u.cols()) throw ShapeError("--p exceeds the number of input columns");
    u = leading_columns(u, p);

    FactorizerConfig config;
    config.g = o.g;
    config.sigma_rule = sigma_rule_from(o.sigma_rule);
    config.epsilon = o.epsilon;
    config.max_sweeps = o.max_sweeps;
    config.rotations_only = o.rotations_only;
    config.seed = o.seed;
    if (o.score_init == "literal")
        config.score_init = ScoreInit::Literal;
    else if (o.score_init != "consistent")
        throw ValidationError("--score-init must be consistent or literal");

    const DiagonalWeights sigma = weights_for(u.rows(), p, o.sigma_values);
    const GivensProduct product = factorize(u, sigma, config);
    save_egt(o.output, product);
    if (!o.json_path.empty()) write_text(o.json_path, to_json(product).dump(2) + "\n", out);
    if (!o.log_path.empty()) {
        std::ofstream log(o.log_path);
        if (!log) throw IoError("cannot write " + o.log_path);
        write_build_log(log, product.log);
    }

    Json report{{"command", "factorize"},
                {"config", to_json(config)},
                {"input", o.input},
                {"d", product.d},
                {"p", product.p},
                {"g", product.g()},
                {"objective_initial", product.log.sweeps.front().objective},
                {"objective_final", product.log.sweeps.back().objective},
                {"sweeps", product.log.sweeps.size() - 1},
                {"converged", product.log.converged},
                {"normalized_frobenius",
                 frobenius_distance_sq(u, leading_columns(dense_orthogonal(product), p)) /
                     (2.0 * static_cast<double>(product.d))},
                {"stages", count_stages(product)},
                {"flops_per_vector", plan(product).flops_per_vector}};
    emit(report, o.report_path, out);
    return kOk;
}

int cmd_eval(const std::string& u_path, const std::string& egt_path, const std::vector<double>& sigma_values,
             const std::string& out_path, std::ostream& out) {
    const GivensProduct product = load_egt(egt_path);
    DenseMatrix u = load_matrix(u_path);
    if (u.rows() != product.d || u.cols() < product.p)
        throw ShapeError("U does not match the factorisation's d x p shape");
    u = leading_columns(u, product.p);
    const DiagonalWeights sigma = weights_for(product.d, product.p, sigma_values);
    const ErrorReport report = error_report(u, product, sigma);

    Json bounds{{"half_budget_bound", half_budget_bound(product.d)}};
    if (product.g() <= product.d * (product.d - 1) / 2)
        bounds["budget_bound"] = budget_bound(product.d, product.g());
    else
        bounds["budget_bound"] = nullptr;
    bounds["operator_norm_bound"] = report.operator_norm_bound;
    bounds["operator_norm_bound_applies"] = report.operator_norm_bound_applies;
    bounds["operator_norm_at_most_two"] = report.operator_norm <= 2.0 + 1e-10;
    bounds["operator_norm_within_bound"] = report.operator_norm <= report.operator_norm_bound + 1e-10;

    Json j{{"command", "eval"},
           {"config", {{"u", u_path}, {"egt", egt_path}, {"sigma_values", sigma_values}}},
           {"d", product.d},
           {"p", product.p},
           {"g", product.g()},
           {"report", to_json(report)},
           {"bounds", bounds}};
    if (product.p == product.d) {
        const auto spectrum = error_spectrum(u, dense_orthogonal(product));
        double worst = 0.0;
        Json values = Json::array();
        for (const auto& z : spectrum) {
            worst = std::max(worst, std::abs(std::abs(z - 1.0) - 1.0));
            values.push_back({z.real(), z.imag()});
        }
        j["spectrum"] = {{"max_circle_deviation", worst}, {"eigenvalues", values}};
    }
    emit(j, out_path, out);
    return kOk;
}

int cmd_synthetic(const SyntheticConfig& config, const std::string& format, const std::string& out_path,
                  bool include_trials, std::ostream& out) {
    const auto rows = run_synthetic(config);
    Json echo{{"command", "synthetic"},
              {"d", config.d},
              {"g_grid", config.g_grid},
              {"trials", config.trials},
              {"seed", config.seed},
              {"epsilon", config.epsilon},
              {"max_sweeps", config.max_sweeps}};
    std::string fmt = format;
    if (fmt.empty()) fmt = out_path.size() > 4 && out_path.ends_with(".csv") ? "csv" : "json";
    if (fmt == "csv") {
        std::string text = "# config " + echo.dump() + "\n";
        text += "g,extended_mean,extended_std,rotations_mean,rotations_std,relative_improvement,"
                "extended_not_worse,budget_bound,budget_bound_normalized,stages_mean,sweeps_mean\n";
        for (const auto& r : rows) {
            auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string("nan"); };
            text += std::to_string(r.g) + "," + num(r.extended_mean) + "," + num(r.extended_std) + "," +
                    num(r.rotations_mean) + "," + num(r.rotations_std) + "," + num(r.relative_improvement) + "," +
                    std::to_string(r.extended_not_worse) + "," + num(r.budget_bound) + "," +
                    num(r.budget_bound_normalized) + "," + num(r.stages_mean) + "," + num(r.sweeps_mean) + "\n";
        }
        write_text(out_path, text, out);
    } else if (fmt == "json") {
        Json j{{"config", echo}, {"rows", Json::array()}};
        for (const auto& r : rows) j["rows"].push_back(to_json(r, include_trials));
        emit(j, out_path, out);
    } else {
        throw ValidationError("--format must be json or csv");
    }
    return kOk;
}

struct PcaOptions {
    std::string data_path;
    std::string label_col = "last";
    std::size_t p = 4;
    std::vector<std::size_t> g_grid;
    std::vector<std::string> rules{"identity"};
    std::size_t k = 10;
    double test_fraction = 0.25;
    std::uint64_t seed = 0;
    bool no_center = false;
    bool no_timing = false;
    int repeats = 5;
    double epsilon = 1e-2;
    int max_sweeps = 100;
    std::string out_path;
};

int cmd_pca(const PcaOptions& o, unsigned threads, std::ostream& out) {
    if (o.label_col != "last") throw ValidationError("pca needs labels: use --label-col last");
    Dataset data = load_dataset_csv(o.data_path, LabelColumn::Last);
    split(data, o.test_fraction, o.seed);

    ExperimentConfig config;
    config.p = o.p;
    config.g_grid = o.g_grid;
    if (config.g_grid.empty()) config.g_grid = {saturation_budget(data.dimension(), o.p)};
    config.rules.clear();
    for (const auto& r : o.rules) config.rules.push_back(sigma_rule_from(r));
    config.k = o.k;
    config.center = !o.no_center;
    config.timing_repeats = o.no_timing ? 1 : o.repeats;
    config.threads = threads;
    config.factorizer.epsilon = o.epsilon;
    config.factorizer.max_sweeps = o.max_sweeps;
    config.factorizer.seed = o.seed;

    const ExperimentReport report = run_experiment(data, config);
    Json echo{{"command", "pca"},
              {"data", o.data_path},
              {"d", data.dimension()},
              {"n", data.size()},
              {"n_train", data.train.size()},
              {"n_test", data.test.size()},
              {"p", o.p},
              {"g_grid", config.g_grid},
              {"sigma_rules", o.rules},
              {"k", o.k},
              {"test_fraction", o.test_fraction},
              {"seed", o.seed},
              {"center", config.center},
              {"epsilon", o.epsilon},
              {"max_sweeps", o.max_sweeps},
              {"saturation_budget", saturation_budget(data.dimension(), o.p)},
              {"dense_flops_per_vector", dense_projection_flops(data.dimension(), o.p)}};
    Json j{{"config", echo}, {"rows", Json::array()}};
    for (const auto& row : report.rows) j["rows"].push_back(to_json(row, !o.no_timing));
    emit(j, o.out_path, out);
    return kOk;
}

int cmd_bench(const std::string& egt_path, std::size_t n_vectors, int repeats, std::uint64_t seed, bool no_timing,
              const std::string& out_path, std::ostream& out) {
    if (n_vectors == 0 || repeats < 1) throw ValidationError("bench needs --n-vectors >= 1 and --repeats >= 1");
    const GivensProduct product = load_egt(egt_path);
    const ApplyPlan pl = plan(product);
    const DenseMatrix op = dense_operator(product);
    Rng rng(seed);
    DenseMatrix x(product.d, n_vectors);
    for (double& v : x.data()) v = rng.normal();

    auto dense_apply = [&] {
        DenseMatrix y(product.p, n_vectors);
        for (std::size_t c = 0; c < n_vectors; ++c)
            for (std::size_t t = 0; t < product.p; ++t) y(t, c) = dot(op.column(t), x.column(c));
        return y;
    };
    auto seconds = [](const auto& fn) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    const DenseMatrix fast_y = project_batch(pl, product, x, 1);
    const DenseMatrix dense_y = dense_apply();
    double max_diff = 0.0;
    for (std::size_t k = 0; k < fast_y.data().size(); ++k)
        max_diff = std::max(max_diff, std::abs(fast_y.data()[k] - dense_y.data()[k]));

    const std::uint64_t dense_flops = dense_projection_flops(product.d, product.p);
    Json j{{"command", "bench"},
           {"config", {{"egt", egt_path}, {"n_vectors", n_vectors}, {"repeats", repeats}, {"seed", seed}}},
           {"d", product.d},
           {"p", product.p},
           {"g", product.g()},
           {"flops_fast", pl.flops_per_vector},
           {"flops_dense", dense_flops},
           {"flops_speedup", static_cast<double>(dense_flops) / static_cast<double>(pl.flops_per_vector)},
           {"full_ops", pl.full_count()},
           {"half_ops", pl.half_count()},
           {"skipped_ops", pl.skip_count()},
           {"max_abs_difference", max_diff}};
    if (no_timing) {
        j["fast_ns_per_vector"] = nullptr;
        j["dense_ns_per_vector"] = nullptr;
        j["time_speedup"] = nullptr;
    } else {
        std::vector<double> fast_t, dense_t;
        for (int r = 0; r < repeats; ++r) {
            fast_t.push_back(seconds([&] { (void)project_batch(pl, product, x, 1); }));
            dense_t.push_back(seconds([&] { (void)dense_apply(); }));
        }
        const double per = 1e9 / static_cast<double>(n_vectors);
        j["fast_ns_per_vector"] = median(fast_t) * per;
        j["dense_ns_per_vector"] = median(dense_t) * per;
        j["time_speedup"] = median(dense_t) / median(fast_t);
    }
    emit(j, out_path, out);
    return kOk;
}

int cmd_stages(const std::string& egt_path, const std::string& out_path, std::ostream& out) {
    const GivensProduct product = load_egt(egt_path);
    const auto stages = stage_partition(product);
    Json list = Json::array();
    for (const auto& stage : stages) {
        Json s = Json::array();
        for (std::size_t k : stage) s.push_back(k + 1);
        list.push_back(std::move(s));
    }
    Json j{{"command", "stages"},
           {"config", {{"egt", egt_path}}},
           {"g", product.g()},
           {"count", stages.size()},
           {"stages", std::move(list)}};
    emit(j, out_path, out);
    return kOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Approximate orthonormal matrices by products of extended Givens transformations", "fastortho"};
    app.require_subcommand(1);
    unsigned threads = default_threads();
    std::optional<std::uint64_t> seed;
    std::string out_path;

    // sample-haar
    auto* haar = app.add_subcommand("sample-haar", "Write a Haar-random orthogonal matrix with non-negative diagonal");
    std::size_t haar_d = 0;
    std::string haar_format;
    haar->add_option("--d", haar_d, "Dimension")->required()->check(CLI::PositiveNumber);
    haar->add_option("--seed", seed, "RNG seed")->required();
    haar->add_option("--out", out_path, "Output matrix (.csv or DMAT)")->required();
    haar->add_option("--format", haar_format, "csv|dmat (default from extension)")->check(CLI::IsMember({"csv", "dmat"}));

    // factorize
    FactorizeOptions fo;
    auto* fact = app.add_subcommand("factorize", "Greedy factorisation of U_p Sigma_p into an EGT1 product");
    fact->add_option("--in", fo.input, "Orthonormal input matrix (d x p)")->required();
    fact->add_option("--g", fo.g, "Number of transforms")->required();
    fact->add_option("--p", fo.p, "Use only the leading p columns");
    fact->add_option("--sigma-rule", fo.sigma_rule, "identity|original|update");
    fact->add_option("--sigma-values", fo.sigma_values, "Comma-separated Sigma_p diagonal")->delimiter(',');
    fact->add_option("--epsilon", fo.epsilon, "Stopping tolerance on the sweep objective change");
    fact->add_option("--max-sweeps", fo.max_sweeps, "Sweep limit");
    fact->add_flag("--rotations-only", fo.rotations_only, "Disallow reflectors");
    fact->add_option("--score-init", fo.score_init, "consistent|literal");
    fact->add_option("--seed", fo.seed, "Recorded in the build log");
    fact->add_option("--out", fo.output, "EGT1 output file")->required();
    fact->add_option("--json", fo.json_path, "Also write the JSON mirror");
    fact->add_option("--log", fo.log_path, "Build log (JSON lines)");
    fact->add_option("--report", fo.report_path, "Summary report (default stdout)");

    // eval
    std::string eval_u, eval_egt;
    std::vector<double> eval_sigma;
    auto* eval = app.add_subcommand("eval", "Error measures and bounds for a factorisation");
    eval->add_option("--u", eval_u, "Reference matrix")->required();
    eval->add_option("--egt", eval_egt, "EGT1 product")->required();
    eval->add_option("--sigma-values", eval_sigma, "Weights for the weighted measures")->delimiter(',');
    eval->add_option("--out", out_path, "Report path (default stdout)");

    // synthetic
    SyntheticConfig syn;
    std::string syn_format;
    bool syn_trials = false;
    auto* synthetic = app.add_subcommand("synthetic", "Haar experiment: extended vs rotations-only per budget");
    synthetic->add_option("--d", syn.d, "Dimension")->required();
    synthetic->add_option("--g-grid", syn.g_grid, "Comma-separated budgets")->required()->delimiter(',');
    synthetic->add_option("--trials", syn.trials, "Realisations per budget");
    synthetic->add_option("--seed", seed, "Base seed (trial t uses seed + t)")->required();
    synthetic->add_option("--epsilon", syn.epsilon, "Stopping tolerance");
    synthetic->add_option("--max-sweeps", syn.max_sweeps, "Sweep limit");
    synthetic->add_option("--format", syn_format, "json|csv (default from extension)");
    synthetic->add_flag("--per-trial", syn_trials, "Include per-trial errors (json)");
    synthetic->add_option("--out", out_path, "Report path (default stdout)");
    synthetic->add_option("--threads", threads, "Worker threads (GF_THREADS fallback)");

    // pca
    PcaOptions po;
    auto* pca = app.add_subcommand("pca", "k-NN accuracy and speedups of factored PCA projections");
    pca->add_option("--data", po.data_path, "Dataset CSV")->required();
    pca->add_option("--label-col", po.label_col, "last|none")->check(CLI::IsMember({"last", "none"}));
    pca->add_option("--p", po.p, "Retained components");
    pca->add_option("--g-grid", po.g_grid, "Comma-separated budgets (default: saturation)")->delimiter(',');
    pca->add_option("--sigma-rules", po.rules, "Comma-separated rules")->delimiter(',');
    pca->add_option("--k", po.k, "Neighbours");
    pca->add_option("--test-fraction", po.test_fraction, "Held-out share");
    pca->add_option("--seed", seed, "Split seed")->required();
    pca->add_flag("--no-center", po.no_center, "Skip mean removal");
    pca->add_flag("--no-timing", po.no_timing, "Omit wall-clock measurements");
    pca->add_option("--repeats", po.repeats, "Timing repeats");
    pca->add_option("--epsilon", po.epsilon, "Stopping tolerance");
    pca->add_option("--max-sweeps", po.max_sweeps, "Sweep limit");
    pca->add_option("--out", out_path, "Report path (default stdout)");
    pca->add_option("--threads", threads, "Worker threads (GF_THREADS fallback)");

    // bench
    std::string bench_egt;
    std::size_t bench_n = 1000;
    int bench_repeats = 5;
    bool bench_no_timing = false;
    auto* bench = app.add_subcommand("bench", "Fast apply vs dense projection");
    bench->add_option("--egt", bench_egt, "EGT1 product")->required();
    bench->add_option("--n-vectors", bench_n, "Vectors per repeat");
    bench->add_option("--repeats", bench_repeats, "Repeats (median reported)");
    bench->add_option("--seed", seed, "Seed for the random vectors")->required();
    bench->add_flag("--no-timing", bench_no_timing, "Omit wall-clock measurements");
    bench->add_option("--out", out_path, "Report path (default stdout)");
    bench->add_option("--threads", threads, "Accepted for symmetry; timing is single-threaded");

    // stages
    std::string stages_egt;
    auto* stages = app.add_subcommand("stages", "Stage count and partition of a product");
    stages->add_option("--egt", stages_egt, "EGT1 product")->required();
    stages->add_option("--out", out_path, "Report path (default stdout)");

    // make-fixture
    std::string fixture_kind;
    auto* fixture = app.add_subcommand("make-fixture", "Generate a bundled dataset");
    fixture->add_option("--kind", fixture_kind, "blobs|digits")->required()->check(CLI::IsMember({"blobs", "digits"}));
    fixture->add_option("--seed", seed, "Generator seed")->required();
    fixture->add_option("--out", out_path, "CSV path")->required();

    std::vector<std::string> argv_store{"fastortho"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }

    if (threads == 0) threads = 1;
    try {
        if (*haar) {
            const DenseMatrix u = haar_orthogonal(haar_d, *seed);
            MatrixFormat format = format_for_path(out_path);
            if (haar_format == "csv") format = MatrixFormat::Csv;
            if (haar_format == "dmat") format = MatrixFormat::Dmat;
            save_matrix(out_path, u, format);
            return kOk;
        }
        if (*fact) return cmd_factorize(fo, out);
        if (*eval) return cmd_eval(eval_u, eval_egt, eval_sigma, out_path, out);
        if (*synthetic) {
            syn.seed = *seed;
            syn.threads = threads;
            return cmd_synthetic(syn, syn_format, out_path, syn_trials, out);
        }
        if (*pca) {
            po.seed = *seed;
            po.out_path = out_path;
            return cmd_pca(po, threads, out);
        }
        if (*bench) return cmd_bench(bench_egt, bench_n, bench_repeats, *seed, bench_no_timing, out_path, out);
        if (*stages) return cmd_stages(stages_egt, out_path, out);
        if (*fixture) {
            const Dataset data = fixture_kind == "blobs" ? make_two_blobs(*seed) : make_digits_like(*seed);
            save_dataset_csv(out_path, data, 4);
            return kOk;
        }
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (residual " << e.residual() << ")\n";
        return kNonConvergence;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

} // namespace fastortho::cli
