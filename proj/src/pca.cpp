#include "fastortho/pca.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "fastortho/error.hpp"
#include "fastortho/factorizer.hpp"
#include "fastortho/linalg.hpp"
#include "fastortho/matrix_io.hpp"
#include "fastortho/parallel.hpp"
#include "fastortho/random.hpp"

namespace fastortho {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double to_number(const std::string& text, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw IoError("dataset line " + std::to_string(line_no) + ": bad number '" + text + "'");
    }
    if (text.find_first_not_of(" \t\r", used) != std::string::npos || !std::isfinite(v))
        throw IoError("dataset line " + std::to_string(line_no) + ": bad number '" + text + "'");
    return v;
}

template <typename Clock = std::chrono::steady_clock>
double seconds_of(const auto& fn) {
    const auto start = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<int> gather_labels(const Dataset& data, std::span<const std::size_t> idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (std::size_t k : idx) out.push_back(data.labels[k]);
    return out;
}

} // namespace

Dataset load_dataset_csv(const std::filesystem::path& path, LabelColumn label_column) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset " + path.string());
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_fields(line);
        if (label_column == LabelColumn::Last) {
            if (fields.size() < 2) throw IoError("dataset line " + std::to_string(line_no) + ": no features");
            const double label = to_number(fields.back(), line_no);
            if (label != std::floor(label)) throw IoError("dataset line " + std::to_string(line_no) + ": label is not an integer");
            labels.push_back(static_cast<int>(label));
            fields.pop_back();
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width) throw IoError("dataset line " + std::to_string(line_no) + ": ragged row");
        std::vector<double> row;
        row.reserve(width);
        for (const auto& f : fields) row.push_back(to_number(f, line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("dataset " + path.string() + " is empty");

    Dataset data;
    data.x = DenseMatrix(width, rows.size());
    for (std::size_t c = 0; c < rows.size(); ++c)
        std::copy(rows[c].begin(), rows[c].end(), data.x.column(c).begin());
    data.labels = std::move(labels);
    data.train.resize(rows.size());
    std::iota(data.train.begin(), data.train.end(), 0);
    return data;
}

void save_dataset_csv(const std::filesystem::path& path, const Dataset& data, int decimals) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out.setf(std::ios::fixed);
    out.precision(decimals);
    for (std::size_t c = 0; c < data.size(); ++c) {
        for (std::size_t r = 0; r < data.dimension(); ++r) {
            if (r > 0) out << ',';
            out << data.x(r, c);
        }
        if (data.labeled()) out << ',' << data.labels[c];
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

void split(Dataset& data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ValidationError("split: test fraction must be in (0, 1)");
    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    if (n_test == 0 || n_test == n) throw ValidationError("split: a side would be empty");
    data.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    data.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    std::sort(data.test.begin(), data.test.end());
    std::sort(data.train.begin(), data.train.end());
}

Dataset make_two_blobs(std::uint64_t seed, std::size_t d, std::size_t n) {
    Rng rng(seed);
    std::vector<double> direction(d);
    for (double& v : direction) v = rng.normal();
    const double norm = std::sqrt(dot(direction, direction));
    // Decaying per-coordinate spread gives PCA a non-trivial spectrum.
    std::vector<double> spread(d);
    for (std::size_t r = 0; r < d; ++r) spread[r] = 0.5 + 1.5 / (1.0 + static_cast<double>(r) / 8.0);

    Dataset data;
    data.x = DenseMatrix(d, n);
    data.labels.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        const int label = static_cast<int>(c % 2);
        const double shift = label == 0 ? -4.0 : 4.0;
        for (std::size_t r = 0; r < d; ++r) data.x(r, c) = shift * direction[r] / norm + spread[r] * rng.normal();
        data.labels[c] = label;
    }
    data.train.resize(n);
    std::iota(data.train.begin(), data.train.end(), 0);
    return data;
}

Dataset make_digits_like(std::uint64_t seed, std::size_t n) {
    constexpr std::size_t side = 8;
    constexpr std::size_t classes = 10;
    Rng rng(seed);
    // Each class is a random walk stroke on the 8 x 8 grid.
    std::vector<std::vector<double>> glyphs(classes, std::vector<double>(side * side, 0.0));
    for (auto& glyph : glyphs) {
        long r = static_cast<long>(rng.below(side));
        long c = static_cast<long>(rng.below(side));
        for (int step = 0; step < 18; ++step) {
            glyph[static_cast<std::size_t>(r) * side + static_cast<std::size_t>(c)] = 16.0;
            r = std::clamp<long>(r + static_cast<long>(rng.below(3)) - 1, 0, side - 1);
            c = std::clamp<long>(c + static_cast<long>(rng.below(3)) - 1, 0, side - 1);
        }
    }
    Dataset data;
    data.x = DenseMatrix(side * side, n);
    data.labels.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t label = k % classes;
        const double ink = 0.7 + 0.6 * rng.uniform();
        for (std::size_t t = 0; t < side * side; ++t)
            data.x(t, k) = std::clamp(ink * glyphs[label][t] + 3.0 * rng.normal(), 0.0, 16.0);
        data.labels[k] = static_cast<int>(label);
    }
    data.train.resize(n);
    std::iota(data.train.begin(), data.train.end(), 0);
    return data;
}

DenseMatrix gather_columns(const DenseMatrix& x, std::span<const std::size_t> indices) {
    DenseMatrix out(x.rows(), indices.size());
    for (std::size_t c = 0; c < indices.size(); ++c) {
        if (indices[c] >= x.cols()) throw ShapeError("gather_columns: index out of range");
        const auto src = x.column(indices[c]);
        std::copy(src.begin(), src.end(), out.column(c).begin());
    }
    return out;
}

PcaModel fit_pca(const Dataset& data, std::size_t p, bool center) {
    if (data.size() == 0 || data.dimension() == 0) throw ValidationError("fit_pca: empty dataset");
    std::vector<std::size_t> all;
    std::span<const std::size_t> idx = data.train;
    if (idx.empty()) {
        all.resize(data.size());
        std::iota(all.begin(), all.end(), 0);
        idx = all;
    }
    const std::size_t d = data.dimension();
    if (p == 0 || p > std::min(d, idx.size()))
        throw ValidationError("fit_pca: p must be in [1, min(d, N)]");

    DenseMatrix x = gather_columns(data.x, idx);
    std::vector<double> mean(d, 0.0);
    if (center) {
        for (std::size_t c = 0; c < x.cols(); ++c)
            for (std::size_t r = 0; r < d; ++r) mean[r] += x(r, c);
        for (double& m : mean) m /= static_cast<double>(x.cols());
        for (std::size_t c = 0; c < x.cols(); ++c)
            for (std::size_t r = 0; r < d; ++r) x(r, c) -= mean[r];
    }

    const SvdResult svd = svd_dense(x);
    PcaModel model;
    model.mean = std::move(mean);
    model.u_p = leading_columns(svd.u, p);
    model.sigma = DiagonalWeights{d, std::vector<double>(p)};
    for (std::size_t t = 0; t < p; ++t) {
        model.sigma.values[t] = svd.s[t];
        auto col = model.u_p.column(t);
        std::size_t peak = 0;
        for (std::size_t r = 1; r < d; ++r)
            if (std::abs(col[r]) > std::abs(col[peak])) peak = r;
        if (col[peak] < 0.0)
            for (double& v : col) v = -v;
    }
    return model;
}

DenseMatrix pca_project(const PcaModel& model, const DenseMatrix& x, unsigned threads) {
    if (x.rows() != model.u_p.rows()) throw ShapeError("pca_project: dimension mismatch");
    const std::size_t p = model.u_p.cols();
    DenseMatrix out(p, x.cols());
    parallel_for(x.cols(), threads, [&](std::size_t c) {
        const auto xc = x.column(c);
        for (std::size_t t = 0; t < p; ++t) out(t, c) = dot(model.u_p.column(t), xc);
    });
    return out;
}

FastProjection train_fast_projection(const PcaModel& model, const FactorizerConfig& config) {
    const std::size_t d = model.u_p.rows();
    const std::size_t p = model.u_p.cols();
    FastProjection out;
    if (config.g == 0) {
        GivensProduct& prod = out.product;
        prod.d = d;
        prod.p = p;
        prod.sigma_rule = config.sigma_rule;
        prod.weights = update_sigma(scale_columns(model.u_p, model.sigma.values), config.sigma_rule,
                                    config.sigma_rule == SigmaRule::Identity ? DiagonalWeights::ones(d, p)
                                                                             : model.sigma);
        prod.log.config = config;
    } else {
        out.product = factorize(model.u_p, model.sigma, config);
    }
    out.plan = plan(out.product);
    return out;
}

KnnResult knn_classify(const DenseMatrix& train_proj, std::span<const int> train_labels, const DenseMatrix& test_proj,
                       std::span<const int> test_labels, std::size_t k, unsigned threads) {
    const std::size_t n_train = train_proj.cols();
    if (train_labels.size() != n_train) throw ShapeError("knn: one label per training point");
    if (train_proj.rows() != test_proj.rows()) throw ShapeError("knn: projections differ in dimension");
    if (k == 0 || k > n_train) throw ValidationError("knn: k must be in [1, N_train]");
    if (!test_labels.empty() && test_labels.size() != test_proj.cols()) throw ShapeError("knn: one label per test point");

    const std::size_t dim = train_proj.rows();
    KnnResult result;
    result.predictions.resize(test_proj.cols());
    parallel_for(test_proj.cols(), threads, [&](std::size_t q) {
        const auto y = test_proj.column(q);
        std::vector<std::pair<double, std::size_t>> dist(n_train);
        for (std::size_t c = 0; c < n_train; ++c) {
            const auto x = train_proj.column(c);
            double acc = 0.0;
            for (std::size_t t = 0; t < dim; ++t) {
                const double diff = x[t] - y[t];
                acc += diff * diff;
            }
            dist[c] = {acc, c};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        std::map<int, std::size_t> votes;
        for (std::size_t m = 0; m < k; ++m) ++votes[train_labels[dist[m].second]];
        int best = votes.begin()->first;
        std::size_t best_count = 0;
        for (const auto& [label, count] : votes) {
            if (count > best_count) {
                best = label;
                best_count = count;
            }
        }
        result.predictions[q] = best;
    });
    if (!test_labels.empty()) {
        std::size_t hits = 0;
        for (std::size_t q = 0; q < test_labels.size(); ++q) hits += result.predictions[q] == test_labels[q];
        result.accuracy = static_cast<double>(hits) / static_cast<double>(test_labels.size());
    }
    return result;
}

std::size_t saturation_budget(std::size_t d, std::size_t p) { return p * d - p * (p + 1) / 2; }

ExperimentReport run_experiment(const Dataset& data, const ExperimentConfig& config) {
    if (!data.labeled()) throw ValidationError("run_experiment: dataset has no labels");
    if (data.train.empty() || data.test.empty()) throw ValidationError("run_experiment: needs a train/test split");
    if (config.g_grid.empty() || config.rules.empty()) throw ValidationError("run_experiment: empty grid");

    const PcaModel model = fit_pca(data, config.p, config.center);
    const DenseMatrix train_x = gather_columns(data.x, data.train);
    const DenseMatrix test_x = gather_columns(data.x, data.test);
    const std::vector<int> train_labels = gather_labels(data, data.train);
    const std::vector<int> test_labels = gather_labels(data, data.test);
    const std::size_t d = data.dimension();
    const std::size_t p = config.p;

    // k-NN is translation invariant, so projecting raw points matches projecting centred ones.
    const KnnResult full = knn_classify(pca_project(model, train_x, config.threads), train_labels,
                                        pca_project(model, test_x, config.threads), test_labels, config.k,
                                        config.threads);

    std::vector<double> dense_times;
    for (int rep = 0; rep < config.timing_repeats; ++rep)
        dense_times.push_back(seconds_of([&] { (void)pca_project(model, test_x); }));
    const double dense_time = median(dense_times);

    struct Cell {
        std::size_t g;
        SigmaRule rule;
    };
    std::vector<Cell> cells;
    for (std::size_t g : config.g_grid)
        for (SigmaRule rule : config.rules) cells.push_back({g, rule});

    ExperimentReport report;
    report.rows.resize(cells.size());
    for (std::size_t n = 0; n < cells.size(); ++n) {
        FactorizerConfig fc = config.factorizer;
        fc.g = cells[n].g;
        fc.sigma_rule = cells[n].rule;
        const FastProjection fast = train_fast_projection(model, fc);

        const DenseMatrix train_proj = project_batch(fast.plan, fast.product, train_x, config.threads);
        const DenseMatrix test_proj = project_batch(fast.plan, fast.product, test_x, config.threads);
        const KnnResult approx =
            knn_classify(train_proj, train_labels, test_proj, test_labels, config.k, config.threads);

        std::vector<double> fast_times;
        for (int rep = 0; rep < config.timing_repeats; ++rep)
            fast_times.push_back(seconds_of([&] { (void)project_batch(fast.plan, fast.product, test_x, 1); }));

        ExperimentRow& row = report.rows[n];
        row.g = cells[n].g;
        row.sigma_rule = cells[n].rule;
        row.accuracy_full = full.accuracy;
        row.accuracy_fast = approx.accuracy;
        row.flops_per_vector = fast.plan.flops_per_vector;
        row.flops_speedup = static_cast<double>(dense_projection_flops(d, p)) /
                            static_cast<double>(fast.plan.flops_per_vector);
        const double fast_time = median(fast_times);
        row.time_speedup = fast_time > 0.0 ? dense_time / fast_time : 0.0;
        row.selection_fraction = fast.plan.selection_fraction();
        row.frobenius_error =
            frobenius_distance_sq(model.u_p, leading_columns(dense_orthogonal(fast.product), p)) /
            (2.0 * static_cast<double>(d));
        row.stages = fast.plan.stages.size();
        std::size_t same = 0;
        for (std::size_t q = 0; q < test_labels.size(); ++q) same += approx.predictions[q] == full.predictions[q];
        row.prediction_agreement = static_cast<double>(same) / static_cast<double>(test_labels.size());
    }
    return report;
}

nlohmann::ordered_json to_json(const ExperimentRow& row, bool include_timing) {
    nlohmann::ordered_json j{{"g", row.g},
                             {"sigma_rule", std::string(to_string(row.sigma_rule))},
                             {"accuracy_full", row.accuracy_full},
                             {"accuracy_fast", row.accuracy_fast},
                             {"flops_speedup", row.flops_speedup},
                             {"time_speedup", include_timing ? nlohmann::ordered_json(row.time_speedup) : nullptr},
                             {"selection_fraction", row.selection_fraction},
                             {"frobenius_error", row.frobenius_error},
                             {"flops_per_vector", row.flops_per_vector},
                             {"stages", row.stages},
                             {"prediction_agreement", row.prediction_agreement}};
    return j;
}

} // namespace fastortho
