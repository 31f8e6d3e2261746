#include "fastortho/product_io.hpp"

#include <fstream>
#include <limits>

#include "fastortho/binary.hpp"
#include "fastortho/error.hpp"

namespace fastortho {

namespace {

constexpr std::uint32_t kVersion = 1;

std::uint32_t narrow(std::size_t v, const char* what) {
    if (v > std::numeric_limits<std::uint32_t>::max()) throw IoError(std::string("EGT1: ") + what + " too large");
    return static_cast<std::uint32_t>(v);
}

SigmaRule rule_from_byte(std::uint8_t b) {
    if (b > 2) throw IoError("EGT1: unknown sigma_rule " + std::to_string(b));
    return static_cast<SigmaRule>(b);
}

TransformKind kind_from_byte(std::uint8_t b) {
    if (b > 1) throw IoError("EGT1: unknown transform kind " + std::to_string(b));
    return static_cast<TransformKind>(b);
}

} // namespace

void write_egt(std::ostream& out, const GivensProduct& product) {
    validate(product);
    out.write("EGT1", 4);
    binary::put(out, kVersion);
    binary::put(out, narrow(product.d, "d"));
    binary::put(out, narrow(product.p, "p"));
    binary::put(out, narrow(product.g(), "g"));
    binary::put(out, static_cast<std::uint8_t>(product.sigma_rule));
    for (const auto& t : product.transforms) {
        binary::put(out, narrow(t.i + 1, "i"));
        binary::put(out, narrow(t.j + 1, "j"));
        binary::put(out, t.c);
        binary::put(out, t.s);
        binary::put(out, static_cast<std::uint8_t>(t.kind));
    }
    for (double v : product.weights.values) binary::put(out, v);
}

GivensProduct read_egt(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::string(magic, 4) != "EGT1") throw IoError("not an EGT1 stream");
    const auto version = binary::get<std::uint32_t>(in);
    if (version != kVersion) throw IoError("EGT1: unsupported version " + std::to_string(version));
    GivensProduct product;
    product.d = binary::get<std::uint32_t>(in);
    product.p = binary::get<std::uint32_t>(in);
    const auto g = binary::get<std::uint32_t>(in);
    product.sigma_rule = rule_from_byte(binary::get<std::uint8_t>(in));
    product.transforms.reserve(g);
    for (std::uint32_t k = 0; k < g; ++k) {
        ExtendedGivens t;
        const auto i = binary::get<std::uint32_t>(in);
        const auto j = binary::get<std::uint32_t>(in);
        if (i == 0 || j == 0) throw IoError("EGT1: indices are 1-based");
        t.i = i - 1;
        t.j = j - 1;
        t.c = binary::get<double>(in);
        t.s = binary::get<double>(in);
        t.kind = kind_from_byte(binary::get<std::uint8_t>(in));
        product.transforms.push_back(t);
    }
    product.weights.d = product.d;
    product.weights.values.resize(product.p);
    for (double& v : product.weights.values) v = binary::get<double>(in);
    try {
        validate(product);
    } catch (const Error& e) {
        throw IoError(std::string("EGT1: invalid content: ") + e.what());
    }
    return product;
}

void save_egt(const std::filesystem::path& path, const GivensProduct& product) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    write_egt(out, product);
    if (!out) throw IoError("write failed for " + path.string());
}

GivensProduct load_egt(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_egt(in);
}

nlohmann::ordered_json to_json(const GivensProduct& product) {
    nlohmann::ordered_json transforms = nlohmann::ordered_json::array();
    for (const auto& t : product.transforms) {
        transforms.push_back({{"i", t.i + 1}, {"j", t.j + 1}, {"c", t.c}, {"s", t.s},
                              {"kind", static_cast<int>(t.kind)}});
    }
    return {{"magic", "EGT1"},
            {"version", kVersion},
            {"d", product.d},
            {"p", product.p},
            {"g", product.g()},
            {"sigma_rule", static_cast<int>(product.sigma_rule)},
            {"transforms", std::move(transforms)},
            {"weights", product.weights.values}};
}

GivensProduct product_from_json(const nlohmann::ordered_json& j) {
    try {
        if (j.at("magic").get<std::string>() != "EGT1" || j.at("version").get<std::uint32_t>() != kVersion)
            throw IoError("JSON product: wrong magic or version");
        GivensProduct product;
        product.d = j.at("d").get<std::size_t>();
        product.p = j.at("p").get<std::size_t>();
        product.sigma_rule = rule_from_byte(j.at("sigma_rule").get<std::uint8_t>());
        for (const auto& t : j.at("transforms")) {
            product.transforms.push_back(ExtendedGivens{t.at("i").get<std::size_t>() - 1,
                                                        t.at("j").get<std::size_t>() - 1, t.at("c").get<double>(),
                                                        t.at("s").get<double>(),
                                                        kind_from_byte(t.at("kind").get<std::uint8_t>())});
        }
        if (product.transforms.size() != j.at("g").get<std::size_t>()) throw IoError("JSON product: g mismatch");
        product.weights = DiagonalWeights{product.d, j.at("weights").get<std::vector<double>>()};
        validate(product);
        return product;
    } catch (const nlohmann::ordered_json::exception& e) {
        throw IoError(std::string("JSON product: ") + e.what());
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw IoError(std::string("JSON product: invalid content: ") + e.what());
    }
}

void write_build_log(std::ostream& out, const BuildLog& log) {
    for (const auto& r : log.sweeps) {
        out << nlohmann::ordered_json{{"sweep", r.sweep}, {"objective", r.objective}, {"elapsed_ms", r.elapsed_ms}}.dump()
            << '\n';
    }
}

nlohmann::ordered_json to_json(const FactorizerConfig& config) {
    return {{"g", config.g},
            {"sigma_rule", std::string(to_string(config.sigma_rule))},
            {"epsilon", config.epsilon},
            {"max_sweeps", config.max_sweeps},
            {"rotations_only", config.rotations_only},
            {"seed", config.seed},
            {"score_init", config.score_init == ScoreInit::Literal ? "literal" : "consistent"}};
}

} // namespace fastortho
