#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "fastortho/product.hpp"

namespace fastortho {

/// EGT1, little-endian:
///   "EGT1" | u32 version=1 | u32 d | u32 p | u32 g | u8 sigma_rule
///   g x (u32 i, u32 j, f64 c, f64 s, u8 kind)   -- indices 1-based
///   p x f64 diagonal weights
void write_egt(std::ostream& out, const GivensProduct& product);
GivensProduct read_egt(std::istream& in);

void save_egt(const std::filesystem::path& path, const GivensProduct& product);
GivensProduct load_egt(const std::filesystem::path& path);

/// JSON mirror of the EGT1 layout with the same field names.
nlohmann::ordered_json to_json(const GivensProduct& product);
GivensProduct product_from_json(const nlohmann::ordered_json& j);

/// Build log as JSON lines: {"sweep": n, "objective": x, "elapsed_ms": t}.
void write_build_log(std::ostream& out, const BuildLog& log);

nlohmann::ordered_json to_json(const FactorizerConfig& config);

} // namespace fastortho
