#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fastortho/matrix.hpp"

namespace fastortho {

enum class MatrixFormat { Csv, Dmat };

/// CSV: one matrix row per line, comma separated, no header.
DenseMatrix read_csv_matrix(std::istream& in);
void write_csv_matrix(std::ostream& out, const DenseMatrix& m);

/// "DMAT" magic, u32 LE rows, u32 LE cols, then rows*cols LE f64 in column-major order.
DenseMatrix read_dmat(std::istream& in);
void write_dmat(std::ostream& out, const DenseMatrix& m);

/// Picks the format from the file's magic bytes.
DenseMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format);
/// ".csv" -> Csv, anything else -> Dmat.
MatrixFormat format_for_path(const std::filesystem::path& path);

/// Shortest text that parses back to exactly `v`.
std::string format_double(double v);

} // namespace fastortho
