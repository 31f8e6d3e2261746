#include "fastortho/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "fastortho/binary.hpp"
#include "fastortho/error.hpp"

namespace fastortho {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_field(const std::string& field, std::size_t lineno) {
    const auto b = field.find_first_not_of(" \t");
    const auto e = field.find_last_not_of(" \t");
    if (b == std::string::npos) throw IoError("csv line " + std::to_string(lineno) + ": empty field");
    double v = 0.0;
    const char* first = field.data() + b;
    const char* last = field.data() + e + 1;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw IoError("csv line " + std::to_string(lineno) + ": bad number '" + std::string(first, last) + "'");
    }
    return v;
}

} // namespace

DenseMatrix read_csv_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) row.push_back(parse_field(field, lineno));
        if (line.back() == ',') throw IoError("csv line " + std::to_string(lineno) + ": empty field");
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError("csv line " + std::to_string(lineno) + ": expected " +
                          std::to_string(rows.front().size()) + " fields");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("csv: no data rows");
    DenseMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

void write_csv_matrix(std::ostream& out, const DenseMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

DenseMatrix read_dmat(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::string(magic, 4) != "DMAT") throw IoError("not a DMAT stream");
    const auto rows = binary::get<std::uint32_t>(in);
    const auto cols = binary::get<std::uint32_t>(in);
    std::vector<double> data(static_cast<std::size_t>(rows) * cols);
    for (double& v : data) v = binary::get<double>(in);
    return DenseMatrix(rows, cols, std::move(data));
}

void write_dmat(std::ostream& out, const DenseMatrix& m) {
    if (m.rows() > std::numeric_limits<std::uint32_t>::max() ||
        m.cols() > std::numeric_limits<std::uint32_t>::max()) {
        throw IoError("matrix too large for DMAT");
    }
    out.write("DMAT", 4);
    binary::put(out, static_cast<std::uint32_t>(m.rows()));
    binary::put(out, static_cast<std::uint32_t>(m.cols()));
    for (double v : m.data()) binary::put(out, v);
}

MatrixFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? MatrixFormat::Csv : MatrixFormat::Dmat;
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    in.clear();
    in.seekg(0);
    if (std::string(magic, 4) == "DMAT") return read_dmat(in);
    return read_csv_matrix(in);
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    if (format == MatrixFormat::Csv)
        write_csv_matrix(out, m);
    else
        write_dmat(out, m);
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace fastortho
