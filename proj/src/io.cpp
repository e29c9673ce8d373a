#include "nilorbit/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nilorbit {

using nlohmann::json;

AlgebraPtr load_algebra(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open algebra file " + file.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("algebra file " + file.string() + ": " + e.what());
    }
    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
        throw ParseError("algebra file " + file.string() + ": missing integer field dim");
    int dim = doc["dim"].get<int>();
    if (dim <= 0 || dim > 8)
        throw ParseError("algebra file " + file.string() + ": dim out of range 1..8");

    std::vector<BracketEntry> entries;
    for (const auto& b : doc.value("brackets", json::array())) {
        if (!b.contains("i") || !b.contains("j") || !b.contains("coeffs"))
            throw ParseError("algebra file " + file.string() +
                             ": bracket entry needs i, j, coeffs");
        int i = b["i"].get<int>(), j = b["j"].get<int>();
        if (i < 1 || j < 1 || i > dim || j > dim || i >= j)
            throw ParseError("algebra file " + file.string() + ": bracket (" +
                             std::to_string(i) + "," + std::to_string(j) +
                             ") must satisfy 1 <= i < j <= dim");
        for (const auto& [key, val] : b["coeffs"].items()) {
            int k = std::stoi(key);
            if (k < 1 || k > dim)
                throw ParseError("algebra file " + file.string() +
                                 ": coefficient index " + key + " out of range");
            Rat c = parse_rational(val.get<std::string>(),
                                   "brackets[" + std::to_string(i) + "," +
                                       std::to_string(j) + "][" + key + "] of " +
                                       file.string());
            entries.push_back({i - 1, j - 1, k - 1, c});
        }
    }

    RatMat gram;
    if (doc.contains("gram")) {
        const auto& rows = doc["gram"];
        if ((int)rows.size() != dim * dim)
            throw ParseError("algebra file " + file.string() +
                             ": gram must have dim*dim row-major entries");
        gram.assign((size_t)dim, RatVec((size_t)dim, Rat(0)));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                gram[(size_t)i][(size_t)j] =
                    parse_rational(rows[(size_t)(i * dim + j)].get<std::string>(),
                                   "gram[" + std::to_string(i + 1) + "][" +
                                       std::to_string(j + 1) + "] of " + file.string());
    }
    std::string name = doc.value("name", file.stem().string());
    return NilpotentAlgebra::create(dim, entries, gram, name);
}

void save_algebra(const NilpotentAlgebra& algebra, const std::filesystem::path& file) {
    json doc;
    doc["name"] = algebra.name();
    doc["dim"] = algebra.dim();
    json brackets = json::array();
    std::map<std::pair<int, int>, json> grouped;
    for (const auto& e : algebra.nonzero_brackets())
        grouped[{e.i, e.j}][std::to_string(e.k + 1)] = rat_str(e.c);
    for (auto& [ij, coeffs] : grouped) {
        json b;
        b["i"] = ij.first + 1;
        b["j"] = ij.second + 1;
        b["coeffs"] = coeffs;
        brackets.push_back(b);
    }
    doc["brackets"] = brackets;
    json gram = json::array();
    for (const auto& row : algebra.gram())
        for (const auto& x : row) gram.push_back(rat_str(x));
    doc["gram"] = gram;
    std::ofstream out(file);
    out << doc.dump(2) << "\n";
}

RatVec parse_covector(const std::string& text, int dim) {
    RatVec out;
    std::stringstream ss(text);
    std::string item;
    int index = 0;
    while (std::getline(ss, item, ',')) {
        ++index;
        out.push_back(parse_rational(item, "covector entry " + std::to_string(index)));
    }
    if ((int)out.size() != dim)
        throw ParseError("covector \"" + text + "\" has " +
                         std::to_string(out.size()) + " entries; expected " +
                         std::to_string(dim));
    return out;
}

TableWriter::TableWriter(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void TableWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw StructuralError("table row width mismatch");
    rows_.push_back(cells);
}

std::string TableWriter::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < columns_.size(); ++i)
        os << (i ? "\t" : "") << columns_[i];
    os << "\n";
    for (const auto& row : rows_) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "\t" : "") << row[i];
        os << "\n";
    }
    return os.str();
}

void TableWriter::write(const std::filesystem::path& file) const {
    std::ofstream out(file);
    out << str();
}

std::string TableWriter::num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

std::string TableWriter::integer(long v) { return std::to_string(v); }

}  // namespace nilorbit
