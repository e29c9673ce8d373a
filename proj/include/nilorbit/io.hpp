#pragma once

// Algebra file loading (JSON with exact rational entries), tabular text
// writers, and the run manifest.

#include "nilorbit/lie_core.hpp"

#include <filesystem>

namespace nilorbit {

// Schema: {"name": ..., "dim": n, "brackets": [{"i": 1, "j": 2, "coeffs":
// {"3": "1/2"}}], "gram": ["1","0",...]} with 1-based indices, rationals as
// strings, and only the i < j half stored.
AlgebraPtr load_algebra(const std::filesystem::path& file);
void save_algebra(const NilpotentAlgebra& algebra, const std::filesystem::path& file);

// Parses "a1,a2,..." with rational entries.
RatVec parse_covector(const std::string& text, int dim);

// UTF-8 tabular text: a single header row then fixed-format data rows.
class TableWriter {
  public:
    TableWriter(std::vector<std::string> columns);
    void add_row(const std::vector<std::string>& cells);
    void write(const std::filesystem::path& file) const;
    std::string str() const;

    static std::string num(double v);   // fixed %.12e, deterministic
    static std::string integer(long v);

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace nilorbit
