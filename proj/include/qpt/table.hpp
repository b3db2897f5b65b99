#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qpt::io {

enum class ColumnType { Real, Integer, Text };

const char* to_string(ColumnType type);

struct ColumnSpec {
    std::string name;
    ColumnType type;
    std::string unit;  // "1" for dimensionless

    bool operator==(const ColumnSpec&) const = default;
};

using Cell = std::variant<double, std::int64_t, std::string>;

/// Row-major table whose columns are typed and carry units, plus an ordered
/// key/value provenance block.
class ResultTable {
public:
    ResultTable() = default;
    explicit ResultTable(std::vector<ColumnSpec> columns);

    const std::vector<ColumnSpec>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& provenance() const { return provenance_; }

    /// Throws InputError if the row length or a cell type does not match.
    void add_row(std::vector<Cell> row);
    /// Appends (or overwrites) a provenance entry. Keys and values are single-line.
    void set_provenance(const std::string& key, std::string value);
    std::size_t column_index(const std::string& name) const;
    double real(std::size_t row, const std::string& column) const;

    bool operator==(const ResultTable&) const = default;

private:
    std::vector<ColumnSpec> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> provenance_;
};

/// %.17g: always parses back to the same double.
std::string format_real(double value);

/// CSV: '#'-prefixed provenance lines ("# key: value"), then "# units:" and
/// "# types:" lines, then the mandatory header row and the data rows.
std::string to_csv(const ResultTable& table);
ResultTable from_csv(const std::string& text);

std::string to_json(const ResultTable& table);
ResultTable from_json(const std::string& text);

/// Writes via a temporary sibling file renamed into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Chooses the format from the extension (.json, otherwise CSV).
void write_table(const std::filesystem::path& path, const ResultTable& table);
ResultTable read_table(const std::filesystem::path& path);

}  // namespace qpt::io
