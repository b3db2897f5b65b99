#include "qpt/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include <json.hpp>

#include "qpt/errors.hpp"

namespace qpt::io {

const char* to_string(ColumnType type) {
    switch (type) {
        case ColumnType::Real: return "real";
        case ColumnType::Integer: return "integer";
        default: return "text";
    }
}

namespace {

ColumnType parse_type(const std::string& s) {
    if (s == "real") return ColumnType::Real;
    if (s == "integer") return ColumnType::Integer;
    if (s == "text") return ColumnType::Text;
    throw InputError("unknown column type '" + s + "'");
}

bool single_line(const std::string& s) { return s.find_first_of("\r\n") == std::string::npos; }

}  // namespace

ResultTable::ResultTable(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
    for (const auto& c : columns_) {
        if (c.name.empty() || c.name.find_first_of(",\"\r\n") != std::string::npos)
            throw InputError("invalid column name '" + c.name + "'");
        if (c.unit.empty() || c.unit.find_first_of(",\r\n") != std::string::npos)
            throw InputError("invalid unit for column '" + c.name + "'");
    }
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size())
        throw InputError("row has " + std::to_string(row.size()) + " cells, table has " +
                         std::to_string(columns_.size()) + " columns");
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].index() != std::size_t(columns_[i].type))
            throw InputError("cell type mismatch in column '" + columns_[i].name + "'");
        if (const auto* s = std::get_if<std::string>(&row[i]); s && !single_line(*s))
            throw InputError("text cell in column '" + columns_[i].name + "' spans lines");
    }
    rows_.push_back(std::move(row));
}

void ResultTable::set_provenance(const std::string& key, std::string value) {
    if (key.empty() || !single_line(key) || key.find(':') != std::string::npos || key == "units" || key == "types")
        throw InputError("invalid provenance key '" + key + "'");
    if (!single_line(value)) throw InputError("provenance value for '" + key + "' spans lines");
    for (auto& [k, v] : provenance_)
        if (k == key) {
            v = std::move(value);
            return;
        }
    provenance_.emplace_back(key, std::move(value));
}

std::size_t ResultTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name) return i;
    throw InputError("no column named '" + name + "'");
}

double ResultTable::real(std::size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return double(*i);
    throw InputError("column '" + column + "' is not numeric");
}

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

double parse_real(const std::string& s) {
    if (s == "nan") return NAN;
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InputError("malformed number '" + s + "'");
    return v;
}

std::int64_t parse_integer(const std::string& s) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InputError("malformed integer '" + s + "'");
    return v;
}

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos && !s.empty() && s.front() != '#' && s.front() != ' ')
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_real(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return quote(std::get<std::string>(c));
}

std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw InputError("line " + std::to_string(line_no) + ": unterminated quote");
    out.push_back(std::move(cur));
    return out;
}

}  // namespace

std::string to_csv(const ResultTable& table) {
    std::string out;
    for (const auto& [k, v] : table.provenance()) out += "# " + k + ": " + v + "\n";
    std::string units = "# units: ", types = "# types: ", header;
    for (std::size_t i = 0; i < table.columns().size(); ++i) {
        const auto& c = table.columns()[i];
        const char* sep = i ? "," : "";
        units += sep + c.unit;
        types += sep + std::string(to_string(c.type));
        header += sep + c.name;
    }
    out += units + "\n" + types + "\n" + header + "\n";
    for (const auto& row : table.rows()) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell_text(row[i]);
        }
        out += '\n';
    }
    return out;
}

ResultTable from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<std::string, std::string>> prov;
    std::vector<std::string> units, types;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind("# ", 0) == 0) {
            const auto colon = line.find(": ", 2);
            if (colon == std::string::npos)
                throw InputError("line " + std::to_string(line_no) + ": malformed provenance line");
            std::string key = line.substr(2, colon - 2), value = line.substr(colon + 2);
            if (key == "units") units = split_csv(value, line_no);
            else if (key == "types") types = split_csv(value, line_no);
            else prov.emplace_back(std::move(key), std::move(value));
            continue;
        }
        header = split_csv(line, line_no);
        break;
    }
    if (header.empty()) throw InputError("CSV has no header row");
    if (units.size() != header.size() || types.size() != header.size())
        throw InputError("CSV units/types lines do not match the header");

    std::vector<ColumnSpec> cols;
    for (std::size_t i = 0; i < header.size(); ++i) cols.push_back({header[i], parse_type(types[i]), units[i]});
    ResultTable table(std::move(cols));
    for (const auto& [k, v] : prov) table.set_provenance(k, v);
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_csv(line, line_no);
        if (fields.size() != header.size())
            throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " fields, found " + std::to_string(fields.size()));
        std::vector<Cell> row;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            switch (table.columns()[i].type) {
                case ColumnType::Real: row.emplace_back(parse_real(fields[i])); break;
                case ColumnType::Integer: row.emplace_back(parse_integer(fields[i])); break;
                case ColumnType::Text: row.emplace_back(fields[i]); break;
            }
        }
        table.add_row(std::move(row));
    }
    return table;
}

std::string to_json(const ResultTable& table) {
    nlohmann::ordered_json doc;
    doc["provenance"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.provenance()) doc["provenance"][k] = v;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : table.columns())
        doc["columns"].push_back({{"name", c.name}, {"type", to_string(c.type)}, {"unit", c.unit}});
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows()) {
        auto r = nlohmann::ordered_json::array();
        for (const Cell& c : row) {
            if (const auto* d = std::get_if<double>(&c)) {
                // Non-finite reals have no JSON literal; they travel as strings.
                if (std::isfinite(*d)) r.push_back(*d);
                else r.push_back(format_real(*d));
            } else if (const auto* i = std::get_if<std::int64_t>(&c)) {
                r.push_back(*i);
            } else {
                r.push_back(std::get<std::string>(c));
            }
        }
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(1) + "\n";
}

ResultTable from_json(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
        std::vector<ColumnSpec> cols;
        for (const auto& c : doc.at("columns"))
            cols.push_back({c.at("name").get<std::string>(), parse_type(c.at("type").get<std::string>()),
                            c.at("unit").get<std::string>()});
        ResultTable table(std::move(cols));
        for (const auto& [k, v] : doc.at("provenance").items()) table.set_provenance(k, v.get<std::string>());
        for (const auto& r : doc.at("rows")) {
            std::vector<Cell> row;
            for (std::size_t i = 0; i < r.size() && i < table.columns().size(); ++i) {
                switch (table.columns()[i].type) {
                    case ColumnType::Real:
                        row.emplace_back(r[i].is_string() ? parse_real(r[i].get<std::string>()) : r[i].get<double>());
                        break;
                    case ColumnType::Integer: row.emplace_back(r[i].get<std::int64_t>()); break;
                    case ColumnType::Text: row.emplace_back(r[i].get<std::string>()); break;
                }
            }
            if (r.size() != table.columns().size()) throw InputError("JSON row length differs from column count");
            table.add_row(std::move(row));
        }
        return table;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed result JSON: ") + e.what());
    }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), std::streamsize(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw InputError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InputError("cannot move output into place at " + path.string());
    }
}

namespace {
bool is_json(const std::filesystem::path& p) { return p.extension() == ".json"; }
}  // namespace

void write_table(const std::filesystem::path& path, const ResultTable& table) {
    write_atomic(path, is_json(path) ? to_json(table) : to_csv(table));
}

ResultTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return is_json(path) ? from_json(buf.str()) : from_csv(buf.str());
}

}  // namespace qpt::io
