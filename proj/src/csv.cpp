#include "fishnet/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fishnet {

std::string format_number(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size())
{
    row_text(header);
}

CsvWriter& CsvWriter::row(const std::vector<double>& values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) {
        cells.push_back(format_number(v));
    }
    return row_text(cells);
}

CsvWriter& CsvWriter::row_text(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) {
        throw std::logic_error("CsvWriter: row width does not match header");
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) {
            text_ += ',';
        }
        text_ += cells[k];
    }
    text_ += '\n';
    return *this;
}

void CsvWriter::save(const std::string& path) const { write_text(path, text_); }

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

int CsvTable::column(const std::string& name) const
{
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) {
            return static_cast<int>(k);
        }
    }
    return -1;
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

double parse_cell(const std::string& s, int line)
{
    if (s == "nan") {
        return std::nan("");
    }
    if (s == "inf") {
        return INFINITY;
    }
    if (s == "-inf") {
        return -INFINITY;
    }
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) {
        throw std::runtime_error("csv line " + std::to_string(line) + ": '" + s +
                                 "' is not a number");
    }
    return v;
}

}  // namespace

CsvTable parse_csv(const std::string& text)
{
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto cells = split(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw std::runtime_error("csv line " + std::to_string(number) + ": expected " +
                                     std::to_string(t.header.size()) + " cells");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            row.push_back(parse_cell(c, number));
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty() || t.rows.empty()) {
        throw std::runtime_error("csv has no data rows");
    }
    return t;
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_csv(text.str());
    }
    catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace fishnet
