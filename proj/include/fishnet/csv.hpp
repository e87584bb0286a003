#pragma once

// Plain comma-separated tables with a header row.

#include <string>
#include <vector>

namespace fishnet {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);

    CsvWriter& row(const std::vector<double>& values);
    /// Cells already formatted by the caller.
    CsvWriter& row_text(const std::vector<std::string>& cells);

    const std::string& text() const { return text_; }
    void save(const std::string& path) const;

  private:
    std::size_t columns_;
    std::string text_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Column index by name, or -1.
    int column(const std::string& name) const;
};

/// Numeric table; throws std::runtime_error on ragged or non-numeric rows and
/// on a file with no data rows.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

void write_text(const std::string& path, const std::string& text);

}  // namespace fishnet
