#pragma once

#include <string>
#include <vector>

// CSV emission: '.' decimal separator, 17 significant digits, LF endings,
// mandatory header. Files are written atomically (temp file + rename).

namespace snlab {

/// Shortest 17-significant-digit decimal form; round-trips to the same double.
std::string format_g17(double v);

class CsvFile {
public:
    explicit CsvFile(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells);
    std::string serialize() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace snlab
