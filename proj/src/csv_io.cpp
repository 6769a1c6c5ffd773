#include "snlab/csv_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "snlab/errors.hpp"

namespace snlab {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvFile::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw Error("CsvFile: row width does not match header");
    rows_.push_back(std::move(cells));
}

std::string CsvFile::serialize() const {
    std::ostringstream o;
    for (std::size_t i = 0; i < header_.size(); ++i) o << (i ? "," : "") << header_[i];
    o << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << row[i];
        o << "\n";
    }
    return o.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, p);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace snlab
