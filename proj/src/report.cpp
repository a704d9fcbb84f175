#include "lipdp/report.hpp"

#include <cstdio>
#include <fstream>

#include "lipdp/errors.hpp"

namespace lipdp {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void TreeWriter::indent() {
    for (int i = 0; i < depth_; ++i) out_ << "  ";
}

void TreeWriter::open(const std::string& key) {
    indent();
    out_ << key << "\n";
    ++depth_;
}

void TreeWriter::close() { --depth_; }

void TreeWriter::kv(const std::string& key, const std::string& value) {
    indent();
    out_ << key << " = " << value << "\n";
}

void TreeWriter::kv(const std::string& key, double value) { kv(key, format_double(value)); }
void TreeWriter::kv(const std::string& key, int value) { kv(key, std::to_string(value)); }
void TreeWriter::kv(const std::string& key, std::uint64_t value) { kv(key, std::to_string(value)); }
void TreeWriter::kv(const std::string& key, bool value) { kv(key, std::string(value ? "true" : "false")); }

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_)
        throw InvalidInput("CsvWriter: row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_double(values[i]);
    }
    out_ << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open output file: " + path);
    f << content;
    if (!f) throw Error("failed writing output file: " + path);
}

}  // namespace lipdp
