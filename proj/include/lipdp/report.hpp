#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace lipdp {

/// Shortest round-trip decimal representation ("%.17g"); keeps emitted
/// numbers reproducible from the emitted inputs.
std::string format_double(double v);

/// Indented key/value tree with LF line endings; output bytes depend only on
/// the written content.
class TreeWriter {
public:
    void open(const std::string& key);
    void close();
    void kv(const std::string& key, const std::string& value);
    void kv(const std::string& key, double value);
    void kv(const std::string& key, int value);
    void kv(const std::string& key, std::uint64_t value);
    void kv(const std::string& key, bool value);
    std::string str() const { return out_.str(); }

private:
    void indent();
    std::ostringstream out_;
    int depth_ = 0;
};

/// Comma-separated values: '.' decimal point, header row, LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    std::size_t columns_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace lipdp
