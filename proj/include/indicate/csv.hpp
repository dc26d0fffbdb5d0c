#pragma once

// Minimal comma-delimited table I/O. All files this project exchanges are
// plain headers + unquoted fields; empty fields denote absent optionals.

#include <optional>
#include <string>
#include <vector>

namespace indicate::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a required column; throws ValidationError naming the column.
    std::size_t column(const std::string& name, const std::string& file) const;
    // Indices of all columns whose name starts with `prefix`, in file order.
    std::vector<std::size_t> columns_with_prefix(const std::string& prefix) const;
};

Table read_file(const std::string& path);

class Writer {
public:
    explicit Writer(const std::string& path);
    ~Writer();
    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    void write_row(const std::vector<std::string>& fields);
    void close();

private:
    struct Impl;
    Impl* impl_;
};

std::string format_double(double v);
std::string format_int(int v);
std::string format_optional_int(const std::optional<int>& v);

double parse_double(const std::string& field, const std::string& context);
int parse_int(const std::string& field, const std::string& context);
std::optional<int> parse_optional_int(const std::string& field, const std::string& context);

}  // namespace indicate::csv
