#include "indicate/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "indicate/errors.hpp"

namespace indicate::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    out.push_back(field);
    return out;
}

}  // namespace

std::size_t Table::column(const std::string& name, const std::string& file) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ValidationError("missing column '" + name + "' in " + file);
}

std::vector<std::size_t> Table::columns_with_prefix(const std::string& prefix) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i].rfind(prefix, 0) == 0) out.push_back(i);
    }
    return out;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    Table table;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty file: " + path);
    table.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (fields.size() != table.header.size()) {
            throw ValidationError("row with " + std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(table.header.size()) + " in " + path);
        }
        table.rows.push_back(std::move(fields));
    }
    return table;
}

struct Writer::Impl {
    std::ofstream out;
};

Writer::Writer(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) {
        delete impl_;
        throw ValidationError("cannot open file for writing: " + path);
    }
}

Writer::~Writer() {
    delete impl_;
}

void Writer::write_row(const std::vector<std::string>& fields) {
    auto& out = impl_->out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << fields[i];
    }
    out << '\n';
}

void Writer::close() {
    impl_->out.close();
}

std::string format_double(double v) {
    char buf[40];
    // round-trippable and stable across runs
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_int(int v) {
    return std::to_string(v);
}

std::string format_optional_int(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
}

double parse_double(const std::string& field, const std::string& context) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ValidationError("malformed real value '" + field + "' (" + context + ")");
    }
    return value;
}

int parse_int(const std::string& field, const std::string& context) {
    int value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ValidationError("malformed integer value '" + field + "' (" + context + ")");
    }
    return value;
}

std::optional<int> parse_optional_int(const std::string& field, const std::string& context) {
    if (field.empty()) return std::nullopt;
    return parse_int(field, context);
}

}  // namespace indicate::csv
