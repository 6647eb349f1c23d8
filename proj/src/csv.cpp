#include "hitpred/csv.hpp"

#include <charconv>
#include <cmath>

namespace hitpred::csv {

Reader::Reader(std::istream& in) : in_(in) {}

std::optional<Record> Reader::next() {
    if (first_) {
        first_ = false;
        if (in_.peek() == 0xEF) {
            char bom[3];
            in_.read(bom, 3);
            if (!(static_cast<unsigned char>(bom[1]) == 0xBB && static_cast<unsigned char>(bom[2]) == 0xBF)) {
                in_.seekg(0);
            }
        }
    }

    for (;;) {
        int c = in_.get();
        if (c == std::char_traits<char>::eof()) return std::nullopt;
        if (c == '\n') {
            ++line_;
            continue;
        }
        if (c == '\r') {
            if (in_.peek() == '\n') in_.get();
            ++line_;
            continue;
        }
        in_.unget();
        break;
    }

    record_line_ = line_;
    Record record;
    std::string field;
    bool quoted = false;
    bool field_started_quoted = false;

    for (;;) {
        int c = in_.get();
        if (c == std::char_traits<char>::eof()) {
            record.push_back(std::move(field));
            return record;
        }
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && field.empty() && !field_started_quoted) {
            quoted = true;
            field_started_quoted = true;
        } else if (ch == ',') {
            record.push_back(std::move(field));
            field.clear();
            field_started_quoted = false;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && in_.peek() == '\n') in_.get();
            ++line_;
            record.push_back(std::move(field));
            return record;
        } else {
            field.push_back(ch);
        }
    }
}

std::string escape_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_record(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape_field(fields[i]);
    }
    out << '\n';
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(std::string_view cell) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double v = 0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<long long> parse_integer(std::string_view cell) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    long long v = 0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec == std::errc{} && res.ptr == cell.data() + cell.size()) return v;
    // Accept integral values written as reals, e.g. "12.0".
    auto d = parse_double(cell);
    if (d && std::floor(*d) == *d && std::fabs(*d) < 9e15) return static_cast<long long>(*d);
    return std::nullopt;
}

}  // namespace hitpred::csv
