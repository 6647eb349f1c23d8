#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hitpred::csv {

using Record = std::vector<std::string>;

// Streaming RFC-4180 reader: quoted fields, doubled quotes, embedded
// newlines, CRLF or LF line endings. A UTF-8 byte-order mark at the start of
// the stream is skipped.
class Reader {
public:
    explicit Reader(std::istream& in);

    // Next record, or nullopt at end of input. Blank physical lines are skipped.
    std::optional<Record> next();

    // 1-based physical line on which the most recently returned record began.
    std::size_t record_line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
    bool first_ = true;
};

std::string escape_field(std::string_view field);

void write_record(std::ostream& out, const std::vector<std::string>& fields);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

// Strict parse: the whole (whitespace-trimmed) cell must be a finite number.
std::optional<double> parse_double(std::string_view cell);
std::optional<long long> parse_integer(std::string_view cell);

std::string_view trim(std::string_view s);

}  // namespace hitpred::csv
