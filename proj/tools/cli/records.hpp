#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace decaywalk::cli {

/// `pass` / `fail` mark the verdict rows written by `compare`.
enum class Source
{
    analytic,
    monte_carlo,
    pass,
    fail,
};

std::string_view to_string(Source source);
Source source_from_string(std::string_view text);

/// One self-describing output row. Absent parameters are empty in CSV and
/// null in JSON.
struct OutputRecord
{
    std::string quantity;
    std::optional<double> r;
    std::optional<int> N;
    std::optional<std::int64_t> k;
    std::optional<double> q;
    std::optional<std::int64_t> n;
    std::optional<std::uint64_t> seed;
    double value = 0.0;
    double error_bound = 0.0;
    Source source = Source::analytic;
    /// Set for a divergent sum: value is +inf and this is the level the terms settled at.
    std::optional<double> plateau;

    friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

enum class Format
{
    csv,
    json,
};

/// Column order of the CSV output, also the key order of each JSON object:
/// quantity,r,N,k,q,n,seed,value,error_bound,source
const std::vector<std::string>& columns();

/// Streams records as CSV (header first) or JSON lines.
class RecordWriter
{
public:
    RecordWriter(std::ostream& out, Format format) : out_{out}, format_{format} {}

    void write(const OutputRecord& record);

private:
    std::ostream& out_;
    Format format_;
    bool header_written_ = false;
};

std::string to_csv_row(const OutputRecord& record);
std::string to_json_row(const OutputRecord& record);

/// Inverse of to_csv_row / to_json_row. Throws std::invalid_argument on malformed input.
OutputRecord parse_csv_row(std::string_view line);
OutputRecord parse_json_row(std::string_view line);

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double value);

}  // namespace decaywalk::cli
