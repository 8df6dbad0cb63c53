#include "cli/records.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace decaywalk::cli {

namespace {

using Json = nlohmann::ordered_json;

template <class T>
std::string optional_text(const std::optional<T>& value)
{
    if (!value)
        return {};
    if constexpr (std::is_floating_point_v<T>)
        return format_number(*value);
    else
        return std::to_string(*value);
}

double parse_double(std::string_view text)
{
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    if (text == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (text == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

template <class T>
T parse_integer(std::string_view text)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    return value;
}

template <class T>
std::optional<T> parse_optional(std::string_view text)
{
    if (text.empty())
        return std::nullopt;
    if constexpr (std::is_floating_point_v<T>)
        return parse_double(text);
    else
        return parse_integer<T>(text);
}

template <class T>
Json json_optional(const std::optional<T>& value)
{
    return value ? Json(*value) : Json(nullptr);
}

Json json_number(double value)
{
    return std::isfinite(value) ? Json(value) : Json(nullptr);
}

template <class T>
std::optional<T> from_json_optional(const Json& node)
{
    if (node.is_null())
        return std::nullopt;
    return node.get<T>();
}

}  // namespace

std::string_view to_string(Source source)
{
    switch (source) {
    case Source::analytic:
        return "analytic";
    case Source::monte_carlo:
        return "monte_carlo";
    case Source::pass:
        return "pass";
    case Source::fail:
        return "fail";
    }
    return "analytic";
}

Source source_from_string(std::string_view text)
{
    for (Source s : {Source::analytic, Source::monte_carlo, Source::pass, Source::fail})
        if (to_string(s) == text)
            return s;
    throw std::invalid_argument("unknown source '" + std::string(text) + "'");
}

const std::vector<std::string>& columns()
{
    static const std::vector<std::string> names{"quantity", "r",     "N",           "k",     "q",
                                                "n",        "seed",  "value",       "error_bound", "source"};
    return names;
}

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

std::string to_csv_row(const OutputRecord& rec)
{
    std::string row = rec.quantity;
    for (const std::string& field : {optional_text(rec.r), optional_text(rec.N), optional_text(rec.k),
                                     optional_text(rec.q), optional_text(rec.n), optional_text(rec.seed),
                                     format_number(rec.value), format_number(rec.error_bound)}) {
        row += ',';
        row += field;
    }
    row += ',';
    row += to_string(rec.source);
    return row;
}

std::string to_json_row(const OutputRecord& rec)
{
    Json row;
    row["quantity"] = rec.quantity;
    row["r"] = json_optional(rec.r);
    row["N"] = json_optional(rec.N);
    row["k"] = json_optional(rec.k);
    row["q"] = json_optional(rec.q);
    row["n"] = json_optional(rec.n);
    row["seed"] = json_optional(rec.seed);
    if (rec.plateau)
        row["value"] = Json{{"divergent", true}, {"plateau", *rec.plateau}};
    else
        row["value"] = json_number(rec.value);
    row["error_bound"] = json_number(rec.error_bound);
    row["source"] = std::string(to_string(rec.source));
    return row.dump();
}

OutputRecord parse_csv_row(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    if (fields.size() != columns().size())
        throw std::invalid_argument("expected " + std::to_string(columns().size()) + " CSV fields, got "
                                    + std::to_string(fields.size()));
    OutputRecord rec;
    rec.quantity = std::string(fields[0]);
    rec.r = parse_optional<double>(fields[1]);
    rec.N = parse_optional<int>(fields[2]);
    rec.k = parse_optional<std::int64_t>(fields[3]);
    rec.q = parse_optional<double>(fields[4]);
    rec.n = parse_optional<std::int64_t>(fields[5]);
    rec.seed = parse_optional<std::uint64_t>(fields[6]);
    rec.value = parse_double(fields[7]);
    rec.error_bound = parse_double(fields[8]);
    rec.source = source_from_string(fields[9]);
    return rec;
}

OutputRecord parse_json_row(std::string_view line)
{
    try {
        const Json row = Json::parse(line);
        OutputRecord rec;
        rec.quantity = row.at("quantity").get<std::string>();
        rec.r = from_json_optional<double>(row.at("r"));
        rec.N = from_json_optional<int>(row.at("N"));
        rec.k = from_json_optional<std::int64_t>(row.at("k"));
        rec.q = from_json_optional<double>(row.at("q"));
        rec.n = from_json_optional<std::int64_t>(row.at("n"));
        rec.seed = from_json_optional<std::uint64_t>(row.at("seed"));
        const Json& value = row.at("value");
        if (value.is_object()) {
            rec.value = std::numeric_limits<double>::infinity();
            rec.plateau = value.at("plateau").get<double>();
        } else {
            rec.value = value.is_null() ? std::numeric_limits<double>::quiet_NaN() : value.get<double>();
        }
        const Json& bound = row.at("error_bound");
        rec.error_bound = bound.is_null() ? std::numeric_limits<double>::infinity() : bound.get<double>();
        rec.source = source_from_string(row.at("source").get<std::string>());
        return rec;
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("malformed JSON record: ") + e.what());
    }
}

void RecordWriter::write(const OutputRecord& record)
{
    if (format_ == Format::csv) {
        if (!header_written_) {
            for (std::size_t i = 0; i < columns().size(); ++i)
                out_ << (i ? "," : "") << columns()[i];
            out_ << '\n';
            header_written_ = true;
        }
        out_ << to_csv_row(record) << '\n';
    } else {
        out_ << to_json_row(record) << '\n';
    }
}

}  // namespace decaywalk::cli
