#include "fcarepo/formats.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include <json.hpp>

namespace fcarepo {

std::string_view to_string(ContextFormat format) {
    switch (format) {
    case ContextFormat::burmeister: return "burmeister";
    case ContextFormat::csv: return "csv";
    case ContextFormat::json: return "json";
    }
    return "?";
}

std::optional<ContextFormat> format_from_name(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "burmeister" || lower == "cxt") return ContextFormat::burmeister;
    if (lower == "csv") return ContextFormat::csv;
    if (lower == "json") return ContextFormat::json;
    return std::nullopt;
}

std::optional<ContextFormat> format_from_extension(std::string_view path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string_view::npos) return std::nullopt;
    auto slash = path.find_last_of("/\\");
    if (slash != std::string_view::npos && dot < slash) return std::nullopt;
    return format_from_name(path.substr(dot + 1));
}

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";

std::optional<std::size_t> utf8_invalid_offset(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) {
            ++i;
            continue;
        }
        int len;
        unsigned cp_min;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp_min = 0x80;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp_min = 0x800;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp_min = 0x10000;
        } else {
            return i;
        }
        if (i + static_cast<std::size_t>(len) > s.size()) return i;
        unsigned cp = c & (0x7Fu >> len);
        for (int k = 1; k < len; ++k) {
            const unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (cc & 0x3Fu);
        }
        if (cp < cp_min || (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) return i;
        i += len;
    }
    return std::nullopt;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    return 1 + static_cast<std::size_t>(
                   std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

[[noreturn]] void fail(const std::string& source, std::vector<ParseDiagnostic> collected,
                       std::size_t line, std::string message) {
    collected.push_back({Severity::error, line, std::move(message)});
    throw ParseError(source, std::move(collected));
}

void emit(std::vector<ParseDiagnostic>* sink, const std::vector<ParseDiagnostic>& collected) {
    if (sink) sink->insert(sink->end(), collected.begin(), collected.end());
}

std::string strip_trailing_ws(std::string_view s) {
    auto end = s.find_last_not_of(" \t\r\f\v");
    if (end == std::string_view::npos) return std::string();
    return std::string(s.substr(0, end + 1));
}

// ---------------------------------------------------------------------------
// Burmeister
// ---------------------------------------------------------------------------

struct SplitLines {
    std::vector<std::string> lines; // CR-stripped
    std::size_t first_crlf = 0;     // 1-based line number of first CRLF ending, 0 = none
};

SplitLines split_lines(std::string_view input) {
    SplitLines out;
    std::size_t start = 0;
    while (start < input.size()) {
        auto nl = input.find('\n', start);
        std::string_view line = (nl == std::string_view::npos)
                                    ? input.substr(start)
                                    : input.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r' && nl != std::string_view::npos) {
            line.remove_suffix(1);
            if (out.first_crlf == 0) out.first_crlf = out.lines.size() + 1;
        }
        out.lines.emplace_back(line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

std::optional<std::size_t> parse_count(const std::string& line) {
    if (line.empty()) return std::nullopt;
    if (!std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
        return std::nullopt;
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc() || ptr != line.data() + line.size()) return std::nullopt;
    return value;
}

// One candidate interpretation of the header: with/without the name line and
// with/without the blank separator that the reference grammar places after the
// two count lines.
struct HeaderShape {
    bool has_name = true;
    bool has_blank = true;
    std::size_t objects = 0;
    std::size_t attributes = 0;
    std::size_t header_lines = 0; // "B" + optional name + 2 counts + optional blank

    enum class Failure { none, too_short, bad_count, blank_missing, line_total } failure =
        Failure::none;
    std::size_t failure_line = 1; // 1-based
    std::string failure_message;

    // Rank of how far the interpretation got; used to choose which failure to report.
    int progress() const {
        switch (failure) {
        case Failure::none: return 4;
        case Failure::line_total: return 3;
        case Failure::blank_missing: return 2;
        case Failure::bad_count: return 1;
        case Failure::too_short: return 0;
        }
        return 0;
    }
};

HeaderShape try_shape(const std::vector<std::string>& lines, bool has_name, bool has_blank) {
    HeaderShape shape;
    shape.has_name = has_name;
    shape.has_blank = has_blank;
    const std::size_t g_pos = has_name ? 2 : 1; // 0-based
    const std::size_t m_pos = g_pos + 1;
    shape.header_lines = m_pos + 1 + (has_blank ? 1 : 0);
    if (lines.size() < shape.header_lines) {
        shape.failure = HeaderShape::Failure::too_short;
        shape.failure_line = lines.size();
        shape.failure_message = "file ends before the header is complete";
        return shape;
    }
    auto g = parse_count(lines[g_pos]);
    if (!g) {
        shape.failure = HeaderShape::Failure::bad_count;
        shape.failure_line = g_pos + 1;
        shape.failure_message =
            "object count \"" + lines[g_pos] + "\" is not a non-negative integer";
        return shape;
    }
    auto m = parse_count(lines[m_pos]);
    if (!m) {
        shape.failure = HeaderShape::Failure::bad_count;
        shape.failure_line = m_pos + 1;
        shape.failure_message =
            "attribute count \"" + lines[m_pos] + "\" is not a non-negative integer";
        return shape;
    }
    shape.objects = *g;
    shape.attributes = *m;
    if (has_blank && !lines[m_pos + 1].empty()) {
        shape.failure = HeaderShape::Failure::blank_missing;
        shape.failure_line = m_pos + 2;
        shape.failure_message = "expected a blank separator line after the counts";
        return shape;
    }
    const std::size_t expected = shape.header_lines + 2 * shape.objects + shape.attributes;
    if (lines.size() < expected) {
        shape.failure = HeaderShape::Failure::line_total;
        shape.failure_line = lines.size();
        shape.failure_message = "file has " + std::to_string(lines.size()) +
                                " lines but a " + std::to_string(shape.objects) + "x" +
                                std::to_string(shape.attributes) + " context needs " +
                                std::to_string(expected);
        return shape;
    }
    // Extra material beyond the expected count is tolerated only if blank.
    for (std::size_t i = expected; i < lines.size(); ++i) {
        if (!lines[i].empty()) {
            shape.failure = HeaderShape::Failure::line_total;
            shape.failure_line = i + 1;
            shape.failure_message = "unexpected content after the incidence rows";
            return shape;
        }
    }
    return shape;
}

} // namespace

bool utf8_valid(std::string_view bytes) { return !utf8_invalid_offset(bytes).has_value(); }

std::string decode_text(std::string_view bytes, const std::string& source_name) {
    if (bytes.substr(0, kBom.size()) == kBom) bytes.remove_prefix(kBom.size());
    if (auto bad = utf8_invalid_offset(bytes)) {
        throw ParseError(source_name,
                         {{Severity::error, line_of_offset(bytes, *bad),
                           "invalid UTF-8 byte sequence at offset " + std::to_string(*bad)}});
    }
    return std::string(bytes);
}

FormalContext parse_burmeister(std::string_view text, const std::string& source_name,
                               std::vector<ParseDiagnostic>* warnings) {
    std::vector<ParseDiagnostic> notes;
    SplitLines split = split_lines(text);
    const auto& lines = split.lines;

    if (lines.empty() || lines[0] != "B") {
        fail(source_name, std::move(notes), 1, "first line must be \"B\"");
    }
    if (split.first_crlf != 0) {
        notes.push_back({Severity::warning, split.first_crlf,
                         "CRLF line endings accepted; the reference form uses LF"});
    }

    // The strict grammar has both the name line and the blank separator.  Real
    // files drop one or the other, so try the four combinations from most to
    // least strict and keep the first that is internally consistent.
    const std::pair<bool, bool> order[] = {
        {true, true}, {true, false}, {false, true}, {false, false}};
    HeaderShape chosen;
    HeaderShape best_failure;
    int best_rank = -1;
    bool matched = false;
    for (auto [has_name, has_blank] : order) {
        HeaderShape shape = try_shape(lines, has_name, has_blank);
        if (shape.failure == HeaderShape::Failure::none) {
            chosen = shape;
            matched = true;
            break;
        }
        if (shape.progress() > best_rank) {
            best_rank = shape.progress();
            best_failure = shape;
        }
    }
    if (!matched) {
        fail(source_name, std::move(notes), best_failure.failure_line,
             best_failure.failure_message);
    }

    std::string name;
    if (chosen.has_name) {
        name = strip_trailing_ws(lines[1]);
    } else {
        notes.push_back({Severity::warning, 2, "name line missing; context is unnamed"});
    }
    if (!chosen.has_blank) {
        notes.push_back({Severity::warning, chosen.header_lines + 1,
                         "blank separator line after the counts is missing"});
    }

    const std::size_t g = chosen.objects;
    const std::size_t m = chosen.attributes;
    std::size_t pos = chosen.header_lines; // 0-based index of the first object name

    std::vector<std::string> objects;
    objects.reserve(g);
    std::map<std::string, std::size_t> seen_objects;
    for (std::size_t i = 0; i < g; ++i, ++pos) {
        std::string v = strip_trailing_ws(lines[pos]);
        if (v.empty()) {
            fail(source_name, std::move(notes), pos + 1, "empty object name");
        }
        auto [it, inserted] = seen_objects.emplace(v, pos + 1);
        if (!inserted) {
            fail(source_name, std::move(notes), pos + 1,
                 "duplicate object name \"" + v + "\" (first seen on line " +
                     std::to_string(it->second) + ")");
        }
        objects.push_back(std::move(v));
    }

    std::vector<std::string> attributes;
    attributes.reserve(m);
    std::map<std::string, std::size_t> seen_attributes;
    for (std::size_t i = 0; i < m; ++i, ++pos) {
        std::string v = strip_trailing_ws(lines[pos]);
        if (v.empty()) {
            fail(source_name, std::move(notes), pos + 1, "empty attribute name");
        }
        auto [it, inserted] = seen_attributes.emplace(v, pos + 1);
        if (!inserted) {
            fail(source_name, std::move(notes), pos + 1,
                 "duplicate attribute name \"" + v + "\" (first seen on line " +
                     std::to_string(it->second) + ")");
        }
        attributes.push_back(std::move(v));
    }

    std::vector<Bitset> rows;
    rows.reserve(g);
    bool warned_lowercase = false;
    for (std::size_t i = 0; i < g; ++i, ++pos) {
        const std::string& line = lines[pos];
        if (line.size() != m) {
            fail(source_name, std::move(notes), pos + 1,
                 "incidence row length mismatch: row has " + std::to_string(line.size()) +
                     " characters, expected " + std::to_string(m));
        }
        Bitset row(m);
        for (std::size_t j = 0; j < m; ++j) {
            const char c = line[j];
            if (c == 'X') {
                row.set(j);
            } else if (c == 'x') {
                row.set(j);
                if (!warned_lowercase) {
                    warned_lowercase = true;
                    notes.push_back({Severity::warning, pos + 1,
                                     "lowercase 'x' accepted as an incidence mark"});
                }
            } else if (c != '.') {
                fail(source_name, std::move(notes), pos + 1,
                     std::string("illegal incidence character '") + c + "' in column " +
                         std::to_string(j + 1));
            }
        }
        rows.push_back(std::move(row));
    }

    try {
        FormalContext ctx(std::move(name), std::move(objects), std::move(attributes),
                          std::move(rows));
        emit(warnings, notes);
        return ctx;
    } catch (const ContextError& e) {
        fail(source_name, std::move(notes), 1, e.what());
    }
}

std::string serialize_burmeister(const FormalContext& ctx) {
    std::string out;
    out.reserve(16 + ctx.name().size() + ctx.object_count() * (ctx.attribute_count() + 8) +
                ctx.attribute_count() * 8);
    out += "B\n";
    out += ctx.name();
    out += '\n';
    out += std::to_string(ctx.object_count());
    out += '\n';
    out += std::to_string(ctx.attribute_count());
    out += "\n\n";
    for (const auto& g : ctx.objects()) {
        out += g;
        out += '\n';
    }
    for (const auto& m : ctx.attributes()) {
        out += m;
        out += '\n';
    }
    for (std::size_t i = 0; i < ctx.object_count(); ++i) {
        const Bitset& row = ctx.object_row(i);
        for (std::size_t j = 0; j < ctx.attribute_count(); ++j) {
            out += row.test(j) ? 'X' : '.';
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180, LF or CRLF records)
// ---------------------------------------------------------------------------

namespace {

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 1; // 1-based physical line the record starts on
};

std::vector<CsvRecord> parse_csv_records(std::string_view text, const std::string& source_name) {
    std::vector<CsvRecord> records;
    std::vector<std::string> fields;
    std::string field;
    std::size_t line = 1;
    std::size_t record_line = 1;
    enum class State { field_start, unquoted, quoted, quote_seen } state = State::field_start;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back({std::move(fields), record_line});
        fields.clear();
        record_line = line;
        state = State::field_start;
    };

    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        const bool crlf = (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n');
        switch (state) {
        case State::field_start:
            if (c == '"') {
                state = State::quoted;
            } else if (c == ',') {
                end_field();
            } else if (c == '\n' || crlf) {
                if (crlf) ++i;
                ++line;
                end_record();
            } else {
                field += c;
                state = State::unquoted;
            }
            break;
        case State::unquoted:
            if (c == '"') {
                throw ParseError(source_name,
                                 {{Severity::error, line,
                                   "unexpected '\"' inside an unquoted cell (row " +
                                       std::to_string(records.size() + 1) + ", column " +
                                       std::to_string(fields.size() + 1) + ")"}});
            } else if (c == ',') {
                end_field();
                state = State::field_start;
            } else if (c == '\n' || crlf) {
                if (crlf) ++i;
                ++line;
                end_record();
            } else {
                field += c;
            }
            break;
        case State::quoted:
            if (c == '"') {
                state = State::quote_seen;
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            break;
        case State::quote_seen:
            if (c == '"') {
                field += '"';
                state = State::quoted;
            } else if (c == ',') {
                end_field();
                state = State::field_start;
            } else if (c == '\n' || crlf) {
                if (crlf) ++i;
                ++line;
                end_record();
            } else {
                throw ParseError(source_name,
                                 {{Severity::error, line,
                                   "unexpected character after a closing '\"' (row " +
                                       std::to_string(records.size() + 1) + ", column " +
                                       std::to_string(fields.size() + 1) + ")"}});
            }
            break;
        }
        ++i;
    }
    if (state == State::quoted) {
        throw ParseError(source_name, {{Severity::error, record_line,
                                        "unterminated quoted cell (row " +
                                            std::to_string(records.size() + 1) + ")"}});
    }
    if (!fields.empty() || !field.empty() || state != State::field_start) {
        end_record();
    }
    return records;
}

std::string csv_cell_ref(std::size_t row, std::size_t column) {
    return "(row " + std::to_string(row) + ", column " + std::to_string(column) + ")";
}

void check_csv_name(const std::string& name, std::size_t row, std::size_t column,
                    const std::string& kind, const std::string& source_name) {
    if (name.empty()) {
        throw ParseError(source_name, {{Severity::error, row, "empty " + kind + " name " +
                                                                   csv_cell_ref(row, column)}});
    }
    if (name.find('\n') != std::string::npos || name.find('\r') != std::string::npos) {
        throw ParseError(source_name,
                         {{Severity::error, row, kind + " name contains a line break " +
                                                     csv_cell_ref(row, column)}});
    }
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

FormalContext parse_csv(std::string_view text, const std::string& source_name,
                        std::vector<ParseDiagnostic>* warnings) {
    (void)warnings;
    std::vector<CsvRecord> records = parse_csv_records(text, source_name);
    if (records.empty()) {
        throw ParseError(source_name, {{Severity::error, 1, "empty CSV input"}});
    }

    const CsvRecord& header = records[0];
    std::string name = strip_trailing_ws(header.fields[0]);
    if (name.find('\n') != std::string::npos) {
        throw ParseError(source_name, {{Severity::error, header.line,
                                        "context name contains a line break (row 1, column 1)"}});
    }

    std::vector<std::string> attributes;
    std::map<std::string, std::size_t> seen_attributes;
    for (std::size_t j = 1; j < header.fields.size(); ++j) {
        std::string v = strip_trailing_ws(header.fields[j]);
        check_csv_name(v, 1, j + 1, "attribute", source_name);
        auto [it, inserted] = seen_attributes.emplace(v, j + 1);
        if (!inserted) {
            throw ParseError(source_name,
                             {{Severity::error, header.line,
                               "duplicate attribute name \"" + v + "\" " +
                                   csv_cell_ref(1, j + 1)}});
        }
        attributes.push_back(std::move(v));
    }

    std::vector<std::string> objects;
    std::map<std::string, std::size_t> seen_objects;
    std::vector<Bitset> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const CsvRecord& rec = records[r];
        const std::size_t row_no = r + 1;
        if (rec.fields.size() != header.fields.size()) {
            throw ParseError(source_name,
                             {{Severity::error, rec.line,
                               "row " + std::to_string(row_no) + " has " +
                                   std::to_string(rec.fields.size()) + " cells, expected " +
                                   std::to_string(header.fields.size())}});
        }
        std::string obj = strip_trailing_ws(rec.fields[0]);
        check_csv_name(obj, row_no, 1, "object", source_name);
        auto [it, inserted] = seen_objects.emplace(obj, row_no);
        if (!inserted) {
            throw ParseError(source_name,
                             {{Severity::error, rec.line, "duplicate object name \"" + obj +
                                                              "\" " + csv_cell_ref(row_no, 1)}});
        }
        Bitset row(attributes.size());
        for (std::size_t j = 0; j < attributes.size(); ++j) {
            const std::string& cell = rec.fields[j + 1];
            if (cell == "1" || cell == "X" || cell == "x") {
                row.set(j);
            } else if (!(cell.empty() || cell == "0")) {
                throw ParseError(source_name,
                                 {{Severity::error, rec.line,
                                   "illegal cell value \"" + cell + "\" " +
                                       csv_cell_ref(row_no, j + 2) +
                                       "; expected 1/X for incidence or 0/empty for none"}});
            }
        }
        objects.push_back(std::move(obj));
        rows.push_back(std::move(row));
    }

    try {
        return FormalContext(std::move(name), std::move(objects), std::move(attributes),
                             std::move(rows));
    } catch (const ContextError& e) {
        throw ParseError(source_name, {{Severity::error, 1, e.what()}});
    }
}

std::string serialize_csv(const FormalContext& ctx) {
    std::string out;
    out += csv_escape(ctx.name());
    for (const auto& m : ctx.attributes()) {
        out += ',';
        out += csv_escape(m);
    }
    out += '\n';
    for (std::size_t i = 0; i < ctx.object_count(); ++i) {
        out += csv_escape(ctx.objects()[i]);
        const Bitset& row = ctx.object_row(i);
        for (std::size_t j = 0; j < ctx.attribute_count(); ++j) {
            out += ',';
            out += row.test(j) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

std::vector<std::string> json_name_array(const json& node, const char* key,
                                         const std::string& source_name) {
    if (!node.contains(key)) {
        throw ParseError(source_name,
                         {{Severity::error, 1, std::string("missing key \"") + key + "\""}});
    }
    const json& arr = node.at(key);
    if (!arr.is_array()) {
        throw ParseError(source_name,
                         {{Severity::error, 1, std::string("\"") + key + "\" must be an array"}});
    }
    std::vector<std::string> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) {
            throw ParseError(source_name,
                             {{Severity::error, 1, std::string("\"") + key + "\"[" +
                                                       std::to_string(i) + "] must be a string"}});
        }
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

} // namespace

FormalContext parse_json(std::string_view text, const std::string& source_name,
                         std::vector<ParseDiagnostic>* warnings) {
    (void)warnings;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t offset = std::min<std::size_t>(e.byte, text.size());
        throw ParseError(source_name, {{Severity::error, line_of_offset(text, offset),
                                        std::string("invalid JSON: ") + e.what()}});
    }
    if (!root.is_object()) {
        throw ParseError(source_name,
                         {{Severity::error, 1, "top-level JSON value must be an object"}});
    }

    std::string name;
    if (root.contains("name")) {
        if (!root.at("name").is_string()) {
            throw ParseError(source_name, {{Severity::error, 1, "\"name\" must be a string"}});
        }
        name = root.at("name").get<std::string>();
    }
    std::vector<std::string> objects = json_name_array(root, "objects", source_name);
    std::vector<std::string> attributes = json_name_array(root, "attributes", source_name);

    if (!root.contains("incidence")) {
        throw ParseError(source_name, {{Severity::error, 1, "missing key \"incidence\""}});
    }
    const json& inc = root.at("incidence");
    if (!inc.is_array()) {
        throw ParseError(source_name, {{Severity::error, 1, "\"incidence\" must be an array"}});
    }

    std::vector<Bitset> rows(objects.size(), Bitset(attributes.size()));
    for (std::size_t i = 0; i < inc.size(); ++i) {
        const json& pair = inc[i];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
            !pair[1].is_number_integer()) {
            throw ParseError(source_name,
                             {{Severity::error, 1,
                               "\"incidence\"[" + std::to_string(i) +
                                   "] must be a pair of non-negative integers"}});
        }
        const auto o = pair[0].get<std::int64_t>();
        const auto a = pair[1].get<std::int64_t>();
        if (o < 0 || static_cast<std::size_t>(o) >= objects.size()) {
            throw ParseError(source_name,
                             {{Severity::error, 1,
                               "object index out of range in \"incidence\"[" +
                                   std::to_string(i) + "]: " + std::to_string(o)}});
        }
        if (a < 0 || static_cast<std::size_t>(a) >= attributes.size()) {
            throw ParseError(source_name,
                             {{Severity::error, 1,
                               "attribute index out of range in \"incidence\"[" +
                                   std::to_string(i) + "]: " + std::to_string(a)}});
        }
        if (rows[static_cast<std::size_t>(o)].test(static_cast<std::size_t>(a))) {
            throw ParseError(source_name,
                             {{Severity::error, 1,
                               "duplicate incidence pair [" + std::to_string(o) + ", " +
                                   std::to_string(a) + "]"}});
        }
        rows[static_cast<std::size_t>(o)].set(static_cast<std::size_t>(a));
    }

    try {
        return FormalContext(std::move(name), std::move(objects), std::move(attributes),
                             std::move(rows));
    } catch (const ContextError& e) {
        throw ParseError(source_name, {{Severity::error, 1, e.what()}});
    }
}

std::string serialize_json(const FormalContext& ctx) {
    json root;
    root["name"] = ctx.name();
    root["objects"] = ctx.objects();
    root["attributes"] = ctx.attributes();
    json inc = json::array();
    for (std::size_t i = 0; i < ctx.object_count(); ++i) {
        const Bitset& row = ctx.object_row(i);
        for (std::size_t j = row.find_first(); j != Bitset::npos; j = row.find_next(j)) {
            inc.push_back(json::array({i, j}));
        }
    }
    root["incidence"] = std::move(inc);
    return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

FormalContext parse_context(std::string_view text, ContextFormat format,
                            const std::string& source_name,
                            std::vector<ParseDiagnostic>* warnings) {
    switch (format) {
    case ContextFormat::burmeister: return parse_burmeister(text, source_name, warnings);
    case ContextFormat::csv: return parse_csv(text, source_name, warnings);
    case ContextFormat::json: return parse_json(text, source_name, warnings);
    }
    throw Error("unknown context format");
}

std::string serialize_context(const FormalContext& ctx, ContextFormat format) {
    switch (format) {
    case ContextFormat::burmeister: return serialize_burmeister(ctx);
    case ContextFormat::csv: return serialize_csv(ctx);
    case ContextFormat::json: return serialize_json(ctx);
    }
    throw Error("unknown context format");
}

std::string convert(std::string_view input, ContextFormat from, ContextFormat to,
                    const std::string& source_name, std::vector<ParseDiagnostic>* warnings) {
    const std::string text = decode_text(input, source_name);
    FormalContext ctx = parse_context(text, from, source_name, warnings);
    return serialize_context(ctx, to);
}

} // namespace fcarepo
