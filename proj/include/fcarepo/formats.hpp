#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fcarepo/context.hpp"
#include "fcarepo/errors.hpp"

namespace fcarepo {

enum class ContextFormat { burmeister, csv, json };

std::string_view to_string(ContextFormat format);
std::optional<ContextFormat> format_from_name(std::string_view name);
/// Format implied by a file extension (".cxt", ".csv", ".json").
std::optional<ContextFormat> format_from_extension(std::string_view path);

/// True iff the bytes are well-formed UTF-8.
bool utf8_valid(std::string_view bytes);

/// Validates bytes as UTF-8 text and strips a leading BOM if present.
/// Throws ParseError on malformed input; source_name is used in messages.
std::string decode_text(std::string_view bytes, const std::string& source_name = "input");

// Burmeister ("cxt") format.
//
// The emitted form is fixed: line 1 "B"; line 2 the context name (possibly
// empty); lines 3 and 4 the object and attribute counts; line 5 empty; the
// object names, one per line; the attribute names, one per line; one
// incidence row per object over 'X' and '.'; LF newlines and a trailing
// newline. The parser additionally accepts CRLF, a lowercase 'x', a missing
// blank separator line, and a missing name line (recognized by line count),
// each with a warning diagnostic.
FormalContext parse_burmeister(std::string_view text, const std::string& source_name = "input",
                               std::vector<ParseDiagnostic>* warnings = nullptr);
std::string serialize_burmeister(const FormalContext& ctx);

// Binary CSV. First record: the context name (empty when unnamed) followed by
// the attribute names. Every further record: an object name followed by one
// cell per attribute, "1"/"X"/"x" for incidence and "0" or empty for none.
// RFC 4180 quoting; the serializer emits "1"/"0" and quotes only when needed.
FormalContext parse_csv(std::string_view text, const std::string& source_name = "input",
                        std::vector<ParseDiagnostic>* warnings = nullptr);
std::string serialize_csv(const FormalContext& ctx);

// JSON object with keys "name" (optional on input, defaults to empty),
// "objects", "attributes", and "incidence" (sorted [object, attribute] index
// pairs).
FormalContext parse_json(std::string_view text, const std::string& source_name = "input",
                         std::vector<ParseDiagnostic>* warnings = nullptr);
std::string serialize_json(const FormalContext& ctx);

FormalContext parse_context(std::string_view text, ContextFormat format,
                            const std::string& source_name = "input",
                            std::vector<ParseDiagnostic>* warnings = nullptr);
std::string serialize_context(const FormalContext& ctx, ContextFormat format);

/// Parse bytes in `from`, then serialize in `to`. Converting a format to
/// itself normalizes the file to the strict emitted form.
std::string convert(std::string_view input, ContextFormat from, ContextFormat to,
                    const std::string& source_name = "input",
                    std::vector<ParseDiagnostic>* warnings = nullptr);

} // namespace fcarepo
