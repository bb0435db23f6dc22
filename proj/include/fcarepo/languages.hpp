#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace fcarepo {

/// One row of the bundled ISO 639-1 table.
struct LanguageEntry {
    const char* code; // two lowercase letters
    const char* name; // common English name
};

/// The full bundled ISO 639-1 table, ordered by code.
std::span<const LanguageEntry> languages();

/// True iff `code` is a two-letter code present in the bundled table.
bool is_language_code(std::string_view code);

/// English name for a code, if known.
std::optional<std::string> language_name(std::string_view code);

/// Normalizes a language designation to its ISO 639-1 code.  Accepts a code
/// (case-insensitive) or the English language name (case-insensitive), so both
/// "en" and "English" map to "en".
std::optional<std::string> normalize_language(std::string_view value);

} // namespace fcarepo
