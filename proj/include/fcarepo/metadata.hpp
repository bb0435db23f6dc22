#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcarepo/errors.hpp"

namespace fcarepo {

enum class RelationKind { derived_from, translated_from, subcontext_of };

std::string_view to_string(RelationKind kind);
std::optional<RelationKind> relation_kind_from_name(std::string_view name);

struct ContextRelation {
    RelationKind kind;
    std::string target; // context filename, e.g. "livingbeings_de.cxt"
    bool operator==(const ContextRelation&) const = default;
};

/// Descriptive record for one context file.  `language` is an ISO 639-1 code;
/// when absent the context is taken to be in English.
struct ContextMetadata {
    std::string title;
    std::string source;      // citation-style string
    std::string description;
    std::optional<std::string> language;
    std::vector<ContextRelation> relations;

    std::string effective_language() const { return language.value_or("en"); }
    bool operator==(const ContextMetadata&) const = default;
};

/// The parsed index file: entries in document order plus named collections.
/// Reserved top-level YAML keys: `_collections` (collection name -> member
/// filenames) and `_schema` (integer format version, default 1).
struct RepositoryIndex {
    std::vector<std::pair<std::string, ContextMetadata>> entries;
    std::vector<std::pair<std::string, std::vector<std::string>>> collections;
    int schema = 1;

    const ContextMetadata* find(std::string_view filename) const;
    bool operator==(const RepositoryIndex&) const = default;
};

/// Checks a context filename against the naming convention: extension ".cxt";
/// stem of lowercase letters, digits, and underscores, not starting with an
/// underscore; stem ending in "_" plus an ISO 639-1 code; stem at most 64
/// characters.  Returns one message per violated rule; empty means valid.
std::vector<std::string> validate_filename(std::string_view name);

/// Parses the YAML index.  Accepts two entry shapes: a mapping of fields, and
/// a list of single-key mappings.  Unknown fields are reported as warnings.
/// Throws ParseError on malformed YAML, a missing or empty mandatory field,
/// an invalid language, a malformed relation, or a duplicate filename key.
/// Filename convention violations are deliberately NOT raised here; they are
/// the repository validator's responsibility, so that a questionable index can
/// still be loaded and reported on.
RepositoryIndex parse_index(std::string_view text,
                            const std::string& source_name = "contexts.yaml",
                            std::vector<ParseDiagnostic>* warnings = nullptr);

/// Serializes to the plain-mapping shape with a fixed field order.  The result
/// parses back to an equal RepositoryIndex.
std::string serialize_index(const RepositoryIndex& index);

struct ReportItem {
    Severity level = Severity::error;
    std::string file;
    std::string message;
    bool operator==(const ReportItem&) const = default;
};

struct ValidationReport {
    std::vector<ReportItem> items;

    bool empty() const { return items.empty(); }
    /// True iff the report carries no error-level items (warnings allowed).
    bool ok() const;
};

/// Line-oriented rendering: one `LEVEL\tfile\tmessage` line per item.
std::string report_to_text(const ValidationReport& report);
/// JSON rendering: array of {"level", "file", "message"} objects.
std::string report_to_json(const ValidationReport& report);

/// Cross-checks a repository tree: `<root>/contexts.yaml` against the files
/// under `<root>/contexts/`.  Reports index entries without files, files
/// without entries, context files that fail parsing, filename-convention
/// violations, and relation or collection references to unknown entries.  The
/// report is empty iff the repository is consistent.  Throws IoError when the
/// root directory cannot be read.
ValidationReport validate_repository(const std::filesystem::path& root_dir);

} // namespace fcarepo
