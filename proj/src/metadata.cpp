#include "fcarepo/metadata.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "fcarepo/formats.hpp"
#include "fcarepo/languages.hpp"

namespace fcarepo {

std::string_view to_string(RelationKind kind) {
    switch (kind) {
    case RelationKind::derived_from: return "derived_from";
    case RelationKind::translated_from: return "translated_from";
    case RelationKind::subcontext_of: return "subcontext_of";
    }
    return "?";
}

std::optional<RelationKind> relation_kind_from_name(std::string_view name) {
    if (name == "derived_from") return RelationKind::derived_from;
    if (name == "translated_from") return RelationKind::translated_from;
    if (name == "subcontext_of") return RelationKind::subcontext_of;
    return std::nullopt;
}

const ContextMetadata* RepositoryIndex::find(std::string_view filename) const {
    for (const auto& [name, meta] : entries) {
        if (name == filename) return &meta;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// Filename convention
// ---------------------------------------------------------------------------

std::vector<std::string> validate_filename(std::string_view name) {
    std::vector<std::string> violations;
    constexpr std::string_view ext = ".cxt";
    std::string_view stem;
    if (name.size() > ext.size() && name.substr(name.size() - ext.size()) == ext) {
        stem = name.substr(0, name.size() - ext.size());
    } else {
        violations.emplace_back("extension must be \".cxt\"");
        auto dot = name.find_last_of('.');
        stem = (dot == std::string_view::npos) ? name : name.substr(0, dot);
    }

    const bool charset_ok =
        !stem.empty() && stem.front() != '_' &&
        std::all_of(stem.begin(), stem.end(), [](unsigned char c) {
            return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        });
    if (!charset_ok) {
        violations.emplace_back("stem must start with a lowercase letter or digit and use only "
                                "lowercase letters, digits, and underscores");
    }

    auto underscore = stem.find_last_of('_');
    std::string_view code =
        (underscore == std::string_view::npos) ? std::string_view() : stem.substr(underscore + 1);
    if (!is_language_code(code)) {
        violations.emplace_back(
            "stem must end with \"_\" followed by an ISO 639-1 language code");
    }

    if (stem.size() > 64) {
        violations.emplace_back("stem must be at most 64 characters");
    }
    return violations;
}

// ---------------------------------------------------------------------------
// Index parsing
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void fail(const std::string& source, std::vector<ParseDiagnostic> collected,
                       std::size_t line, std::string message) {
    collected.push_back({Severity::error, line, std::move(message)});
    throw ParseError(source, std::move(collected));
}

std::size_t mark_line(const YAML::Node& node) {
    const YAML::Mark mark = node.Mark();
    return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 1;
}

struct EntryBuilder {
    ContextMetadata meta;
    bool has_title = false;
    bool has_source = false;
    bool has_description = false;
};

void parse_relations(const std::string& source_name, std::vector<ParseDiagnostic>& notes,
                     const std::string& filename, const YAML::Node& node, EntryBuilder& entry) {
    auto handle_pair = [&](const YAML::Node& key, const YAML::Node& value) {
        const std::size_t line = mark_line(key);
        if (!key.IsScalar()) {
            fail(source_name, std::move(notes), line, filename + ": malformed relation");
        }
        auto kind = relation_kind_from_name(key.Scalar());
        if (!kind) {
            fail(source_name, std::move(notes), line,
                 filename + ": unknown relation kind \"" + key.Scalar() + "\"");
        }
        if (!value.IsScalar()) {
            fail(source_name, std::move(notes), line,
                 filename + ": relation target must be a filename string");
        }
        entry.meta.relations.push_back({*kind, value.Scalar()});
    };

    if (node.IsMap()) {
        for (auto it = node.begin(); it != node.end(); ++it) handle_pair(it->first, it->second);
    } else if (node.IsSequence()) {
        for (const auto& element : node) {
            if (!element.IsMap()) {
                fail(source_name, std::move(notes), mark_line(element),
                     filename + ": relations must be a list of kind-target pairs");
            }
            for (auto it = element.begin(); it != element.end(); ++it)
                handle_pair(it->first, it->second);
        }
    } else {
        fail(source_name, std::move(notes), mark_line(node),
             filename + ": relations must be a list of kind-target pairs");
    }
}

void handle_field(const std::string& source_name, std::vector<ParseDiagnostic>& notes,
                  const std::string& filename, const YAML::Node& key, const YAML::Node& value,
                  EntryBuilder& entry) {
    const std::size_t line = mark_line(key);
    if (!key.IsScalar()) {
        fail(source_name, std::move(notes), line, filename + ": non-scalar field name");
    }
    const std::string field = key.Scalar();

    auto scalar_or_fail = [&]() -> std::string {
        if (!value.IsScalar()) {
            fail(source_name, std::move(notes), line,
                 filename + ": field " + field + " must be a string");
        }
        return value.Scalar();
    };
    auto duplicate = [&](bool present) {
        if (present) {
            notes.push_back({Severity::warning, line,
                             filename + ": duplicate field " + field + " ignored"});
        }
        return present;
    };

    if (field == "title") {
        if (duplicate(entry.has_title)) return;
        entry.meta.title = scalar_or_fail();
        entry.has_title = true;
    } else if (field == "source") {
        if (duplicate(entry.has_source)) return;
        entry.meta.source = scalar_or_fail();
        entry.has_source = true;
    } else if (field == "description") {
        if (duplicate(entry.has_description)) return;
        entry.meta.description = scalar_or_fail();
        entry.has_description = true;
    } else if (field == "language") {
        if (duplicate(entry.meta.language.has_value())) return;
        const std::string raw = scalar_or_fail();
        auto code = normalize_language(raw);
        if (!code) {
            fail(source_name, std::move(notes), line,
                 filename + ": invalid language \"" + raw + "\"");
        }
        entry.meta.language = *code;
    } else if (field == "relations") {
        parse_relations(source_name, notes, filename, value, entry);
    } else {
        notes.push_back(
            {Severity::warning, line, filename + ": unknown field " + field + " ignored"});
    }
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read file: " + path.string());
    return std::move(buffer).str();
}

} // namespace

RepositoryIndex parse_index(std::string_view text, const std::string& source_name,
                            std::vector<ParseDiagnostic>* warnings) {
    std::vector<ParseDiagnostic> notes;
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        const std::size_t line =
            e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 1;
        throw ParseError(source_name, {{Severity::error, line, "malformed YAML: " + e.msg}});
    }

    RepositoryIndex index;
    if (!root.IsDefined() || root.IsNull()) {
        return index;
    }
    if (!root.IsMap()) {
        fail(source_name, std::move(notes), mark_line(root),
             "top-level YAML value must be a mapping");
    }

    std::set<std::string> seen;
    bool seen_schema = false;
    bool seen_collections = false;
    for (auto it = root.begin(); it != root.end(); ++it) {
        const YAML::Node key_node = it->first;
        const YAML::Node value = it->second;
        const std::size_t line = mark_line(key_node);
        if (!key_node.IsScalar()) {
            fail(source_name, std::move(notes), line, "non-scalar top-level key");
        }
        const std::string key = key_node.Scalar();

        if (key == "_schema") {
            if (seen_schema) {
                fail(source_name, std::move(notes), line, "duplicate key _schema");
            }
            seen_schema = true;
            try {
                index.schema = value.as<int>();
            } catch (const YAML::Exception&) {
                fail(source_name, std::move(notes), line,
                     "reserved key _schema must be an integer");
            }
            continue;
        }
        if (key == "_collections") {
            if (seen_collections) {
                fail(source_name, std::move(notes), line, "duplicate key _collections");
            }
            seen_collections = true;
            if (!value.IsMap()) {
                fail(source_name, std::move(notes), line,
                     "_collections must be a mapping from collection name to a member list");
            }
            std::set<std::string> seen_names;
            for (auto cit = value.begin(); cit != value.end(); ++cit) {
                const std::size_t cline = mark_line(cit->first);
                if (!cit->first.IsScalar()) {
                    fail(source_name, std::move(notes), cline, "non-scalar collection name");
                }
                const std::string cname = cit->first.Scalar();
                if (!seen_names.insert(cname).second) {
                    fail(source_name, std::move(notes), cline,
                         "duplicate collection \"" + cname + "\"");
                }
                if (!cit->second.IsSequence()) {
                    fail(source_name, std::move(notes), cline,
                         "collection \"" + cname + "\" must be a list of filenames");
                }
                std::vector<std::string> members;
                for (const auto& member : cit->second) {
                    if (!member.IsScalar()) {
                        fail(source_name, std::move(notes), mark_line(member),
                             "collection \"" + cname + "\" members must be filename strings");
                    }
                    members.push_back(member.Scalar());
                }
                index.collections.emplace_back(cname, std::move(members));
            }
            continue;
        }
        if (!key.empty() && key.front() == '_') {
            notes.push_back(
                {Severity::warning, line, "unknown reserved key " + key + " ignored"});
            continue;
        }

        if (!seen.insert(key).second) {
            fail(source_name, std::move(notes), line, "duplicate filename key \"" + key + "\"");
        }
        EntryBuilder entry;
        if (value.IsMap()) {
            for (auto fit = value.begin(); fit != value.end(); ++fit) {
                handle_field(source_name, notes, key, fit->first, fit->second, entry);
            }
        } else if (value.IsSequence()) {
            for (const auto& element : value) {
                if (!element.IsMap()) {
                    fail(source_name, std::move(notes), mark_line(element),
                         key + ": list entries must be key-value mappings");
                }
                for (auto fit = element.begin(); fit != element.end(); ++fit) {
                    handle_field(source_name, notes, key, fit->first, fit->second, entry);
                }
            }
        } else {
            fail(source_name, std::move(notes), line,
                 key + ": entry must be a mapping or a list of key-value mappings");
        }

        if (!entry.has_title) {
            fail(source_name, std::move(notes), line, key + ": missing mandatory field title");
        }
        if (!entry.has_source) {
            fail(source_name, std::move(notes), line, key + ": missing mandatory field source");
        }
        if (!entry.has_description) {
            fail(source_name, std::move(notes), line,
                 key + ": missing mandatory field description");
        }
        if (entry.meta.title.empty()) {
            fail(source_name, std::move(notes), line, key + ": mandatory field title is empty");
        }
        if (entry.meta.source.empty()) {
            fail(source_name, std::move(notes), line, key + ": mandatory field source is empty");
        }
        if (entry.meta.description.empty()) {
            fail(source_name, std::move(notes), line,
                 key + ": mandatory field description is empty");
        }
        index.entries.emplace_back(key, std::move(entry.meta));
    }

    if (warnings) warnings->insert(warnings->end(), notes.begin(), notes.end());
    return index;
}

std::string serialize_index(const RepositoryIndex& index) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    if (index.schema != 1) {
        out << YAML::Key << "_schema" << YAML::Value << index.schema;
    }
    for (const auto& [filename, meta] : index.entries) {
        out << YAML::Key << filename << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "title" << YAML::Value << meta.title;
        out << YAML::Key << "source" << YAML::Value << meta.source;
        if (meta.language) {
            out << YAML::Key << "language" << YAML::Value << *meta.language;
        }
        out << YAML::Key << "description" << YAML::Value << meta.description;
        if (!meta.relations.empty()) {
            out << YAML::Key << "relations" << YAML::Value << YAML::BeginSeq;
            for (const auto& rel : meta.relations) {
                out << YAML::BeginMap;
                out << YAML::Key << std::string(to_string(rel.kind)) << YAML::Value << rel.target;
                out << YAML::EndMap;
            }
            out << YAML::EndSeq;
        }
        out << YAML::EndMap;
    }
    if (!index.collections.empty()) {
        out << YAML::Key << "_collections" << YAML::Value << YAML::BeginMap;
        for (const auto& [name, members] : index.collections) {
            out << YAML::Key << name << YAML::Value << YAML::BeginSeq;
            for (const auto& member : members) out << member;
            out << YAML::EndSeq;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    std::string text = out.c_str();
    text += '\n';
    return text;
}

// ---------------------------------------------------------------------------
// Reports and repository cross-checks
// ---------------------------------------------------------------------------

bool ValidationReport::ok() const {
    return std::none_of(items.begin(), items.end(),
                        [](const ReportItem& i) { return i.level == Severity::error; });
}

std::string report_to_text(const ValidationReport& report) {
    std::string out;
    for (const auto& item : report.items) {
        out += item.level == Severity::error ? "ERROR" : "WARNING";
        out += '\t';
        out += item.file;
        out += '\t';
        out += item.message;
        out += '\n';
    }
    return out;
}

std::string report_to_json(const ValidationReport& report) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& item : report.items) {
        arr.push_back({{"level", item.level == Severity::error ? "error" : "warning"},
                       {"file", item.file},
                       {"message", item.message}});
    }
    return arr.dump(2) + "\n";
}

ValidationReport validate_repository(const std::filesystem::path& root_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(root_dir, ec) || ec) {
        throw IoError("repository root is not a readable directory: " + root_dir.string());
    }

    ValidationReport report;
    auto add = [&](Severity level, std::string file, std::string message) {
        report.items.push_back({level, std::move(file), std::move(message)});
    };
    auto diagnostic_message = [](const ParseDiagnostic& d) {
        return "line " + std::to_string(d.line) + ": " + d.message;
    };

    const fs::path index_path = root_dir / "contexts.yaml";
    const fs::path contexts_dir = root_dir / "contexts";
    const bool have_index = fs::is_regular_file(index_path, ec) && !ec;
    const bool have_dir = fs::is_directory(contexts_dir, ec) && !ec;
    if (!have_index) add(Severity::error, "contexts.yaml", "index file missing");
    if (!have_dir) add(Severity::error, "contexts", "contexts directory missing");
    if (!have_index) return report;

    RepositoryIndex index;
    std::vector<ParseDiagnostic> index_warnings;
    try {
        const std::string text = decode_text(read_file_bytes(index_path), "contexts.yaml");
        index = parse_index(text, "contexts.yaml", &index_warnings);
    } catch (const ParseError& e) {
        for (const auto& d : e.diagnostics()) {
            add(d.severity, "contexts.yaml", diagnostic_message(d));
        }
        return report;
    }
    for (const auto& d : index_warnings) {
        add(d.severity, "contexts.yaml", diagnostic_message(d));
    }

    std::set<std::string> entry_names;
    for (const auto& [name, meta] : index.entries) entry_names.insert(name);

    for (const auto& [name, meta] : index.entries) {
        for (const auto& violation : validate_filename(name)) {
            add(Severity::error, name, "filename violation: " + violation);
        }
        if (have_dir) {
            const fs::path file = contexts_dir / name;
            if (!fs::is_regular_file(file, ec) || ec) {
                add(Severity::error, name, "index entry without file");
            } else {
                try {
                    std::vector<ParseDiagnostic> file_warnings;
                    const std::string text = decode_text(read_file_bytes(file), name);
                    parse_burmeister(text, name, &file_warnings);
                    for (const auto& d : file_warnings) {
                        add(d.severity, name, diagnostic_message(d));
                    }
                } catch (const ParseError& e) {
                    for (const auto& d : e.diagnostics()) {
                        add(d.severity, name, diagnostic_message(d));
                    }
                } catch (const IoError& e) {
                    add(Severity::error, name, e.what());
                }
            }
        }
        for (const auto& rel : meta.relations) {
            for (const auto& violation : validate_filename(rel.target)) {
                add(Severity::error, name,
                    "relation target \"" + rel.target + "\": filename violation: " + violation);
            }
            if (!entry_names.contains(rel.target)) {
                add(Severity::error, name, "relation target not in index: " + rel.target);
            }
        }
    }

    for (const auto& [cname, members] : index.collections) {
        for (const auto& member : members) {
            if (!entry_names.contains(member)) {
                add(Severity::error, member,
                    "collection \"" + cname + "\" references unknown entry");
            }
        }
    }

    if (have_dir) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(contexts_dir)) {
            if (entry.is_regular_file()) files.push_back(entry.path().filename().string());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            if (!entry_names.contains(file)) {
                add(Severity::error, file, "file without index entry");
            }
        }
    }
    return report;
}

} // namespace fcarepo
