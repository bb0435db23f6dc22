#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "fcarepo/languages.hpp"
#include "fcarepo/metadata.hpp"
#include "testutil.hpp"

using fcarepo::ContextMetadata;
using fcarepo::ParseDiagnostic;
using fcarepo::ParseError;
using fcarepo::RepositoryIndex;
using fcarepo::Severity;

namespace {

// Counts report items whose message contains the fragment.
std::size_t count_items(const fcarepo::ValidationReport& report, const std::string& fragment) {
    return static_cast<std::size_t>(
        std::count_if(report.items.begin(), report.items.end(), [&](const auto& item) {
            return item.message.find(fragment) != std::string::npos;
        }));
}

} // namespace

TEST_CASE("language table") {
    CHECK(fcarepo::is_language_code("en"));
    CHECK(fcarepo::is_language_code("de"));
    CHECK_FALSE(fcarepo::is_language_code("xx"));
    CHECK_FALSE(fcarepo::is_language_code("eng"));
    CHECK(fcarepo::language_name("fr") == "French");
    CHECK(fcarepo::normalize_language("en") == "en");
    CHECK(fcarepo::normalize_language("EN") == "en");
    CHECK(fcarepo::normalize_language("English") == "en");
    CHECK(fcarepo::normalize_language("german") == "de");
    CHECK_FALSE(fcarepo::normalize_language("Klingon").has_value());
}

TEST_CASE("filename convention") {
    CHECK(fcarepo::validate_filename("livingbeings_en.cxt").empty());
    CHECK(fcarepo::validate_filename("digits2_start_ok_2x_de.cxt").empty());

    // wrong extension and no language suffix and uppercase: several violations
    CHECK(fcarepo::validate_filename("LivingBeings.cxt").size() >= 2);

    auto ext = fcarepo::validate_filename("livingbeings_en.csv");
    REQUIRE(ext.size() == 1);
    CHECK(ext[0] == "extension must be \".cxt\"");

    auto lang = fcarepo::validate_filename("tools_xx.cxt");
    REQUIRE(lang.size() == 1);
    CHECK(lang[0] == "stem must end with \"_\" followed by an ISO 639-1 language code");

    CHECK(fcarepo::validate_filename("_leading_en.cxt").size() == 1);
    CHECK(fcarepo::validate_filename("has space_en.cxt").size() == 1);
    CHECK(fcarepo::validate_filename(std::string(70, 'a') + "_en.cxt").size() == 1);
    CHECK_FALSE(fcarepo::validate_filename("nolang.cxt").empty());
    CHECK_FALSE(fcarepo::validate_filename(".cxt").empty());
}

TEST_CASE("index parses both entry shapes") {
    const std::string mapping_shape = "livingbeings_en.cxt:\n"
                                      "  title: Living Beings and Water\n"
                                      "  source: a book\n"
                                      "  language: en\n"
                                      "  description: small example\n";
    const std::string list_shape = "livingbeings_en.cxt:\n"
                                   "- title: Living Beings and Water\n"
                                   "- source: a book\n"
                                   "- language: en\n"
                                   "- description: small example\n";
    std::vector<ParseDiagnostic> warnings;
    RepositoryIndex a = fcarepo::parse_index(mapping_shape, "contexts.yaml", &warnings);
    RepositoryIndex b = fcarepo::parse_index(list_shape, "contexts.yaml", &warnings);
    CHECK(warnings.empty());
    CHECK(a == b);
    REQUIRE(a.entries.size() == 1);
    CHECK(a.entries[0].first == "livingbeings_en.cxt");
    const ContextMetadata& meta = a.entries[0].second;
    CHECK(meta.title == "Living Beings and Water");
    CHECK(meta.language == "en");
    CHECK(meta.effective_language() == "en");
}

TEST_CASE("index language handling") {
    // language by English name normalizes; absence defaults to en
    RepositoryIndex idx = fcarepo::parse_index("a_en.cxt:\n"
                                               "  title: T\n"
                                               "  source: S\n"
                                               "  language: German\n"
                                               "  description: D\n"
                                               "b_en.cxt:\n"
                                               "  title: T\n"
                                               "  source: S\n"
                                               "  description: D\n");
    CHECK(idx.entries[0].second.language == "de");
    CHECK_FALSE(idx.entries[1].second.language.has_value());
    CHECK(idx.entries[1].second.effective_language() == "en");

    CHECK_THROWS_AS(fcarepo::parse_index("a_en.cxt:\n"
                                         "  title: T\n"
                                         "  source: S\n"
                                         "  language: Klingon\n"
                                         "  description: D\n"),
                    ParseError);
}

TEST_CASE("index errors") {
    SUBCASE("malformed yaml carries a line") {
        try {
            fcarepo::parse_index("a_en.cxt:\n  title: [unclosed\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.first_error().message.find("malformed YAML") != std::string::npos);
        }
    }
    SUBCASE("missing mandatory fields, in order") {
        try {
            fcarepo::parse_index("a_en.cxt:\n  source: S\n  description: D\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.first_error().message == "a_en.cxt: missing mandatory field title");
        }
        try {
            fcarepo::parse_index("a_en.cxt:\n  title: T\n  description: D\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.first_error().message == "a_en.cxt: missing mandatory field source");
        }
        try {
            fcarepo::parse_index("a_en.cxt:\n  title: \"\"\n  source: S\n  description: D\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.first_error().message == "a_en.cxt: mandatory field title is empty");
        }
    }
    SUBCASE("duplicate filename key") {
        const std::string text = "a_en.cxt:\n  title: T\n  source: S\n  description: D\n"
                                 "a_en.cxt:\n  title: T\n  source: S\n  description: D\n";
        try {
            fcarepo::parse_index(text);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.first_error().message == "duplicate filename key \"a_en.cxt\"");
        }
    }
    SUBCASE("filename violations are not the parser's business") {
        RepositoryIndex idx = fcarepo::parse_index(
            "NotAGoodName.txt:\n  title: T\n  source: S\n  description: D\n");
        CHECK(idx.entries.size() == 1);
    }
    SUBCASE("null document is an empty index") {
        RepositoryIndex idx = fcarepo::parse_index("");
        CHECK(idx.entries.empty());
        CHECK(idx.collections.empty());
    }
}

TEST_CASE("index unknown fields warn and are ignored") {
    std::vector<ParseDiagnostic> warnings;
    RepositoryIndex idx = fcarepo::parse_index("a_en.cxt:\n"
                                               "  title: T\n"
                                               "  source: S\n"
                                               "  description: D\n"
                                               "  color: blue\n",
                                               "contexts.yaml", &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].severity == Severity::warning);
    CHECK(warnings[0].message == "a_en.cxt: unknown field color ignored");
    CHECK(idx.entries.size() == 1);
}

TEST_CASE("index relations") {
    RepositoryIndex idx = fcarepo::parse_index("a_de.cxt:\n"
                                               "  title: T\n"
                                               "  source: S\n"
                                               "  description: D\n"
                                               "  relations:\n"
                                               "    translated_from: a_en.cxt\n");
    REQUIRE(idx.entries[0].second.relations.size() == 1);
    CHECK(idx.entries[0].second.relations[0].kind == fcarepo::RelationKind::translated_from);
    CHECK(idx.entries[0].second.relations[0].target == "a_en.cxt");

    CHECK_THROWS_AS(fcarepo::parse_index("a_en.cxt:\n"
                                         "  title: T\n"
                                         "  source: S\n"
                                         "  description: D\n"
                                         "  relations:\n"
                                         "    cousin_of: b_en.cxt\n"),
                    ParseError);
}

TEST_CASE("index reserved keys") {
    std::vector<ParseDiagnostic> warnings;
    RepositoryIndex idx = fcarepo::parse_index("_schema: 1\n"
                                               "_collections:\n"
                                               "  classics:\n"
                                               "    - a_en.cxt\n"
                                               "a_en.cxt:\n"
                                               "  title: T\n"
                                               "  source: S\n"
                                               "  description: D\n",
                                               "contexts.yaml", &warnings);
    CHECK(warnings.empty());
    CHECK(idx.schema == 1);
    REQUIRE(idx.collections.size() == 1);
    CHECK(idx.collections[0].first == "classics");
    CHECK(idx.collections[0].second == std::vector<std::string>{"a_en.cxt"});

    std::vector<ParseDiagnostic> unknown_warnings;
    fcarepo::parse_index("_future: x\na_en.cxt:\n  title: T\n  source: S\n  description: D\n",
                         "contexts.yaml", &unknown_warnings);
    REQUIRE(unknown_warnings.size() == 1);
    CHECK(unknown_warnings[0].message == "unknown reserved key _future ignored");

    CHECK_THROWS_AS(fcarepo::parse_index("_schema: soon\n"), ParseError);
}

TEST_CASE("index serialization round-trips") {
    RepositoryIndex idx;
    ContextMetadata a;
    a.title = "Title A";
    a.source = "Source A";
    a.description = "Description A";
    a.language = "de";
    a.relations.push_back({fcarepo::RelationKind::translated_from, "a_en.cxt"});
    ContextMetadata b;
    b.title = "Title: B, with punctuation";
    b.source = "Source B";
    b.description = "Description B";
    idx.entries.emplace_back("a_de.cxt", a);
    idx.entries.emplace_back("b_en.cxt", b);
    idx.collections.emplace_back("both", std::vector<std::string>{"a_de.cxt", "b_en.cxt"});

    const std::string text = fcarepo::serialize_index(idx);
    std::vector<ParseDiagnostic> warnings;
    RepositoryIndex parsed = fcarepo::parse_index(text, "contexts.yaml", &warnings);
    CHECK(warnings.empty());
    CHECK(parsed == idx);
}

TEST_CASE("repository validation accepts the seeded fixture") {
    auto report = fcarepo::validate_repository(testutil::data_dir() / "repo");
    CHECK(report.items.empty());
    CHECK(report.ok());
}

TEST_CASE("repository validation flags seeded defects") {
    using testutil::TempDir;
    const auto fixture = testutil::data_dir() / "repo";

    SUBCASE("file without index entry") {
        TempDir tmp;
        testutil::copy_tree(fixture, tmp.path());
        testutil::write_file(tmp.path() / "contexts" / "orphan_en.cxt", "B\n\n0\n0\n\n");
        auto report = fcarepo::validate_repository(tmp.path());
        CHECK_FALSE(report.ok());
        REQUIRE(report.items.size() == 1);
        CHECK(report.items[0].file == "orphan_en.cxt");
        CHECK(report.items[0].message == "file without index entry");
    }
    SUBCASE("index entry without file") {
        TempDir tmp;
        testutil::copy_tree(fixture, tmp.path());
        std::filesystem::remove(tmp.path() / "contexts" / "fcatools_en.cxt");
        auto report = fcarepo::validate_repository(tmp.path());
        REQUIRE(report.items.size() == 1);
        CHECK(report.items[0].file == "fcatools_en.cxt");
        CHECK(report.items[0].message == "index entry without file");
    }
    SUBCASE("malformed context file") {
        TempDir tmp;
        testutil::copy_tree(fixture, tmp.path());
        testutil::write_file(tmp.path() / "contexts" / "fcatools_en.cxt", "B\n\n2\n2\n\ng1\n");
        auto report = fcarepo::validate_repository(tmp.path());
        REQUIRE(report.items.size() == 1);
        CHECK(report.items[0].file == "fcatools_en.cxt");
        CHECK(report.items[0].message.find("line") != std::string::npos);
    }
    SUBCASE("missing index file") {
        TempDir tmp;
        testutil::copy_tree(fixture, tmp.path());
        std::filesystem::remove(tmp.path() / "contexts.yaml");
        auto report = fcarepo::validate_repository(tmp.path());
        CHECK(count_items(report, "index file missing") == 1);
    }
    SUBCASE("unreadable root") {
        CHECK_THROWS_AS(fcarepo::validate_repository(testutil::data_dir() / "no-such-dir"),
                        fcarepo::IoError);
    }
}
