// fcarepo: repository toolkit for formal contexts.
//
// Exit codes: 0 success, 1 data error (parse/validation/not-found),
// 2 I/O or network failure, 3 budget exceeded.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcarepo/client.hpp"
#include "fcarepo/concepts.hpp"
#include "fcarepo/context.hpp"
#include "fcarepo/errors.hpp"
#include "fcarepo/formats.hpp"
#include "fcarepo/lattice.hpp"
#include "fcarepo/metadata.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fcarepo::IoError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw fcarepo::IoError("cannot read file: " + path.string());
    return std::move(buffer).str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw fcarepo::IoError("cannot create directory: " + path.parent_path().string());
    }
    const fs::path temp = path.string() + ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw fcarepo::IoError("cannot write file: " + temp.string());
    }
    std::error_code ec;
    fs::rename(temp, path, ec);
    if (ec) throw fcarepo::IoError("cannot move file into place: " + path.string());
}

void write_output(const std::string& output_path, const std::string& content) {
    if (output_path.empty()) {
        std::cout << content;
    } else {
        write_file_atomic(output_path, content);
    }
}

fcarepo::ContextFormat require_format(const std::string& flag_value, const std::string& path,
                                      const char* which) {
    if (!flag_value.empty()) {
        if (auto format = fcarepo::format_from_name(flag_value)) return *format;
        throw fcarepo::Error(std::string("unknown format for ") + which + ": " + flag_value);
    }
    if (auto format = fcarepo::format_from_extension(path)) return *format;
    throw fcarepo::Error(std::string("cannot infer the ") + which +
                         " format; pass --" + which);
}

fcarepo::FormalContext load_context_file(const std::string& path, const std::string& from_flag) {
    const fcarepo::ContextFormat format = require_format(from_flag, path, "from");
    const std::string name = fs::path(path).filename().string();
    std::vector<fcarepo::ParseDiagnostic> warnings;
    const std::string text = fcarepo::decode_text(read_file(path), name);
    fcarepo::FormalContext ctx = fcarepo::parse_context(text, format, name, &warnings);
    for (const auto& diagnostic : warnings) {
        std::cerr << name << ": " << fcarepo::to_string(diagnostic) << "\n";
    }
    return ctx;
}

json names_of(const fcarepo::Bitset& set, const std::vector<std::string>& names) {
    json out = json::array();
    for (std::size_t i = set.find_first(); i != fcarepo::Bitset::npos; i = set.find_next(i)) {
        out.push_back(names[i]);
    }
    return out;
}

json stats_json(const fcarepo::ContextStatistics& stats) {
    json out;
    out["object_count"] = stats.object_count;
    out["attribute_count"] = stats.attribute_count;
    out["incidence_count"] = stats.incidence_count;
    out["density"] = std::to_string(stats.density.num) + "/" + std::to_string(stats.density.den);
    if (stats.concept_count) out["concept_count"] = *stats.concept_count;
    return out;
}

std::string stats_text(const fcarepo::ContextStatistics& stats) {
    auto line = [](const char* key, const std::string& value) {
        char buffer[96];
        std::snprintf(buffer, sizeof(buffer), "%-12s%s\n", key, value.c_str());
        return std::string(buffer);
    };
    std::string out;
    out += line("objects", std::to_string(stats.object_count));
    out += line("attributes", std::to_string(stats.attribute_count));
    out += line("incidences", std::to_string(stats.incidence_count));
    out += line("density",
                std::to_string(stats.density.num) + "/" + std::to_string(stats.density.den));
    if (stats.concept_count) out += line("concepts", std::to_string(*stats.concept_count));
    return out;
}

json concepts_json(const fcarepo::FormalContext& ctx,
                   const std::vector<fcarepo::FormalConcept>& concepts) {
    json out = json::array();
    for (const auto& node : concepts) {
        out.push_back({{"extent", names_of(node.extent, ctx.objects())},
                       {"intent", names_of(node.intent, ctx.attributes())}});
    }
    return out;
}

json basis_json(const fcarepo::FormalContext& ctx,
                const std::vector<fcarepo::Implication>& basis) {
    json out = json::array();
    for (const auto& imp : basis) {
        out.push_back({{"premise", names_of(imp.premise, ctx.attributes())},
                       {"conclusion", names_of(imp.conclusion - imp.premise, ctx.attributes())}});
    }
    return out;
}

std::string render_lattice(const fcarepo::FormalContext& ctx, std::size_t budget,
                           const std::string& to_flag) {
    const auto concepts = fcarepo::enumerate_concepts(ctx, budget);
    const auto lattice = fcarepo::build_lattice(concepts);
    const auto labels = fcarepo::reduced_labels(ctx, lattice);
    if (to_flag == "dot") {
        return fcarepo::render_dot(lattice, &labels);
    }
    if (to_flag.empty() || to_flag == "svg") {
        return fcarepo::render_svg(lattice, fcarepo::layout_layered(lattice), labels);
    }
    throw fcarepo::Error("unknown lattice output format: " + to_flag + " (use svg or dot)");
}

int repo_error_exit(const fcarepo::RepoError& e) {
    switch (e.kind()) {
    case fcarepo::RepoError::Kind::not_found:
    case fcarepo::RepoError::Kind::invalid_name:
    case fcarepo::RepoError::Kind::bad_payload: return 1;
    case fcarepo::RepoError::Kind::network:
    case fcarepo::RepoError::Kind::http_status:
    case fcarepo::RepoError::Kind::offline: return 2;
    }
    return 2;
}

template <typename F>
int run_guarded(F&& body) {
    try {
        return body();
    } catch (const fcarepo::BudgetExceededError& e) {
        std::cerr << "fcarepo: " << e.what() << "\n";
        return 3;
    } catch (const fcarepo::ParseError& e) {
        std::cerr << "fcarepo: " << e.what() << "\n";
        for (const auto& diagnostic : e.diagnostics()) {
            if (&diagnostic == &e.first_error()) continue; // already in what()
            std::cerr << "  " << fcarepo::to_string(diagnostic) << "\n";
        }
        return 1;
    } catch (const fcarepo::RepoError& e) {
        std::cerr << "fcarepo: " << e.what() << "\n";
        return repo_error_exit(e);
    } catch (const fcarepo::IoError& e) {
        std::cerr << "fcarepo: " << e.what() << "\n";
        return 2;
    } catch (const fcarepo::Error& e) {
        std::cerr << "fcarepo: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "fcarepo: " << e.what() << "\n";
        return 2;
    }
}

struct GenOutcome {
    bool budget_skipped = false;
};

struct SummaryRow {
    std::string filename;
    std::string stem;
    std::string title;
    std::string language;
    fcarepo::ContextStatistics stats;
};

std::string derivative_page(const std::string& filename, const fcarepo::ContextMetadata& meta,
                            const fcarepo::ContextStatistics& stats, bool lattice_rendered) {
    std::string md;
    md += "# " + meta.title + "\n\n";
    md += "**File:** `" + filename + "`  \n";
    md += "**Language:** " + meta.effective_language() + "  \n";
    md += "**Source:** " + meta.source + "\n\n";
    md += meta.description + "\n\n";
    md += "## Statistics\n\n";
    md += "| Measure | Value |\n| --- | ---: |\n";
    md += "| Objects | " + std::to_string(stats.object_count) + " |\n";
    md += "| Attributes | " + std::to_string(stats.attribute_count) + " |\n";
    md += "| Incidences | " + std::to_string(stats.incidence_count) + " |\n";
    md += "| Density | " + std::to_string(stats.density.num) + "/" +
          std::to_string(stats.density.den) + " |\n";
    if (stats.concept_count) {
        md += "| Concepts | " + std::to_string(*stats.concept_count) + " |\n";
    }
    md += "\n## Concept Lattice\n\n";
    if (lattice_rendered) {
        md += "![Concept lattice of " + meta.title + "](lattice.svg)\n";
    } else {
        md += "_Omitted: concept enumeration exceeded the budget._\n";
    }
    return md;
}

std::string summary_page(const std::vector<SummaryRow>& rows) {
    std::string md = "# Contexts\n\n";
    md += "| File | Title | Language | Objects | Attributes | Incidences | Concepts |\n";
    md += "| --- | --- | --- | ---: | ---: | ---: | ---: |\n";
    for (const auto& row : rows) {
        md += "| [" + row.filename + "](" + row.stem + "/index.md) | " + row.title + " | " +
              row.language + " | " + std::to_string(row.stats.object_count) + " | " +
              std::to_string(row.stats.attribute_count) + " | " +
              std::to_string(row.stats.incidence_count) + " | " +
              (row.stats.concept_count ? std::to_string(*row.stats.concept_count)
                                       : std::string("-")) +
              " |\n";
    }
    return md;
}

int cmd_gen_derivatives(const std::string& root, const std::string& out_dir, std::size_t budget,
                        bool strict) {
    const fcarepo::ValidationReport report = fcarepo::validate_repository(root);
    if (!report.ok()) {
        std::cerr << fcarepo::report_to_text(report);
        return 1;
    }
    for (const auto& item : report.items) {
        std::cerr << "WARNING\t" << item.file << "\t" << item.message << "\n";
    }

    const std::string index_text =
        fcarepo::decode_text(read_file(fs::path(root) / "contexts.yaml"), "contexts.yaml");
    const fcarepo::RepositoryIndex index = fcarepo::parse_index(index_text);

    GenOutcome outcome;
    std::vector<SummaryRow> rows;
    for (const auto& [filename, meta] : index.entries) {
        const std::string stem = fs::path(filename).stem().string();
        const fs::path dir = fs::path(out_dir) / stem;
        const std::string text =
            fcarepo::decode_text(read_file(fs::path(root) / "contexts" / filename), filename);
        const fcarepo::FormalContext ctx = fcarepo::parse_burmeister(text, filename);
        fcarepo::ContextStatistics stats = fcarepo::compute_statistics(ctx);

        bool derived = true;
        std::vector<fcarepo::FormalConcept> concepts;
        std::vector<fcarepo::Implication> basis;
        try {
            concepts = fcarepo::enumerate_concepts(ctx, budget);
            basis = fcarepo::canonical_basis(ctx, budget);
        } catch (const fcarepo::BudgetExceededError& e) {
            std::cerr << "fcarepo: " << filename << ": " << e.what()
                      << "; skipping concept derivatives\n";
            outcome.budget_skipped = true;
            derived = false;
        }

        if (derived) {
            stats.concept_count = concepts.size();
            const auto lattice = fcarepo::build_lattice(concepts);
            const auto labels = fcarepo::reduced_labels(ctx, lattice);
            const auto layout = fcarepo::layout_layered(lattice);
            write_file_atomic(dir / "concepts.json", concepts_json(ctx, concepts).dump(2) + "\n");
            write_file_atomic(dir / "basis.json", basis_json(ctx, basis).dump(2) + "\n");
            write_file_atomic(dir / "lattice.svg", fcarepo::render_svg(lattice, layout, labels));
        }
        write_file_atomic(dir / "stats.json", stats_json(stats).dump(2) + "\n");
        write_file_atomic(dir / "index.md", derivative_page(filename, meta, stats, derived));
        rows.push_back({filename, stem, meta.title, meta.effective_language(), stats});
    }
    write_file_atomic(fs::path(out_dir) / "summary.md", summary_page(rows));
    return outcome.budget_skipped && strict ? 3 : 0;
}

fcarepo::RepoConfig make_config(const std::string& base_url, bool offline) {
    fcarepo::RepoConfig config = fcarepo::RepoConfig::from_environment();
    if (!base_url.empty()) config.base_url = base_url;
    config.offline = offline;
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Repository toolkit for formal contexts: parse, validate, convert, "
                 "analyze, and fetch Burmeister/CSV/JSON context files."};
    app.require_subcommand(1);

    bool json_mode = false;
    app.add_flag("--json", json_mode, "Machine-readable JSON output");

    std::string from_flag, to_flag, output_path, base_url;
    bool offline = false, strict = false;
    std::size_t budget = fcarepo::kDefaultConceptBudget;

    auto* validate = app.add_subcommand("validate", "Cross-check a repository tree");
    std::string validate_root;
    validate->add_option("root", validate_root, "Repository root directory")->required();
    validate->fallthrough();

    auto* convert = app.add_subcommand("convert", "Convert a context file between formats");
    std::string convert_input;
    convert->add_option("input", convert_input, "Input context file")->required();
    convert->add_option("--from", from_flag, "Input format: burmeister|csv|json");
    convert->add_option("--to", to_flag, "Output format: burmeister|csv|json");
    convert->add_option("--output", output_path, "Output file (default: stdout)");
    convert->fallthrough();

    auto* stats = app.add_subcommand("stats", "Context statistics");
    std::string stats_input;
    stats->add_option("input", stats_input, "Context file")->required();
    stats->add_option("--from", from_flag, "Input format: burmeister|csv|json");
    stats->add_option("--budget", budget, "Concept enumeration budget");
    stats->fallthrough();

    auto* concepts_cmd = app.add_subcommand("concepts", "Enumerate all formal concepts");
    std::string concepts_input;
    concepts_cmd->add_option("input", concepts_input, "Context file")->required();
    concepts_cmd->add_option("--from", from_flag, "Input format: burmeister|csv|json");
    concepts_cmd->add_option("--budget", budget, "Concept enumeration budget");
    concepts_cmd->add_option("--output", output_path, "Output file (default: stdout)");
    concepts_cmd->fallthrough();

    auto* basis_cmd = app.add_subcommand("basis", "Duquenne-Guigues implication basis");
    std::string basis_input;
    basis_cmd->add_option("input", basis_input, "Context file")->required();
    basis_cmd->add_option("--from", from_flag, "Input format: burmeister|csv|json");
    basis_cmd->add_option("--budget", budget, "Computation budget");
    basis_cmd->add_option("--output", output_path, "Output file (default: stdout)");
    basis_cmd->fallthrough();

    auto* lattice_cmd = app.add_subcommand("lattice", "Render the concept lattice diagram");
    std::string lattice_input;
    lattice_cmd->add_option("input", lattice_input, "Context file")->required();
    lattice_cmd->add_option("--from", from_flag, "Input format: burmeister|csv|json");
    lattice_cmd->add_option("--to", to_flag, "Diagram format: svg|dot (default svg)");
    lattice_cmd->add_option("--output", output_path, "Output file (default: stdout)");
    lattice_cmd->add_option("--budget", budget, "Concept enumeration budget");
    lattice_cmd->fallthrough();

    auto* gen = app.add_subcommand("gen-derivatives",
                                   "Generate the full derivative tree for a repository");
    std::string gen_root, gen_out;
    gen->add_option("root", gen_root, "Repository root directory")->required();
    gen->add_option("out", gen_out, "Output directory")->required();
    gen->add_option("--budget", budget, "Per-context computation budget");
    gen->add_flag("--strict", strict, "Exit 3 when any context exceeds the budget");
    gen->fallthrough();

    auto* fetch = app.add_subcommand("fetch", "Fetch a context file from the repository");
    std::string fetch_name;
    fetch->add_option("name", fetch_name, "Context name (stem, \".cxt\" optional)")->required();
    fetch->add_option("--output", output_path, "Output file (default: stdout)");
    fetch->add_option("--base-url", base_url, "Repository base URL");
    fetch->add_flag("--offline", offline, "Never touch the network; use the cache only");
    fetch->fallthrough();

    auto* list = app.add_subcommand("list", "List the contexts in the repository index");
    list->add_option("--base-url", base_url, "Repository base URL");
    list->add_flag("--offline", offline, "Never touch the network; use the cache only");
    list->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*validate) {
        return run_guarded([&] {
            const fcarepo::ValidationReport report = fcarepo::validate_repository(validate_root);
            std::cout << (json_mode ? fcarepo::report_to_json(report)
                                    : fcarepo::report_to_text(report));
            return report.ok() ? 0 : 1;
        });
    }
    if (*convert) {
        return run_guarded([&] {
            const fcarepo::ContextFormat from = require_format(from_flag, convert_input, "from");
            const fcarepo::ContextFormat to = require_format(to_flag, output_path, "to");
            const std::string name = fs::path(convert_input).filename().string();
            std::vector<fcarepo::ParseDiagnostic> warnings;
            const std::string result =
                fcarepo::convert(read_file(convert_input), from, to, name, &warnings);
            for (const auto& diagnostic : warnings) {
                std::cerr << name << ": " << fcarepo::to_string(diagnostic) << "\n";
            }
            write_output(output_path, result);
            return 0;
        });
    }
    if (*stats) {
        return run_guarded([&] {
            const fcarepo::FormalContext ctx = load_context_file(stats_input, from_flag);
            fcarepo::ContextStatistics s = fcarepo::compute_statistics(ctx);
            s.concept_count = fcarepo::enumerate_concepts(ctx, budget).size();
            std::cout << (json_mode ? stats_json(s).dump(2) + "\n" : stats_text(s));
            return 0;
        });
    }
    if (*concepts_cmd) {
        return run_guarded([&] {
            const fcarepo::FormalContext ctx = load_context_file(concepts_input, from_flag);
            const auto concepts = fcarepo::enumerate_concepts(ctx, budget);
            write_output(output_path, concepts_json(ctx, concepts).dump(2) + "\n");
            return 0;
        });
    }
    if (*basis_cmd) {
        return run_guarded([&] {
            const fcarepo::FormalContext ctx = load_context_file(basis_input, from_flag);
            const auto basis = fcarepo::canonical_basis(ctx, budget);
            write_output(output_path, basis_json(ctx, basis).dump(2) + "\n");
            return 0;
        });
    }
    if (*lattice_cmd) {
        return run_guarded([&] {
            const fcarepo::FormalContext ctx = load_context_file(lattice_input, from_flag);
            write_output(output_path, render_lattice(ctx, budget, to_flag));
            return 0;
        });
    }
    if (*gen) {
        return run_guarded([&] { return cmd_gen_derivatives(gen_root, gen_out, budget, strict); });
    }
    if (*fetch) {
        return run_guarded([&] {
            fcarepo::RepoClient client(make_config(base_url, offline));
            write_output(output_path, client.fetch_raw(fetch_name));
            return 0;
        });
    }
    if (*list) {
        return run_guarded([&] {
            fcarepo::RepoClient client(make_config(base_url, offline));
            const fcarepo::RepositoryIndex index = client.list_contexts();
            if (json_mode) {
                json out = json::array();
                for (const auto& [filename, meta] : index.entries) {
                    out.push_back({{"filename", filename},
                                   {"title", meta.title},
                                   {"language", meta.effective_language()}});
                }
                std::cout << out.dump(2) << "\n";
            } else {
                for (const auto& [filename, meta] : index.entries) {
                    std::cout << filename << "  " << meta.title << "  "
                              << meta.effective_language() << "\n";
                }
            }
            return 0;
        });
    }
    return 0;
}
