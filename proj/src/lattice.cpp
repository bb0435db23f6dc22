#include "fcarepo/lattice.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "fcarepo/errors.hpp"

namespace fcarepo {

ConceptLattice build_lattice(std::vector<FormalConcept> concepts) {
    if (concepts.empty()) {
        throw ContextError("cannot build a lattice from an empty concept list");
    }
    const std::size_t n = concepts.size();

    std::vector<std::size_t> by_intent(n);
    std::iota(by_intent.begin(), by_intent.end(), std::size_t{0});
    std::sort(by_intent.begin(), by_intent.end(), [&](std::size_t a, std::size_t b) {
        return lectic_less(concepts[a].intent, concepts[b].intent);
    });
    for (std::size_t i = 1; i < n; ++i) {
        if (concepts[by_intent[i - 1]].intent == concepts[by_intent[i]].intent) {
            throw ContextError("duplicate concept in lattice input");
        }
    }

    ConceptLattice lattice;
    lattice.concepts = std::move(concepts);
    const auto& cs = lattice.concepts;

    for (std::size_t i = 0; i < n; ++i) {
        if (cs[i].extent.count() > cs[lattice.top_index].extent.count()) lattice.top_index = i;
        if (cs[i].intent.count() > cs[lattice.bottom_index].intent.count())
            lattice.bottom_index = i;
    }

    // Candidates in descending extent size; ties broken by enumeration index
    // so the scan order (and with it nothing about the result, only the work
    // order) is deterministic.
    std::vector<std::size_t> by_size(n);
    std::iota(by_size.begin(), by_size.end(), std::size_t{0});
    std::sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
        const auto ca = cs[a].extent.count(), cb = cs[b].extent.count();
        return ca != cb ? ca > cb : a < b;
    });

    // For each upper concept, its covers are the maximal strictly-smaller
    // extents: walk candidates large-to-small and drop any contained in an
    // already accepted cover.
    std::vector<std::size_t> accepted;
    for (std::size_t u = 0; u < n; ++u) {
        accepted.clear();
        for (std::size_t v : by_size) {
            if (!cs[v].extent.is_proper_subset_of(cs[u].extent)) continue;
            bool dominated = false;
            for (std::size_t a : accepted) {
                if (cs[v].extent.is_subset_of(cs[a].extent)) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) {
                accepted.push_back(v);
                lattice.covers.emplace_back(v, u);
            }
        }
    }
    std::sort(lattice.covers.begin(), lattice.covers.end());
    return lattice;
}

DiagramLayout layout_layered(const ConceptLattice& lattice) {
    const std::size_t n = lattice.concepts.size();
    std::vector<std::vector<std::size_t>> uppers(n), lowers(n);
    for (const auto& [lo, up] : lattice.covers) {
        uppers[lo].push_back(up);
        lowers[up].push_back(lo);
    }

    // Longest-path rank from the top.  Processing in descending extent size
    // guarantees every upper neighbor is ranked first (covers strictly shrink
    // extents downward).
    std::vector<std::size_t> by_size(n);
    std::iota(by_size.begin(), by_size.end(), std::size_t{0});
    std::sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
        const auto ca = lattice.concepts[a].extent.count(),
                   cb = lattice.concepts[b].extent.count();
        return ca != cb ? ca > cb : a < b;
    });
    std::vector<std::size_t> rank(n, 0);
    for (std::size_t v : by_size) {
        for (std::size_t u : uppers[v]) {
            rank[v] = std::max(rank[v], rank[u] + 1);
        }
    }

    const std::size_t depth = n == 0 ? 0 : *std::max_element(rank.begin(), rank.end());
    std::vector<std::vector<std::size_t>> layers(depth + 1);
    for (std::size_t i = 0; i < n; ++i) layers[rank[i]].push_back(i); // index-ascending

    DiagramLayout layout;
    layout.x.assign(n, 0.0);
    layout.y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) layout.y[i] = static_cast<double>(rank[i]);
    for (auto& layer : layers) {
        for (std::size_t k = 0; k < layer.size(); ++k) {
            layout.x[layer[k]] = static_cast<double>(k);
        }
    }

    // A few fixed barycenter sweeps; deterministic via the enumeration-index
    // tie-break.
    auto sweep = [&](const std::vector<std::vector<std::size_t>>& neighbors) {
        for (auto& layer : layers) {
            std::vector<std::pair<double, std::size_t>> keyed;
            keyed.reserve(layer.size());
            for (std::size_t v : layer) {
                double bary = layout.x[v];
                if (!neighbors[v].empty()) {
                    double sum = 0.0;
                    for (std::size_t w : neighbors[v]) sum += layout.x[w];
                    bary = sum / static_cast<double>(neighbors[v].size());
                }
                keyed.emplace_back(bary, v);
            }
            std::sort(keyed.begin(), keyed.end());
            for (std::size_t k = 0; k < keyed.size(); ++k) {
                layer[k] = keyed[k].second;
                layout.x[layer[k]] = static_cast<double>(k);
            }
        }
    };
    sweep(uppers);
    sweep(lowers);
    sweep(uppers);
    sweep(lowers);

    for (auto& layer : layers) {
        const double shift = static_cast<double>(layer.size() - 1) / 2.0;
        for (std::size_t k = 0; k < layer.size(); ++k) {
            layout.x[layer[k]] = static_cast<double>(k) - shift;
        }
    }
    return layout;
}

DiagramLabels reduced_labels(const FormalContext& ctx, const ConceptLattice& lattice) {
    const std::size_t n = lattice.concepts.size();
    std::vector<std::vector<std::size_t>> attrs_at(n), objs_at(n);

    for (std::size_t j = 0; j < ctx.attribute_count(); ++j) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!lattice.concepts[i].intent.test(j)) continue;
            if (best == n ||
                lattice.concepts[i].extent.count() > lattice.concepts[best].extent.count()) {
                best = i;
            }
        }
        if (best < n) attrs_at[best].push_back(j);
    }
    for (std::size_t g = 0; g < ctx.object_count(); ++g) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!lattice.concepts[i].extent.test(g)) continue;
            if (best == n ||
                lattice.concepts[i].extent.count() < lattice.concepts[best].extent.count()) {
                best = i;
            }
        }
        if (best < n) objs_at[best].push_back(g);
    }

    DiagramLabels labels;
    labels.attributes_text.resize(n);
    labels.objects_text.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string a;
        for (std::size_t j : attrs_at[i]) {
            if (!a.empty()) a += ", ";
            a += ctx.attributes()[j];
        }
        labels.attributes_text[i] = std::move(a);
        std::string o;
        for (std::size_t g : objs_at[i]) {
            if (!o.empty()) o += ", ";
            o += ctx.objects()[g];
        }
        labels.objects_text[i] = std::move(o);
    }
    return labels;
}

namespace {

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.1f", value);
    return buffer;
}

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string dot_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '\\' || c == '"') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string render_svg(const ConceptLattice& lattice, const DiagramLayout& layout,
                       const DiagramLabels& labels) {
    const std::size_t n = lattice.concepts.size();
    const double ux = 90.0, uy = 80.0, margin = 50.0;

    double min_x = 0.0, max_x = 0.0, max_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        min_x = std::min(min_x, layout.x[i]);
        max_x = std::max(max_x, layout.x[i]);
        max_y = std::max(max_y, layout.y[i]);
    }
    const double width = (max_x - min_x) * ux + 2 * margin;
    const double height = max_y * uy + 2 * margin;
    auto px = [&](std::size_t i) { return margin + (layout.x[i] - min_x) * ux; };
    auto py = [&](std::size_t i) { return margin + layout.y[i] * uy; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (const auto& [lo, up] : lattice.covers) {
        svg += "  <line x1=\"" + fmt(px(up)) + "\" y1=\"" + fmt(py(up)) + "\" x2=\"" +
               fmt(px(lo)) + "\" y2=\"" + fmt(py(lo)) +
               "\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        svg += "  <circle cx=\"" + fmt(px(i)) + "\" cy=\"" + fmt(py(i)) +
               "\" r=\"6\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!labels.attributes_text[i].empty()) {
            svg += "  <text x=\"" + fmt(px(i)) + "\" y=\"" + fmt(py(i) - 12.0) +
                   "\" text-anchor=\"middle\" fill=\"#1a3d7a\">" +
                   xml_escape(labels.attributes_text[i]) + "</text>\n";
        }
        if (!labels.objects_text[i].empty()) {
            svg += "  <text x=\"" + fmt(px(i)) + "\" y=\"" + fmt(py(i) + 22.0) +
                   "\" text-anchor=\"middle\" fill=\"#205c20\">" +
                   xml_escape(labels.objects_text[i]) + "</text>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_dot(const ConceptLattice& lattice, const DiagramLabels* labels) {
    std::string dot = "digraph lattice {\n  rankdir=BT;\n  node [shape=circle];\n";
    for (std::size_t i = 0; i < lattice.concepts.size(); ++i) {
        dot += "  c" + std::to_string(i);
        if (labels) {
            std::string text = dot_escape(labels->attributes_text[i]);
            const std::string objects = dot_escape(labels->objects_text[i]);
            if (!objects.empty()) {
                if (!text.empty()) text += "\\n";
                text += objects;
            }
            dot += " [label=\"" + text + "\"]";
        }
        dot += ";\n";
    }
    for (const auto& [lo, up] : lattice.covers) {
        dot += "  c" + std::to_string(lo) + " -> c" + std::to_string(up) + ";\n";
    }
    dot += "}\n";
    return dot;
}

} // namespace fcarepo
