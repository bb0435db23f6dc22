#include "fcarepo/errors.hpp"

namespace fcarepo {

std::string to_string(const ParseDiagnostic& diag) {
    std::string out = diag.severity == Severity::error ? "error" : "warning";
    out += ": line " + std::to_string(diag.line) + ": " + diag.message;
    return out;
}

namespace {

std::string summarize(const std::string& source_name, const std::vector<ParseDiagnostic>& diags) {
    for (const auto& d : diags) {
        if (d.severity == Severity::error) {
            return source_name + ": line " + std::to_string(d.line) + ": " + d.message;
        }
    }
    return source_name + ": parse failed";
}

} // namespace

ParseError::ParseError(const std::string& source_name, std::vector<ParseDiagnostic> diagnostics)
    : Error(summarize(source_name, diagnostics)), diagnostics_(std::move(diagnostics)) {}

const ParseDiagnostic& ParseError::first_error() const {
    for (const auto& d : diagnostics_) {
        if (d.severity == Severity::error) return d;
    }
    return diagnostics_.front();
}

} // namespace fcarepo
