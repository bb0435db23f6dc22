#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcarepo {

enum class Severity { error, warning };

/// A single parser message with its 1-based source line.
struct ParseDiagnostic {
    Severity severity = Severity::error;
    std::size_t line = 1;
    std::string message;

    bool operator==(const ParseDiagnostic&) const = default;
};

std::string to_string(const ParseDiagnostic& diag);

/// Base class of all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Violated model invariant or out-of-range index.
class ContextError : public Error {
  public:
    using Error::Error;
};

/// Failed parse of a context file or metadata index. Carries at least one
/// error diagnostic; warnings collected before the failure are included.
class ParseError : public Error {
  public:
    ParseError(const std::string& source_name, std::vector<ParseDiagnostic> diagnostics);

    const std::vector<ParseDiagnostic>& diagnostics() const { return diagnostics_; }
    /// First diagnostic with severity error.
    const ParseDiagnostic& first_error() const;

  private:
    std::vector<ParseDiagnostic> diagnostics_;
};

/// Enumeration refused because it would exceed the configured budget.
class BudgetExceededError : public Error {
  public:
    BudgetExceededError(const std::string& message, std::size_t budget)
        : Error(message), budget_(budget) {}

    std::size_t budget() const { return budget_; }

  private:
    std::size_t budget_;
};

/// Local file system failure (unreadable directory, failed write).
class IoError : public Error {
  public:
    using Error::Error;
};

/// Remote repository access failure.
class RepoError : public Error {
  public:
    enum class Kind {
        network,      // transport failure, timeout, connection refused
        http_status,  // HTTP status >= 400 other than a missing context
        not_found,    // 404 for a named context
        offline,      // offline mode with a cold cache
        invalid_name, // requested name fails the filename convention
        bad_payload,  // served content failed validation
    };

    RepoError(Kind kind, const std::string& message, std::string url = {}, int status = 0,
              std::vector<std::string> suggestions = {})
        : Error(message), kind_(kind), url_(std::move(url)), status_(status),
          suggestions_(std::move(suggestions)) {}

    Kind kind() const { return kind_; }
    const std::string& url() const { return url_; }
    int status() const { return status_; }
    /// Nearest known context names, filled for not_found errors.
    const std::vector<std::string>& suggestions() const { return suggestions_; }

  private:
    Kind kind_;
    std::string url_;
    int status_;
    std::vector<std::string> suggestions_;
};

} // namespace fcarepo
