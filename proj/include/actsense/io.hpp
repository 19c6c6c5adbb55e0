#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "actsense/clip.hpp"
#include "actsense/model.hpp"
#include "actsense/sensors.hpp"

namespace actsense {

inline const std::string kFormatVersion = "1.0";

// Malformed JSON. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Unsupported format_version (the major version must match).
class VersionMismatch : public Error {
public:
    using Error::Error;
};

/// A versioned file holding a world, a plan or an indistinguishability
/// constraint.
struct Document {
    std::string format_version = kFormatVersion;
    std::variant<World, Plan, IndistinguishabilityConstraint> body;

    // "world", "plan" or "constraint".
    std::string kind() const;
};

// Structural errors are InvariantViolation with a field path rooted at the
// document ("body.edges[1].actions[0]"). Throws ParseError, VersionMismatch.
Document parse_document(std::string_view text);
// Two-space indented JSON with a trailing newline; byte-deterministic.
std::string dump_document(const Document& document);

// Throws std::runtime_error-derived Error when the file cannot be read or
// written.
Document load(const std::filesystem::path& path);
void save(const Document& document, const std::filesystem::path& path);

// Load and require a particular kind; a wrong kind is an InvariantViolation
// on "kind".
World load_world(const std::filesystem::path& path);
Plan load_plan(const std::filesystem::path& path);
IndistinguishabilityConstraint load_constraint(const std::filesystem::path& path);

std::string export_dot(const World& world);
std::string export_dot(const Plan& plan);
// Initiating, plan and world layers as three clusters.
std::string export_dot(const IGraph& igraph);

} // namespace actsense
