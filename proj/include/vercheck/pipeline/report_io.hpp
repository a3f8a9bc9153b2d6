#pragma once

#include "vercheck/core/verification.hpp"
#include "vercheck/pipeline/backtrace.hpp"
#include "vercheck/pipeline/mining.hpp"

#include <iosfwd>
#include <json.hpp>
#include <vector>

namespace vercheck::pipeline {

// JSON-lines records for the stage artifacts. Field layouts are documented
// in docs/formats.md.

nlohmann::ordered_json to_json(const FixCommit& fix);
FixCommit fix_commit_from_json(const nlohmann::json& object);

nlohmann::ordered_json to_json(const BacktraceResult& trace);
BacktraceResult backtrace_from_json(const nlohmann::json& object);

nlohmann::ordered_json to_json(const VerificationResult& result);
VerificationResult verification_from_json(const nlohmann::json& object);

template<typename T>
void write_json_lines(std::ostream& out, const std::vector<T>& items)
{
    for (const auto& item : items)
        out << to_json(item).dump() << '\n';
}

/// Parses every non-blank line as JSON; throws ParseError with the line number.
std::vector<nlohmann::json> read_json_lines(std::istream& in);

}
