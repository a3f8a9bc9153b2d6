#include "vercheck/pipeline/report_io.hpp"

#include "vercheck/core/error.hpp"

#include <istream>

#include <fmt/format.h>

namespace vercheck::pipeline {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json field(const json& object, const char* key)
{
    auto it = object.find(key);
    if (it == object.end())
        throw ParseError(fmt::format("record is missing field '{}'", key));
    return *it;
}

ordered_json line_json(const ResponsibleLine& line)
{
    return ordered_json {
        { "file", line.file },
        { "line_no", line.line_no },
        { "origin_rev", line.origin_rev.label() },
        { "fix_rev", line.fix_rev.label() },
        { "content", line.content },
    };
}

ResponsibleLine line_from_json(const json& object)
{
    ResponsibleLine line;
    line.file = field(object, "file").get<std::string>();
    line.line_no = field(object, "line_no").get<std::uint64_t>();
    line.origin_rev = RevisionId::parse(field(object, "origin_rev").get<std::string>());
    line.fix_rev = RevisionId::parse(field(object, "fix_rev").get<std::string>());
    line.content = field(object, "content").get<std::string>();
    return line;
}

ordered_json marker_json(const AdditionOnlyMarker& marker)
{
    return ordered_json { { "file", marker.file }, { "pre_fix_rev", marker.pre_fix_rev.label() } };
}

AdditionOnlyMarker marker_from_json(const json& object)
{
    return { field(object, "file").get<std::string>(), RevisionId::parse(field(object, "pre_fix_rev").get<std::string>()) };
}

template<typename F>
auto guarded(const char* what, F&& f)
{
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("{} record: {}", what, e.what()));
    }
}

}

ordered_json to_json(const FixCommit& fix)
{
    return ordered_json {
        { "revision", fix.revision.label() },
        { "bug_ids", std::vector<BugId>(fix.bug_ids.begin(), fix.bug_ids.end()) },
        { "files", fix.files },
    };
}

FixCommit fix_commit_from_json(const json& object)
{
    return guarded("fix commit", [&] {
        FixCommit fix;
        fix.revision = RevisionId::parse(field(object, "revision").get<std::string>());
        for (auto id : field(object, "bug_ids"))
            fix.bug_ids.insert(id.get<BugId>());
        fix.files = field(object, "files").get<std::vector<std::string>>();
        return fix;
    });
}

ordered_json to_json(const BacktraceResult& trace)
{
    ordered_json object;
    object["fix_rev"] = trace.fix_rev.label();
    object["lines"] = ordered_json::array();
    for (const auto& line : trace.lines)
        object["lines"].push_back(line_json(line));
    object["markers"] = ordered_json::array();
    for (const auto& marker : trace.markers)
        object["markers"].push_back(marker_json(marker));
    object["warnings"] = trace.warnings;
    object["partial"] = trace.partial;
    return object;
}

BacktraceResult backtrace_from_json(const json& object)
{
    return guarded("trace", [&] {
        BacktraceResult trace;
        trace.fix_rev = RevisionId::parse(field(object, "fix_rev").get<std::string>());
        for (const auto& line : field(object, "lines"))
            trace.lines.push_back(line_from_json(line));
        for (const auto& marker : field(object, "markers"))
            trace.markers.push_back(marker_from_json(marker));
        trace.warnings = field(object, "warnings").get<std::vector<std::string>>();
        trace.partial = field(object, "partial").get<bool>();
        return trace;
    });
}

ordered_json to_json(const VerificationResult& result)
{
    ordered_json object;
    object["cve_id"] = result.cve_id;
    if (const auto* verified = std::get_if<Verified>(&result.status)) {
        object["status"] = "verified";
        object["reason"] = nullptr;
        auto& versions = object["verified_versions"] = ordered_json::array();
        for (const auto& v : verified->versions)
            versions.push_back(v.label());
    } else {
        object["status"] = "unverifiable";
        object["reason"] = std::string(to_string(std::get<Unverifiable>(result.status).reason));
        object["verified_versions"] = nullptr;
    }

    // One entry per matched line or marker, in first-seen order.
    std::vector<TraceItem> items;
    std::vector<ordered_json> matches;
    for (const auto& e : result.evidence) {
        auto it = std::find(items.begin(), items.end(), e.source);
        if (it == items.end()) {
            items.push_back(e.source);
            matches.push_back(ordered_json::array());
            it = std::prev(items.end());
        }
        auto& list = matches[static_cast<std::size_t>(it - items.begin())];
        if (std::holds_alternative<ResponsibleLine>(e.source))
            list.push_back(ordered_json { { "version", e.version.label() }, { "line_no", e.matched_line_no } });
        else
            list.push_back(ordered_json { { "version", e.version.label() } });
    }
    auto& evidence = object["evidence"] = ordered_json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
        ordered_json entry;
        if (const auto* line = std::get_if<ResponsibleLine>(&items[i])) {
            entry["kind"] = "line";
            entry.update(line_json(*line));
        } else {
            entry["kind"] = "addition_only";
            entry.update(marker_json(std::get<AdditionOnlyMarker>(items[i])));
        }
        entry["matches"] = std::move(matches[i]);
        evidence.push_back(std::move(entry));
    }
    object["warnings"] = result.warnings;
    return object;
}

VerificationResult verification_from_json(const json& object)
{
    return guarded("verification", [&] {
        VerificationResult result;
        result.cve_id = field(object, "cve_id").get<std::string>();
        auto status = field(object, "status").get<std::string>();
        if (status == "verified") {
            Verified verified;
            for (const auto& v : field(object, "verified_versions"))
                verified.versions.insert(VersionId::parse(v.get<std::string>()));
            result.status = std::move(verified);
        } else if (status == "unverifiable") {
            auto reason = field(object, "reason").get<std::string>();
            if (reason == "no_bug")
                result.status = Unverifiable { UnverifiableReason::no_bug };
            else if (reason == "no_commit")
                result.status = Unverifiable { UnverifiableReason::no_commit };
            else
                throw ParseError(fmt::format("{}: unknown unverifiable reason '{}'", result.cve_id, reason));
        } else {
            throw ParseError(fmt::format("{}: unknown status '{}'", result.cve_id, status));
        }

        // Rebuild version-major order: for each version, items in listed order.
        struct Match {
            VersionId version;
            std::size_t item;
            std::uint64_t line_no;
        };
        std::vector<Match> all;
        std::vector<TraceItem> items;
        for (const auto& entry : field(object, "evidence")) {
            auto kind = field(entry, "kind").get<std::string>();
            if (kind == "line")
                items.emplace_back(line_from_json(entry));
            else if (kind == "addition_only")
                items.emplace_back(marker_from_json(entry));
            else
                throw ParseError(fmt::format("{}: unknown evidence kind '{}'", result.cve_id, kind));
            for (const auto& match : field(entry, "matches"))
                all.push_back({ VersionId::parse(field(match, "version").get<std::string>()), items.size() - 1,
                    match.value("line_no", std::uint64_t { 0 }) });
        }
        std::stable_sort(all.begin(), all.end(), [](const Match& a, const Match& b) {
            if (a.version != b.version)
                return a.version < b.version;
            return a.item < b.item;
        });
        for (const auto& m : all)
            result.evidence.push_back({ m.version, items[m.item], m.line_no });
        result.warnings = field(object, "warnings").get<std::vector<std::string>>();
        return result;
    });
}

std::vector<json> read_json_lines(std::istream& in)
{
    std::vector<json> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ParseError(fmt::format("line {}: {}", line_no, e.what()));
        }
    }
    return records;
}

}
