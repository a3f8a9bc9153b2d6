#include "vercheck/core/dataset_io.hpp"

#include "vercheck/core/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace vercheck {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open '{}'", path.string()));
    return in;
}

template<typename T>
T required(const json& object, const char* key, std::string_view context)
{
    auto it = object.find(key);
    if (it == object.end())
        throw ParseError(fmt::format("{}: missing field '{}'", context, key));
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("{}: field '{}': {}", context, key, e.what()));
    }
}

}

VersionCatalog parse_catalog(const json& document)
{
    if (!document.is_object())
        throw ParseError("catalog: expected a JSON object keyed by version");

    std::vector<CatalogEntry> entries;
    for (const auto& [label, value] : document.items()) {
        auto context = fmt::format("catalog entry '{}'", label);
        if (!value.is_object())
            throw ParseError(context + ": expected an object");
        CatalogEntry entry;
        entry.version = VersionId::parse(label);
        entry.release_date = Date::parse(required<std::string>(value, "release_date", context));
        entry.snapshot_rev = RevisionId::parse(required<std::string>(value, "snapshot_rev", context));
        entry.official = value.value("official", true);
        entries.push_back(std::move(entry));
    }
    return VersionCatalog(std::move(entries));
}

VersionCatalog load_catalog(const std::filesystem::path& path)
{
    auto in = open_input(path);
    try {
        return parse_catalog(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

nlohmann::ordered_json catalog_to_json(const VersionCatalog& catalog)
{
    nlohmann::ordered_json document = nlohmann::ordered_json::object();
    for (const auto& entry : catalog.entries()) {
        document[entry.version.label()] = {
            { "release_date", entry.release_date.to_string() },
            { "snapshot_rev", entry.snapshot_rev.label() },
            { "official", entry.official },
        };
    }
    return document;
}

CveRecord parse_cve_record(const json& object, const VersionCatalog& catalog)
{
    if (!object.is_object())
        throw ParseError("dataset record: expected a JSON object");

    CveRecord record;
    record.cve_id = required<std::string>(object, "cve_id", "dataset record");
    auto context = fmt::format("dataset record {}", record.cve_id);

    auto claimed = object.find("claimed_versions");
    if (claimed == object.end())
        throw ParseError(context + ": missing field 'claimed_versions'");
    if (claimed->is_array()) {
        for (const auto& label : *claimed)
            record.claimed_versions.insert(VersionId::parse(label.get<std::string>()));
    } else if (claimed->is_object() && claimed->contains("before")) {
        auto bound = VersionId::parse(claimed->at("before").get<std::string>());
        for (const auto& entry : catalog.official()) {
            if (entry.version < bound)
                record.claimed_versions.insert(entry.version);
        }
    } else {
        throw ParseError(context + ": 'claimed_versions' must be a list or {\"before\": ...}");
    }
    if (record.claimed_versions.empty())
        throw ParseError(context + ": claimed_versions is empty");

    if (auto bugs = object.find("bug_ids"); bugs != object.end()) {
        if (!bugs->is_array())
            throw ParseError(context + ": 'bug_ids' must be a list of integers");
        for (const auto& bug : *bugs) {
            if (!bug.is_number_unsigned())
                throw ParseError(context + ": bug id " + bug.dump() + " is not a non-negative integer");
            record.bug_ids.insert(bug.get<BugId>());
        }
    }
    if (auto published = object.find("published"); published != object.end() && !published->is_null())
        record.published = Date::parse(published->get<std::string>());
    return record;
}

Dataset parse_dataset(std::istream& in, const VersionCatalog& catalog)
{
    Dataset dataset;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        json object;
        try {
            object = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(fmt::format("dataset line {}: {}", line_no, e.what()));
        }
        auto record = parse_cve_record(object, catalog);
        if (!seen.insert(record.cve_id).second)
            throw ParseError(fmt::format("dataset line {}: duplicate cve_id {}", line_no, record.cve_id));
        dataset.push_back(std::move(record));
    }
    return dataset;
}

Dataset load_dataset(const std::filesystem::path& path, const VersionCatalog& catalog)
{
    auto in = open_input(path);
    return parse_dataset(in, catalog);
}

nlohmann::ordered_json cve_record_to_json(const CveRecord& record)
{
    nlohmann::ordered_json object;
    object["cve_id"] = record.cve_id;
    auto& claimed = object["claimed_versions"] = nlohmann::ordered_json::array();
    for (const auto& v : record.claimed_versions)
        claimed.push_back(v.label());
    object["bug_ids"] = std::vector<BugId>(record.bug_ids.begin(), record.bug_ids.end());
    if (record.published)
        object["published"] = record.published->to_string();
    return object;
}

void write_dataset(std::ostream& out, const Dataset& dataset)
{
    for (const auto& record : dataset)
        out << cve_record_to_json(record).dump() << '\n';
}

}
