#pragma once

#include <filesystem>
#include <string>

namespace vercheck::synth {

struct Table1Fixture {
    std::filesystem::path repo;
    std::filesystem::path dataset_path;
    std::filesystem::path catalog_path;
};

/// Builds a small repository with Subversion-style revision numbers that
/// reconstructs three Chrome cases: CVE-2011-2822 (bug 72492, fixed in
/// r95731, responsible line 542 from r15), CVE-2011-4080 (bug 68115, fixed in
/// r70413, lines 352/353 from r26072/r53193) and CVE-2012-1521 (bug 117110,
/// no fix commit). Versions 1.0 to 18.0 with their release dates.
Table1Fixture build_table1_fixture(const std::filesystem::path& workdir, const std::string& git = "git");

}
