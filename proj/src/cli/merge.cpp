#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "quartic/cli.hpp"
#include "quartic/report.hpp"

namespace quartic::cli {

MergeResult merge_reports(const std::vector<std::string>& paths) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& p : paths) {
        const fs::path path(p);
        if (fs::is_directory(path)) {
            for (const auto& entry : fs::directory_iterator(path))
                if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
        } else if (fs::is_regular_file(path)) {
            files.push_back(path);
        } else {
            throw ConfigError("report-merge: no such file or directory: " + p);
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ConfigError("report-merge: no report files");

    MergeResult result;
    result.all_passed = true;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            result.reports.push_back(report_from_json(buf.str()));
        } catch (const DomainError& e) {
            throw ConfigError(f.string() + ": " + e.what());
        }
        result.all_passed = result.all_passed && result.reports.back().passed;
    }
    return result;
}

}  // namespace quartic::cli
