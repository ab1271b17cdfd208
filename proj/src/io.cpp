#include "fbmcf/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

namespace fbmcf {

namespace fs = std::filesystem;

std::string format_summary(const std::vector<std::pair<std::string, std::string>>& summary) {
    std::string out;
    for (const auto& [k, v] : summary) out += k + ": " + v + "\n";
    return out;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace

FileManifest emit_outputs(const RunResult& result, const OutputOptions& opts,
                          const std::string& config_echo_text,
                          const std::vector<std::pair<std::string, std::string>>& summary) {
    FileManifest manifest;
    std::error_code ec;
    fs::create_directories(opts.directory, ec);
    if (ec || !fs::is_directory(opts.directory))
        throw IoError("cannot create output directory " + opts.directory);

    if (opts.frame_every > 0) {
        for (std::size_t i = 0; i < result.frames.size(); ++i) {
            if (i % static_cast<std::size_t>(opts.frame_every) != 0 &&
                i + 1 != result.frames.size())
                continue;
            char name[64];
            std::snprintf(name, sizeof(name), "frame_%06zu.obj", i);
            const std::string path = (fs::path(opts.directory) / name).string();
            save_obj(result.frames[i], path);
            manifest.files.push_back(path);
        }
    }

    std::string csv = std::string(kDiagnosticsCsvHeader) + "\n";
    for (const auto& r : result.records) csv += record_csv_row(r) + "\n";
    const std::string csv_path = (fs::path(opts.directory) / "diagnostics.csv").string();
    write_file(csv_path, csv);
    manifest.files.push_back(csv_path);

    const std::string summary_path = (fs::path(opts.directory) / "summary.txt").string();
    write_file(summary_path, format_summary(summary));
    manifest.files.push_back(summary_path);

    const std::string cfg_path = (fs::path(opts.directory) / "run_config.cfg").string();
    write_file(cfg_path, config_echo_text);
    manifest.files.push_back(cfg_path);

    return manifest;
}

}  // namespace fbmcf
