#pragma once

#include <string>
#include <vector>

#include "fbmcf/config.hpp"
#include "fbmcf/flow.hpp"

namespace fbmcf {

struct FileManifest {
    std::vector<std::string> files;
};

// Writes frame_%06d.obj per emitted record, diagnostics.csv, summary.txt and
// run_config.cfg into the output directory (created if missing). Byte-level
// deterministic for a fixed result. Throws IoError naming the failing path.
FileManifest emit_outputs(const RunResult& result, const OutputOptions& opts,
                          const std::string& config_echo_text,
                          const std::vector<std::pair<std::string, std::string>>& summary);

// "key: value" lines.
std::string format_summary(const std::vector<std::pair<std::string, std::string>>& summary);

}  // namespace fbmcf
