// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/resources.hpp"

#include "authorrag/error.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace authorrag {

std::filesystem::path data_dir() {
    if (const char* env = std::getenv("AUTHORRAG_DATA_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return AUTHORRAG_DEFAULT_DATA_DIR;
}

std::filesystem::path data_file(const std::filesystem::path& relative) {
    auto path = data_dir() / relative;
    if (!std::filesystem::exists(path)) {
        throw Error("missing data file: " + path.string() + " (set AUTHORRAG_DATA_DIR)");
    }
    return path;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    static std::atomic<unsigned long> counter{0};
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ostringstream tmp_name;
    tmp_name << path.filename().string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
             << counter.fetch_add(1);
    const auto tmp = path.parent_path() / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw Error("short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace authorrag
