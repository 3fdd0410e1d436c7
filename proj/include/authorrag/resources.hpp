// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include <filesystem>
#include <string>

namespace authorrag {

/// Directory with lexicons and prompt templates: $AUTHORRAG_DATA_DIR when
/// set, else the path baked in at configure time.
std::filesystem::path data_dir();

/// data_dir() / relative, throwing if the file is missing.
std::filesystem::path data_file(const std::filesystem::path& relative);

std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temp file and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace authorrag
