// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace authorrag {

using Sha256Bytes = std::array<std::uint8_t, 32>;

Sha256Bytes sha256(std::string_view data);

std::string sha256_hex(std::string_view data);

std::string to_hex(const Sha256Bytes& bytes);

} // namespace authorrag
