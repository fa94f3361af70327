// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <ctime>
#include <string>

namespace mmrt {

/// UTC timestamp like 2026-01-31T12:34:56Z. Only manifests carry timestamps;
/// content files stay byte-reproducible.
inline std::string iso8601_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace mmrt
