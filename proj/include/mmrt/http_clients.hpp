// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "mmrt/adapters.hpp"

namespace mmrt::gateway {

/// Connection settings for the thin live clients. Credentials are read from
/// the named environment variable, never from config files. These adapters
/// are excluded from the test suite and only constructed when a config
/// explicitly selects impl "http".
struct HttpAdapterConfig {
    std::string base_url;               // e.g. "http://localhost:8088"
    std::string chat_path = "/v1/chat";
    std::string generate_path = "/v1/generate";
    std::string api_key_env;            // name of the env var holding the key
    int timeout_seconds = 60;
};

/// POSTs {"messages": [{"role", "content"}...]} and expects {"content": "..."}.
class HttpTextLLM : public AdapterBase, public TextLLM {
public:
    HttpTextLLM(HttpAdapterConfig config, std::string id = "http-llm");
    std::string chat(const ChatHistory& history) override;

private:
    HttpAdapterConfig config_;
};

/// POSTs {"text": ..., "image": {"width", "height", "channels", "data_b64"}}
/// (base64 of the 8-bit raster bytes) and expects {"content": "..."}.
class HttpMultimodalTarget : public AdapterBase, public MultimodalTarget {
public:
    HttpMultimodalTarget(HttpAdapterConfig config, std::string id = "http-target");
    std::string generate(const std::optional<imaging::RasterImage>& image,
                         const std::string& text) override;

private:
    HttpAdapterConfig config_;
};

}  // namespace mmrt::gateway
