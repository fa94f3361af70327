// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#include "mmrt/http_clients.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mmrt/errors.hpp"

namespace mmrt::gateway {

namespace {

AdapterDescriptor http_descriptor(std::string id, AdapterRole role) {
    AdapterDescriptor d;
    d.id = std::move(id);
    d.role = role;
    d.concurrency = Concurrency::Safe;
    return d;
}

std::string base64_encode(const unsigned char* data, std::size_t len) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        unsigned int chunk = static_cast<unsigned int>(data[i]) << 16;
        if (i + 1 < len) chunk |= static_cast<unsigned int>(data[i + 1]) << 8;
        if (i + 2 < len) chunk |= static_cast<unsigned int>(data[i + 2]);
        out.push_back(alphabet[(chunk >> 18) & 0x3f]);
        out.push_back(alphabet[(chunk >> 12) & 0x3f]);
        out.push_back(i + 1 < len ? alphabet[(chunk >> 6) & 0x3f] : '=');
        out.push_back(i + 2 < len ? alphabet[chunk & 0x3f] : '=');
    }
    return out;
}

httplib::Headers auth_headers(const HttpAdapterConfig& config) {
    httplib::Headers headers;
    if (!config.api_key_env.empty()) {
        if (const char* key = std::getenv(config.api_key_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }
    return headers;
}

std::string post_json(const HttpAdapterConfig& config, const std::string& path,
                      const nlohmann::json& body, const std::string& id) {
    httplib::Client client(config.base_url);
    client.set_read_timeout(config.timeout_seconds, 0);
    client.set_connection_timeout(config.timeout_seconds, 0);
    auto res = client.Post(path, auth_headers(config), body.dump(),
                           "application/json");
    if (!res) {
        if (httplib::to_string(res.error()).find("timeout") != std::string::npos) {
            throw TimeoutError(id + ": request timed out");
        }
        throw AdapterError(id + ": transport error: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw AdapterError(id + ": http status " + std::to_string(res->status));
    }
    const auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("content")) {
        throw AdapterError(id + ": malformed response body");
    }
    const std::string content = parsed["content"].get<std::string>();
    if (content.empty()) throw AdapterError(id + ": empty completion");
    return content;
}

}  // namespace

HttpTextLLM::HttpTextLLM(HttpAdapterConfig config, std::string id)
    : AdapterBase(http_descriptor(std::move(id), AdapterRole::TextLlm)),
      config_(std::move(config)) {}

std::string HttpTextLLM::chat(const ChatHistory& history) {
    if (history.empty()) throw EmptyInput("chat: history is empty");
    nlohmann::json body;
    body["messages"] = nlohmann::json::array();
    for (const auto& msg : history) {
        body["messages"].push_back({{"role", msg.role}, {"content", msg.content}});
    }
    return post_json(config_, config_.chat_path, body, descriptor_.id);
}

HttpMultimodalTarget::HttpMultimodalTarget(HttpAdapterConfig config, std::string id)
    : AdapterBase(http_descriptor(std::move(id), AdapterRole::MultimodalTarget)),
      config_(std::move(config)) {}

std::string HttpMultimodalTarget::generate(
    const std::optional<imaging::RasterImage>& image, const std::string& text) {
    if (text.empty()) throw EmptyInput("generate: text is empty");
    nlohmann::json body;
    body["text"] = text;
    if (image) {
        std::vector<unsigned char> quantized;
        quantized.reserve(image->pixels.size());
        for (double v : image->pixels) {
            const double clamped = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
            quantized.push_back(static_cast<unsigned char>(clamped * 255.0 + 0.5));
        }
        body["image"] = {{"width", image->width},
                         {"height", image->height},
                         {"channels", image->channels},
                         {"data_b64", base64_encode(quantized.data(), quantized.size())}};
    }
    return post_json(config_, config_.generate_path, body, descriptor_.id);
}

}  // namespace mmrt::gateway
