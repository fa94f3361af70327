// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "mmrt/adapters.hpp"

namespace mmrt::gateway {

/// Maps (role, impl name) to adapter factories. Built once at startup from
/// configuration and immutable afterwards; resolution of an unregistered
/// implementation raises UnknownAdapter.
class AdapterRegistry {
public:
    template <typename Iface>
    using Factory = std::function<std::shared_ptr<Iface>(const nlohmann::json&)>;

    void register_text_llm(const std::string& impl, Factory<TextLLM> factory);
    void register_multimodal_target(const std::string& impl,
                                    Factory<MultimodalTarget> factory);
    void register_whitebox_target(const std::string& impl,
                                  Factory<WhiteBoxTarget> factory);
    void register_captioner(const std::string& impl, Factory<Captioner> factory);
    void register_image_generator(const std::string& impl,
                                  Factory<ImageGenerator> factory);
    void register_binary_judge(const std::string& impl,
                               Factory<BinaryHarmJudge> factory);
    void register_image_search(const std::string& impl,
                               Factory<ImageSearchClient> factory);
    void register_embedder(const std::string& impl, Factory<JointEmbedder> factory);

    /// No further registrations accepted once frozen.
    void freeze() { frozen_ = true; }

    /// Each resolve reads config["impl"] and forwards the whole section to
    /// the factory.
    std::shared_ptr<TextLLM> resolve_text_llm(const nlohmann::json& config) const;
    std::shared_ptr<MultimodalTarget> resolve_multimodal_target(
        const nlohmann::json& config) const;
    std::shared_ptr<WhiteBoxTarget> resolve_whitebox_target(
        const nlohmann::json& config) const;
    std::shared_ptr<Captioner> resolve_captioner(const nlohmann::json& config) const;
    std::shared_ptr<ImageGenerator> resolve_image_generator(
        const nlohmann::json& config) const;
    std::shared_ptr<BinaryHarmJudge> resolve_binary_judge(
        const nlohmann::json& config) const;
    std::shared_ptr<ImageSearchClient> resolve_image_search(
        const nlohmann::json& config) const;
    std::shared_ptr<JointEmbedder> resolve_embedder(const nlohmann::json& config) const;

    /// Registry with every built-in mock/procedural implementation plus the
    /// config-gated live HTTP clients, already frozen. `master_seed` feeds
    /// every adapter that draws randomness unless its config overrides it.
    static AdapterRegistry with_builtins(std::uint64_t master_seed);

private:
    void check_mutable() const;

    template <typename Iface>
    std::shared_ptr<Iface> resolve_from(
        const std::map<std::string, Factory<Iface>>& table, const char* role_name,
        const nlohmann::json& config) const;

    bool frozen_ = false;
    std::map<std::string, Factory<TextLLM>> text_llms_;
    std::map<std::string, Factory<MultimodalTarget>> targets_;
    std::map<std::string, Factory<WhiteBoxTarget>> whitebox_;
    std::map<std::string, Factory<Captioner>> captioners_;
    std::map<std::string, Factory<ImageGenerator>> generators_;
    std::map<std::string, Factory<BinaryHarmJudge>> judges_;
    std::map<std::string, Factory<ImageSearchClient>> searchers_;
    std::map<std::string, Factory<JointEmbedder>> embedders_;
};

}  // namespace mmrt::gateway
