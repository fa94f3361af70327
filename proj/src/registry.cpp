// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#include "mmrt/registry.hpp"

#include "mmrt/errors.hpp"
#include "mmrt/hashing.hpp"
#include "mmrt/http_clients.hpp"
#include "mmrt/mocks.hpp"
#include "mmrt/toy_target.hpp"

namespace mmrt::gateway {

namespace {

std::string impl_of(const nlohmann::json& config) {
    if (!config.is_object() || !config.contains("impl")) {
        throw ConfigError("adapter config needs an \"impl\" field");
    }
    return config["impl"].get<std::string>();
}

std::string id_of(const nlohmann::json& config, const std::string& fallback) {
    return config.value("id", fallback);
}

std::uint64_t seed_of(const nlohmann::json& config, std::uint64_t master,
                      const std::string& label) {
    if (config.contains("seed")) return config["seed"].get<std::uint64_t>();
    return derive_seed(master, label);
}

std::vector<std::string> string_list(const nlohmann::json& config, const char* key,
                                     const std::vector<std::string>& fallback) {
    if (!config.contains(key)) return fallback;
    return config[key].get<std::vector<std::string>>();
}

HttpAdapterConfig http_config(const nlohmann::json& config) {
    HttpAdapterConfig http;
    http.base_url = config.value("base_url", std::string());
    if (http.base_url.empty()) throw ConfigError("http adapter needs base_url");
    http.chat_path = config.value("chat_path", http.chat_path);
    http.generate_path = config.value("generate_path", http.generate_path);
    http.api_key_env = config.value("api_key_env", std::string());
    http.timeout_seconds = config.value("timeout_seconds", http.timeout_seconds);
    return http;
}

}  // namespace

void AdapterRegistry::check_mutable() const {
    if (frozen_) throw ConfigError("adapter registry is frozen");
}

void AdapterRegistry::register_text_llm(const std::string& impl,
                                        Factory<TextLLM> factory) {
    check_mutable();
    text_llms_[impl] = std::move(factory);
}
void AdapterRegistry::register_multimodal_target(const std::string& impl,
                                                 Factory<MultimodalTarget> factory) {
    check_mutable();
    targets_[impl] = std::move(factory);
}
void AdapterRegistry::register_whitebox_target(const std::string& impl,
                                               Factory<WhiteBoxTarget> factory) {
    check_mutable();
    whitebox_[impl] = std::move(factory);
}
void AdapterRegistry::register_captioner(const std::string& impl,
                                         Factory<Captioner> factory) {
    check_mutable();
    captioners_[impl] = std::move(factory);
}
void AdapterRegistry::register_image_generator(const std::string& impl,
                                               Factory<ImageGenerator> factory) {
    check_mutable();
    generators_[impl] = std::move(factory);
}
void AdapterRegistry::register_binary_judge(const std::string& impl,
                                            Factory<BinaryHarmJudge> factory) {
    check_mutable();
    judges_[impl] = std::move(factory);
}
void AdapterRegistry::register_image_search(const std::string& impl,
                                            Factory<ImageSearchClient> factory) {
    check_mutable();
    searchers_[impl] = std::move(factory);
}
void AdapterRegistry::register_embedder(const std::string& impl,
                                        Factory<JointEmbedder> factory) {
    check_mutable();
    embedders_[impl] = std::move(factory);
}

template <typename Iface>
std::shared_ptr<Iface> AdapterRegistry::resolve_from(
    const std::map<std::string, Factory<Iface>>& table, const char* role_name,
    const nlohmann::json& config) const {
    const std::string impl = impl_of(config);
    const auto it = table.find(impl);
    if (it == table.end()) {
        throw UnknownAdapter(std::string(role_name) + ": no implementation \"" +
                             impl + "\" registered");
    }
    return it->second(config);
}

std::shared_ptr<TextLLM> AdapterRegistry::resolve_text_llm(
    const nlohmann::json& config) const {
    return resolve_from(text_llms_, "text_llm", config);
}
std::shared_ptr<MultimodalTarget> AdapterRegistry::resolve_multimodal_target(
    const nlohmann::json& config) const {
    return resolve_from(targets_, "multimodal_target", config);
}
std::shared_ptr<WhiteBoxTarget> AdapterRegistry::resolve_whitebox_target(
    const nlohmann::json& config) const {
    // Only differentiable adapters may register under this role; anything
    // else fails here, at resolution time.
    return resolve_from(whitebox_, "whitebox_target", config);
}
std::shared_ptr<Captioner> AdapterRegistry::resolve_captioner(
    const nlohmann::json& config) const {
    return resolve_from(captioners_, "captioner", config);
}
std::shared_ptr<ImageGenerator> AdapterRegistry::resolve_image_generator(
    const nlohmann::json& config) const {
    return resolve_from(generators_, "image_generator", config);
}
std::shared_ptr<BinaryHarmJudge> AdapterRegistry::resolve_binary_judge(
    const nlohmann::json& config) const {
    return resolve_from(judges_, "binary_judge", config);
}
std::shared_ptr<ImageSearchClient> AdapterRegistry::resolve_image_search(
    const nlohmann::json& config) const {
    return resolve_from(searchers_, "image_search", config);
}
std::shared_ptr<JointEmbedder> AdapterRegistry::resolve_embedder(
    const nlohmann::json& config) const {
    return resolve_from(embedders_, "embedder", config);
}

AdapterRegistry AdapterRegistry::with_builtins(std::uint64_t master_seed) {
    AdapterRegistry reg;

    reg.register_text_llm("scripted", [](const nlohmann::json& config) {
        return std::make_shared<ScriptedTextLLM>(
            config.value("script", std::vector<std::string>{}),
            id_of(config, "scripted-llm"));
    });
    reg.register_text_llm("rule", [master_seed](const nlohmann::json& config) {
        const std::string id = id_of(config, "rule-llm");
        return std::make_shared<RuleTextLLM>(
            persona_from_string(config.value("persona", std::string("generic"))),
            seed_of(config, master_seed, "text_llm:" + id), id,
            config.value("emit_count", 60));
    });
    reg.register_text_llm("http", [](const nlohmann::json& config) {
        return std::make_shared<HttpTextLLM>(http_config(config),
                                             id_of(config, "http-llm"));
    });

    reg.register_multimodal_target("scripted", [](const nlohmann::json& config) {
        return std::make_shared<ScriptedMultimodalTarget>(
            config.value("script", std::vector<std::string>{}),
            id_of(config, "scripted-target"));
    });
    reg.register_multimodal_target("procedural", [master_seed](const nlohmann::json& config) {
        const std::string id = id_of(config, "procedural-target");
        return std::make_shared<ProceduralMultimodalTarget>(
            seed_of(config, master_seed, "target:" + id), id,
            config.value("open_model", false));
    });
    reg.register_multimodal_target("http", [](const nlohmann::json& config) {
        return std::make_shared<HttpMultimodalTarget>(http_config(config),
                                                      id_of(config, "http-target"));
    });

    reg.register_whitebox_target("toy", [master_seed](const nlohmann::json& config) {
        const std::string id = id_of(config, "toy-target");
        ToyTarget::Params params;
        const std::string mode = config.value("mode", std::string("random_projection"));
        if (mode == "random_projection") {
            params.mode = ToyTarget::Mode::RandomProjection;
        } else if (mode == "mean_intensity") {
            params.mode = ToyTarget::Mode::MeanIntensity;
        } else if (mode == "constant") {
            params.mode = ToyTarget::Mode::Constant;
        } else {
            throw ConfigError("toy target: unknown mode " + mode);
        }
        params.seed = seed_of(config, master_seed, "whitebox:" + id);
        params.img_weight = config.value("img_weight", params.img_weight);
        params.text_weight = config.value("text_weight", params.text_weight);
        params.bias = config.value("bias", params.bias);
        params.constant_p = config.value("constant_p", params.constant_p);
        return std::make_shared<ToyTarget>(params, id);
    });

    reg.register_captioner("scripted", [](const nlohmann::json& config) {
        return std::make_shared<ScriptedCaptioner>(
            config.value("script", std::vector<std::string>{}),
            id_of(config, "scripted-captioner"));
    });
    reg.register_captioner("procedural", [master_seed](const nlohmann::json& config) {
        const std::string id = id_of(config, "procedural-captioner");
        return std::make_shared<ProceduralCaptioner>(
            seed_of(config, master_seed, "captioner:" + id), id);
    });

    reg.register_image_generator("procedural", [master_seed](const nlohmann::json& config) {
        const std::string id = id_of(config, "procedural-generator");
        return std::make_shared<ProceduralImageGenerator>(
            seed_of(config, master_seed, "generator:" + id),
            config.value("width", 256), config.value("height", 256), id,
            config.value("fail_on_call", 0));
    });

    reg.register_binary_judge("lexicon", [](const nlohmann::json& config) {
        return std::make_shared<LexiconJudge>(
            string_list(config, "harm_markers", LexiconJudge::default_harm_markers()),
            string_list(config, "refusal_markers",
                        LexiconJudge::default_refusal_markers()),
            id_of(config, "lexicon-judge"));
    });

    reg.register_image_search("procedural", [master_seed](const nlohmann::json& config) {
        const std::string id = id_of(config, "procedural-search");
        return std::make_shared<ProceduralImageSearch>(
            seed_of(config, master_seed, "search:" + id), config.value("count", 5),
            config.value("width", 96), config.value("height", 96), id);
    });
    reg.register_image_search("directory", [](const nlohmann::json& config) {
        if (!config.contains("root")) {
            throw ConfigError("directory search needs a root path");
        }
        return std::make_shared<DirectoryImageSearch>(
            config["root"].get<std::string>(), id_of(config, "directory-search"));
    });

    reg.register_embedder("procedural", [master_seed](const nlohmann::json& config) {
        const std::string id = id_of(config, "procedural-embedder");
        return std::make_shared<ProceduralEmbedder>(
            seed_of(config, master_seed, "embedder:" + id), config.value("dim", 16),
            id);
    });

    reg.freeze();
    return reg;
}

}  // namespace mmrt::gateway
