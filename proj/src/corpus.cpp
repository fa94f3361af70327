// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#include "mmrt/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "mmrt/clock.hpp"
#include "mmrt/errors.hpp"
#include "mmrt/pointer_rewrite.hpp"
#include "mmrt/raster_io.hpp"
#include "mmrt/strings.hpp"

namespace mmrt::corpus {

std::string to_string(ScenarioCategory category) {
    switch (category) {
        case ScenarioCategory::Animal: return "animal";
        case ScenarioCategory::Financial: return "financial";
        case ScenarioCategory::Privacy: return "privacy";
        case ScenarioCategory::SelfHarm: return "self_harm";
        case ScenarioCategory::Violence: return "violence";
    }
    return "animal";
}

std::string display_name(ScenarioCategory category) {
    switch (category) {
        case ScenarioCategory::Animal: return "Animal";
        case ScenarioCategory::Financial: return "Financial";
        case ScenarioCategory::Privacy: return "Privacy";
        case ScenarioCategory::SelfHarm: return "Self-Harm";
        case ScenarioCategory::Violence: return "Violence";
    }
    return "Animal";
}

ScenarioCategory category_from_string(const std::string& name) {
    for (ScenarioCategory c : kAllCategories) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("unknown scenario category: " + name);
}

std::string to_string(KeywordKind kind) {
    switch (kind) {
        case KeywordKind::Object: return "object";
        case KeywordKind::Concept: return "concept";
        case KeywordKind::Behavior: return "behavior";
    }
    return "object";
}

KeywordKind keyword_kind_from_string(const std::string& name) {
    if (name == "object") return KeywordKind::Object;
    if (name == "concept") return KeywordKind::Concept;
    if (name == "behavior") return KeywordKind::Behavior;
    throw ConfigError("unknown keyword kind: " + name);
}

void to_json(nlohmann::json& j, const HarmfulInstruction& instruction) {
    j = nlohmann::json{{"id", instruction.id},
                       {"category", to_string(instruction.category)},
                       {"keyword", instruction.keyword},
                       {"keyword_kind", to_string(instruction.keyword_kind)},
                       {"text", instruction.text}};
    if (instruction.pointer_text) j["pointer_text"] = *instruction.pointer_text;
    if (instruction.image_ref) j["image_ref"] = *instruction.image_ref;
    if (instruction.typography_ref) j["typography_ref"] = *instruction.typography_ref;
    if (instruction.opt_image_ref) j["opt_image_ref"] = *instruction.opt_image_ref;
}

void from_json(const nlohmann::json& j, HarmfulInstruction& instruction) {
    instruction.id = j.at("id").get<std::string>();
    instruction.category = category_from_string(j.at("category").get<std::string>());
    instruction.keyword = j.at("keyword").get<std::string>();
    instruction.keyword_kind =
        keyword_kind_from_string(j.at("keyword_kind").get<std::string>());
    instruction.text = j.at("text").get<std::string>();
    if (j.contains("pointer_text")) instruction.pointer_text = j["pointer_text"];
    if (j.contains("image_ref")) instruction.image_ref = j["image_ref"];
    if (j.contains("typography_ref")) instruction.typography_ref = j["typography_ref"];
    if (j.contains("opt_image_ref")) instruction.opt_image_ref = j["opt_image_ref"];
}

namespace {

std::vector<std::string> parse_item_list(const std::string& reply) {
    std::vector<std::string> items;
    for (const auto& line : split_lines(reply)) {
        const std::string item = strip_list_marker(line);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

std::string render_prompt(std::string payload, ScenarioCategory category) {
    return replace_all(std::move(payload), "{category}", display_name(category));
}

}  // namespace

std::vector<std::string> generate_keywords(ScenarioCategory category,
                                           gateway::TextLLM& llm, int count,
                                           const std::string& prompt_payload,
                                           int retry_budget) {
    if (count < 1) throw std::invalid_argument("generate_keywords: count must be >= 1");

    const std::string prompt = replace_all(render_prompt(prompt_payload, category),
                                           "{count}", std::to_string(count));
    std::vector<std::string> keywords;
    std::set<std::string> seen;  // lowercase dedup keys
    std::string last_adapter_error;

    for (int attempt = 0; attempt <= retry_budget; ++attempt) {
        std::string reply;
        try {
            auto lock = llm.acquire();
            reply = llm.chat({{"user", prompt}});
        } catch (const AdapterError& e) {
            last_adapter_error = e.what();
            continue;
        }
        for (const auto& item : parse_item_list(reply)) {
            const std::string key = to_lower(item);
            if (seen.insert(key).second) keywords.push_back(item);
            if (static_cast<int>(keywords.size()) == count) return keywords;
        }
    }
    if (!last_adapter_error.empty() && keywords.empty()) {
        throw AdapterError("generate_keywords(" + to_string(category) +
                           "): model failed after retries: " + last_adapter_error);
    }
    throw FormatError("generate_keywords(" + to_string(category) + "): only " +
                      std::to_string(keywords.size()) + "/" + std::to_string(count) +
                      " distinct keywords after retry budget");
}

std::vector<std::string> generate_instructions(const std::string& keyword,
                                               ScenarioCategory category,
                                               gateway::TextLLM& llm,
                                               const std::string& prompt_payload,
                                               int retry_budget) {
    if (trim(keyword).empty()) {
        throw std::invalid_argument("generate_instructions: keyword must be nonempty");
    }
    const std::string prompt = replace_all(
        render_prompt(prompt_payload, category), "{keyword}", keyword);

    std::vector<std::string> accepted;
    for (int attempt = 0; attempt <= retry_budget; ++attempt) {
        std::string reply;
        {
            auto lock = llm.acquire();
            reply = llm.chat({{"user", prompt}});
        }
        const auto items = parse_item_list(reply);
        if (items.size() != 3) {
            throw FormatError("generate_instructions(" + keyword + "): expected 3 items, got " +
                              std::to_string(items.size()));
        }
        for (const auto& item : items) {
            if (!contains_ci(item, keyword)) continue;  // regenerate failures
            if (std::find(accepted.begin(), accepted.end(), item) != accepted.end()) {
                continue;
            }
            accepted.push_back(item);
            if (accepted.size() == 3) return accepted;
        }
    }
    throw FormatError("generate_instructions(" + keyword +
                      "): containment/distinctness unsatisfied after retry budget");
}

std::vector<imaging::RasterImage> retrieve_images(
    const std::string& keyword, gateway::ImageSearchClient& search, int n,
    std::vector<std::string>* decode_failures) {
    if (n < 1) throw std::invalid_argument("retrieve_images: n must be >= 1");
    std::vector<std::vector<std::uint8_t>> blobs;
    {
        auto lock = search.acquire();
        blobs = search.search(keyword, n);
    }
    std::vector<imaging::RasterImage> images;
    for (std::size_t i = 0; i < blobs.size() && static_cast<int>(images.size()) < n; ++i) {
        try {
            images.push_back(imaging::decode_ppm(blobs[i]));
        } catch (const DecodeError& e) {
            if (decode_failures) {
                decode_failures->push_back(keyword + "[" + std::to_string(i) +
                                           "]: " + e.what());
            }
        }
    }
    return images;
}

namespace {

std::vector<double> unit_normalize(std::vector<double> v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return v;
}

}  // namespace

const imaging::RasterImage& select_best_image(
    const std::string& keyword, std::span<const imaging::RasterImage> candidates,
    gateway::JointEmbedder& embedder) {
    if (candidates.empty()) throw EmptyInput("select_best_image: no candidates");

    std::vector<double> text_vec;
    {
        auto lock = embedder.acquire();
        text_vec = unit_normalize(embedder.embed_text(keyword));
    }
    std::size_t best_index = 0;
    double best_score = -2.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        std::vector<double> image_vec;
        {
            auto lock = embedder.acquire();
            image_vec = unit_normalize(embedder.embed_image(candidates[i]));
        }
        if (image_vec.size() != text_vec.size()) {
            throw ShapeError("select_best_image: embedding dimensions disagree");
        }
        double score = 0.0;
        for (std::size_t d = 0; d < text_vec.size(); ++d) {
            score += text_vec[d] * image_vec[d];
        }
        if (score > best_score) {  // strict: ties keep the lowest index
            best_score = score;
            best_index = i;
        }
    }
    return candidates[best_index];
}

namespace {

std::string record_id(ScenarioCategory category, int keyword_index,
                      int instruction_index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s-%02d-%d", to_string(category).c_str(),
                  keyword_index, instruction_index);
    return buf;
}

template <typename Fn>
void rethrow_with_context(const std::string& context, Fn&& fn) {
    try {
        fn();
    } catch (const AdapterError& e) {
        throw AdapterError(context + ": " + e.what());
    } catch (const FormatError& e) {
        throw FormatError(context + ": " + e.what());
    }
}

}  // namespace

Corpus build_corpus(const CorpusBuildConfig& config, const CorpusModels& models,
                    const std::filesystem::path& base_dir) {
    if (!models.keyword_llm || !models.instruction_llm) {
        throw ConfigError("build_corpus: keyword and instruction models are required");
    }
    if (config.instructions_per_keyword != 3) {
        throw ConfigError("build_corpus: the corpus contract fixes 3 instructions per keyword");
    }

    const std::filesystem::path corpus_dir = base_dir / "corpus";
    const std::filesystem::path image_dir = corpus_dir / "images";
    std::filesystem::create_directories(image_dir);

    Corpus corpus;
    nlohmann::json ledger = nlohmann::json::array();

    auto persist = [&](const std::string& status) {
        write_corpus_file(corpus_dir / "corpus.jsonl", corpus.instructions);
        corpus.manifest = nlohmann::json{
            {"built_at", iso8601_now()},
            {"seed", config.seed},
            {"status", status},
            {"records", corpus.instructions.size()},
            {"target_counts",
             {{"categories", config.categories.size()},
              {"keywords_per_category", config.keywords_per_category},
              {"instructions_per_keyword", config.instructions_per_keyword}}},
            {"model_ids",
             {{"keyword_llm", models.keyword_llm->descriptor().id},
              {"instruction_llm", models.instruction_llm->descriptor().id},
              {"search", models.search ? models.search->descriptor().id : ""},
              {"embedder", models.embedder ? models.embedder->descriptor().id : ""}}},
            {"failure_ledger", ledger}};
        std::ofstream out(corpus_dir / "manifest.json", std::ios::trunc);
        out << corpus.manifest.dump(2) << "\n";
    };

    try {
        for (ScenarioCategory category : config.categories) {
            std::vector<std::string> keywords;
            rethrow_with_context("keywords for " + to_string(category), [&] {
                keywords = generate_keywords(category, *models.keyword_llm,
                                             config.keywords_per_category,
                                             config.keyword_prompt,
                                             config.retry_budget);
            });

            for (std::size_t ki = 0; ki < keywords.size(); ++ki) {
                const std::string& keyword = keywords[ki];

                std::optional<std::string> image_ref;
                if (models.search && models.embedder) {
                    std::vector<std::string> decode_failures;
                    try {
                        const auto candidates =
                            retrieve_images(keyword, *models.search,
                                            config.images_per_keyword, &decode_failures);
                        for (const auto& failure : decode_failures) {
                            ledger.push_back({{"context", "decode:" + keyword},
                                              {"error", failure}});
                        }
                        if (!candidates.empty()) {
                            const auto& best =
                                select_best_image(keyword, candidates, *models.embedder);
                            char name[64];
                            std::snprintf(name, sizeof name, "%s-%02zu.ppm",
                                          to_string(category).c_str(), ki);
                            imaging::write_raster(image_dir / name, best);
                            image_ref = "corpus/images/" + std::string(name);
                        } else {
                            ledger.push_back({{"context", "search:" + keyword},
                                              {"error", "no decodable results"}});
                        }
                    } catch (const AdapterError& e) {
                        // Image side failures are non-fatal: the record ships
                        // without an image_ref.
                        ledger.push_back(
                            {{"context", "search:" + keyword}, {"error", e.what()}});
                    }
                }

                std::vector<std::string> texts;
                rethrow_with_context("instructions for '" + keyword + "'", [&] {
                    texts = generate_instructions(keyword, category,
                                                  *models.instruction_llm,
                                                  config.instruction_prompt,
                                                  config.retry_budget);
                });

                const KeywordKind kind =
                    models.lexicon ? models.lexicon->classify(keyword)
                                   : pointer::heuristic_kind(keyword);
                for (int j = 0; j < 3; ++j) {
                    HarmfulInstruction instruction;
                    instruction.id = record_id(category, static_cast<int>(ki), j);
                    instruction.category = category;
                    instruction.keyword = keyword;
                    instruction.keyword_kind = kind;
                    instruction.text = texts[static_cast<std::size_t>(j)];
                    instruction.image_ref = image_ref;
                    corpus.instructions.push_back(std::move(instruction));
                }
            }
        }
    } catch (...) {
        persist("failed");
        throw;
    }

    persist("ok");
    return corpus;
}

void write_corpus_file(const std::filesystem::path& path,
                       std::span<const HarmfulInstruction> instructions) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw Error("cannot open for write: " + path.string());
    for (const auto& instruction : instructions) {
        out << nlohmann::json(instruction).dump() << "\n";
    }
}

std::vector<HarmfulInstruction> read_corpus_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file: " + path.string());
    std::vector<HarmfulInstruction> instructions;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        instructions.push_back(nlohmann::json::parse(line).get<HarmfulInstruction>());
    }
    return instructions;
}

}  // namespace mmrt::corpus
