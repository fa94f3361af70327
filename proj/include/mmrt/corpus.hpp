// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmrt/adapters.hpp"

namespace mmrt::pointer {
class KeywordLexicon;
}

namespace mmrt::corpus {

/// The five harm scenarios the corpus covers. Serialized names are stable.
enum class ScenarioCategory { Animal, Financial, Privacy, SelfHarm, Violence };

inline constexpr ScenarioCategory kAllCategories[] = {
    ScenarioCategory::Animal, ScenarioCategory::Financial,
    ScenarioCategory::Privacy, ScenarioCategory::SelfHarm,
    ScenarioCategory::Violence};

std::string to_string(ScenarioCategory category);
std::string display_name(ScenarioCategory category);
ScenarioCategory category_from_string(const std::string& name);

enum class KeywordKind { Object, Concept, Behavior };

std::string to_string(KeywordKind kind);
KeywordKind keyword_kind_from_string(const std::string& name);

/// One corpus record: a category/keyword/instruction triple plus the asset
/// references attached by later pipeline stages.
struct HarmfulInstruction {
    std::string id;
    ScenarioCategory category = ScenarioCategory::Animal;
    std::string keyword;
    KeywordKind keyword_kind = KeywordKind::Object;
    std::string text;                            // original instruction, contains keyword
    std::optional<std::string> pointer_text;     // rewritten instruction
    std::optional<std::string> image_ref;        // selected real-world image
    std::optional<std::string> typography_ref;   // rendered keyword image
    std::optional<std::string> opt_image_ref;    // amplified image selection
};

void to_json(nlohmann::json& j, const HarmfulInstruction& instruction);
void from_json(const nlohmann::json& j, HarmfulInstruction& instruction);

struct Corpus {
    std::vector<HarmfulInstruction> instructions;
    nlohmann::json manifest;  // build metadata: model ids, timestamps, seed, ledger
};

// ---------------------------------------------------------------------------
// Build operations
// ---------------------------------------------------------------------------

/// Requests `count` keywords for a category and returns exactly that many
/// distinct, nonempty, trimmed entries. Duplicate or unparsable replies are
/// re-requested up to `retry_budget` extra calls; FormatError when the list
/// still cannot be completed, AdapterError when the model keeps failing.
std::vector<std::string> generate_keywords(ScenarioCategory category,
                                           gateway::TextLLM& llm, int count,
                                           const std::string& prompt_payload,
                                           int retry_budget = 3);

/// Returns exactly 3 pairwise-distinct texts, each containing the keyword
/// case-insensitively. A reply that does not parse into exactly 3 items is a
/// FormatError; containment misses are regenerated within the budget.
std::vector<std::string> generate_instructions(const std::string& keyword,
                                               ScenarioCategory category,
                                               gateway::TextLLM& llm,
                                               const std::string& prompt_payload,
                                               int retry_budget = 3);

/// Fetches up to `n` images for the keyword and decodes them; undecodable
/// results are skipped and reported through `decode_failures`.
std::vector<imaging::RasterImage> retrieve_images(
    const std::string& keyword, gateway::ImageSearchClient& search, int n,
    std::vector<std::string>* decode_failures = nullptr);

/// Argmax of cosine similarity between the keyword embedding and each
/// candidate embedding (unit-normalized); ties resolve to the lowest index.
const imaging::RasterImage& select_best_image(
    const std::string& keyword, std::span<const imaging::RasterImage> candidates,
    gateway::JointEmbedder& embedder);

struct CorpusBuildConfig {
    std::vector<ScenarioCategory> categories{kAllCategories,
                                             kAllCategories + 5};
    int keywords_per_category = 50;
    int instructions_per_keyword = 3;
    int images_per_keyword = 5;
    int retry_budget = 3;
    std::uint64_t seed = 0;
    std::string keyword_prompt;      // payload; {category} and {count} expand
    std::string instruction_prompt;  // payload; {keyword} and {category} expand
};

struct CorpusModels {
    gateway::TextLLM* keyword_llm = nullptr;
    gateway::TextLLM* instruction_llm = nullptr;
    gateway::ImageSearchClient* search = nullptr;  // optional: no images when null
    gateway::JointEmbedder* embedder = nullptr;
    const pointer::KeywordLexicon* lexicon = nullptr;  // keyword kind assignment
};

/// Composes the four operations above into a corpus rooted at
/// base_dir/corpus/. Image failures are ledgered and leave image_ref unset;
/// text-generation failures persist the partial corpus plus ledger, then
/// rethrow with per-record context.
Corpus build_corpus(const CorpusBuildConfig& config, const CorpusModels& models,
                    const std::filesystem::path& base_dir);

/// Line-delimited UTF-8 records, one HarmfulInstruction per line.
void write_corpus_file(const std::filesystem::path& path,
                       std::span<const HarmfulInstruction> instructions);
std::vector<HarmfulInstruction> read_corpus_file(const std::filesystem::path& path);

}  // namespace mmrt::corpus
