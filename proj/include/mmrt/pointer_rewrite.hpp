// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mmrt/adapters.hpp"
#include "mmrt/corpus.hpp"

namespace mmrt::pointer {

/// Surface strings substituted for the keyword; configurable, with the
/// object/concept kinds mapping to "the ... in the image" and the behavior
/// kind grafting "conduct the behavior in the image on" before the original
/// grammatical object.
struct PointerTemplates {
    std::string object_phrase = "the object in the image";
    std::string concept_phrase = "the concept in the image";
    std::string behavior_phrase = "conduct the behavior in the image on";

    const std::string& for_kind(corpus::KeywordKind kind) const;
};

/// Committed keyword -> kind table with a deterministic suffix heuristic for
/// entries it does not cover (gerunds are behaviors, abstract-noun suffixes
/// are concepts, everything else an object).
class KeywordLexicon {
public:
    KeywordLexicon() = default;
    explicit KeywordLexicon(std::map<std::string, corpus::KeywordKind> entries);

    /// The table shipped with the project, covering the stock corpus keywords.
    static const KeywordLexicon& builtin();

    /// {"object": [...], "concept": [...], "behavior": [...]}
    static KeywordLexicon from_json(const nlohmann::json& j);

    /// Entries from `other` override or extend this table.
    KeywordLexicon merged_with(const KeywordLexicon& other) const;

    std::optional<corpus::KeywordKind> lookup(const std::string& keyword) const;

    /// Table hit, else suffix heuristic; always deterministic.
    corpus::KeywordKind classify(const std::string& keyword) const;

    const std::map<std::string, corpus::KeywordKind>& entries() const {
        return entries_;
    }

private:
    std::map<std::string, corpus::KeywordKind> entries_;  // keys lowercased
};

corpus::KeywordKind heuristic_kind(const std::string& keyword);

/// Offline classifier path.
corpus::KeywordKind classify_keyword(const std::string& keyword,
                                     const KeywordLexicon& lexicon);

/// LLM classifier path for keywords no lexicon covers: the reply must parse
/// to one of the three labels within `retries` extra attempts, else
/// FormatError.
corpus::KeywordKind classify_keyword(const std::string& keyword,
                                     gateway::TextLLM& llm,
                                     const std::string& prompt_payload,
                                     int retries = 2);

/// Replaces every case-insensitive occurrence of the keyword in the
/// instruction text with the pointer phrase for its kind. Behavior rewrites
/// absorb a directly following "on" so the grammatical object trails the
/// phrase naturally. Throws KeywordAbsent when the keyword does not occur.
std::string rewrite_with_pointer(const corpus::HarmfulInstruction& instruction,
                                 const PointerTemplates& templates = {});

}  // namespace mmrt::pointer
