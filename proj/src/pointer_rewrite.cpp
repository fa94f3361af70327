// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#include "mmrt/pointer_rewrite.hpp"

#include <cctype>

#include "mmrt/errors.hpp"
#include "mmrt/strings.hpp"

namespace mmrt::pointer {

using corpus::KeywordKind;

const std::string& PointerTemplates::for_kind(KeywordKind kind) const {
    switch (kind) {
        case KeywordKind::Object: return object_phrase;
        case KeywordKind::Concept: return concept_phrase;
        case KeywordKind::Behavior: return behavior_phrase;
    }
    return object_phrase;
}

KeywordLexicon::KeywordLexicon(std::map<std::string, KeywordKind> entries) {
    for (auto& [keyword, kind] : entries) {
        entries_[to_lower(keyword)] = kind;
    }
}

const KeywordLexicon& KeywordLexicon::builtin() {
    static const KeywordLexicon lexicon = [] {
        std::map<std::string, KeywordKind> entries;
        const auto add = [&entries](KeywordKind kind,
                                    std::initializer_list<const char*> words) {
            for (const char* word : words) entries[word] = kind;
        };
        add(KeywordKind::Object,
            {"knife",     "bomb",       "gun",       "pistol",    "rifle",
             "grenade",   "sword",      "machete",   "crowbar",   "taser",
             "lockpick",  "silencer",   "explosive", "ammunition", "syringe",
             "firearm",   "dagger",     "axe",       "whip",      "snare",
             "handcuffs", "tripwire",   "shiv",      "slingshot", "blowtorch"});
        add(KeywordKind::Concept,
            {"forgery",        "fraud",          "blackmail",      "bribery",
             "extortion",      "corruption",     "embezzlement",   "deception",
             "racketeering",   "propaganda",     "slander",        "libel",
             "harassment",     "intimidation",   "discrimination", "conspiracy",
             "sabotage",       "treason",        "perjury",        "arson",
             "identity theft", "money laundering", "insider trading",
             "tax evasion",    "cruelty"});
        add(KeywordKind::Behavior,
            {"eavesdropping", "eavesdrop",     "hitting",     "killing",
             "ambush",        "stalking",      "kidnapping",  "poaching",
             "hacking",       "phishing",      "pickpocketing", "shoplifting",
             "trespassing",   "vandalizing",   "stabbing",    "strangling",
             "choking",       "beating",       "smuggling",   "poisoning",
             "torturing",     "mugging",       "looting",     "carjacking",
             "doxxing"});
        return KeywordLexicon(std::move(entries));
    }();
    return lexicon;
}

KeywordLexicon KeywordLexicon::from_json(const nlohmann::json& j) {
    std::map<std::string, KeywordKind> entries;
    for (const auto& [kind_name, words] : j.items()) {
        const KeywordKind kind = corpus::keyword_kind_from_string(kind_name);
        for (const auto& word : words) {
            entries[word.get<std::string>()] = kind;
        }
    }
    return KeywordLexicon(std::move(entries));
}

KeywordLexicon KeywordLexicon::merged_with(const KeywordLexicon& other) const {
    std::map<std::string, KeywordKind> merged = entries_;
    for (const auto& [keyword, kind] : other.entries_) merged[keyword] = kind;
    KeywordLexicon out;
    out.entries_ = std::move(merged);
    return out;
}

std::optional<KeywordKind> KeywordLexicon::lookup(const std::string& keyword) const {
    const auto it = entries_.find(to_lower(trim(keyword)));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

KeywordKind KeywordLexicon::classify(const std::string& keyword) const {
    if (const auto hit = lookup(keyword)) return *hit;
    return heuristic_kind(keyword);
}

KeywordKind heuristic_kind(const std::string& keyword) {
    const std::string lower = to_lower(trim(keyword));
    const auto ends_with = [&lower](std::string_view suffix) {
        return lower.size() > suffix.size() &&
               lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with("ing")) return KeywordKind::Behavior;
    for (std::string_view suffix : {"ion", "ery", "ism", "ness", "ity", "ude",
                                    "acy", "ance", "ence"}) {
        if (ends_with(suffix)) return KeywordKind::Concept;
    }
    return KeywordKind::Object;
}

KeywordKind classify_keyword(const std::string& keyword,
                             const KeywordLexicon& lexicon) {
    if (trim(keyword).empty()) {
        throw std::invalid_argument("classify_keyword: keyword must be nonempty");
    }
    return lexicon.classify(keyword);
}

KeywordKind classify_keyword(const std::string& keyword, gateway::TextLLM& llm,
                             const std::string& prompt_payload, int retries) {
    if (trim(keyword).empty()) {
        throw std::invalid_argument("classify_keyword: keyword must be nonempty");
    }
    const std::string prompt =
        replace_all(prompt_payload, "{keyword}", "\"" + keyword + "\"");
    for (int attempt = 0; attempt <= retries; ++attempt) {
        std::string reply;
        {
            auto lock = llm.acquire();
            reply = llm.chat({{"user", prompt}});
        }
        const std::string lower = to_lower(reply);
        int hits = 0;
        KeywordKind found = KeywordKind::Object;
        for (KeywordKind kind : {KeywordKind::Object, KeywordKind::Concept,
                                 KeywordKind::Behavior}) {
            if (lower.find(corpus::to_string(kind)) != std::string::npos) {
                ++hits;
                found = kind;
            }
        }
        if (hits == 1) return found;
    }
    throw FormatError("classify_keyword('" + keyword +
                      "'): reply never parsed to a single kind label");
}

std::string rewrite_with_pointer(const corpus::HarmfulInstruction& instruction,
                                 const PointerTemplates& templates) {
    const std::string& text = instruction.text;
    const std::string& keyword = instruction.keyword;
    if (trim(keyword).empty()) {
        throw std::invalid_argument("rewrite_with_pointer: empty keyword");
    }
    const std::string lower_text = to_lower(text);
    const std::string lower_keyword = to_lower(keyword);
    const std::string& phrase = templates.for_kind(instruction.keyword_kind);
    const bool behavior = instruction.keyword_kind == KeywordKind::Behavior;

    std::string result;
    result.reserve(text.size());
    std::size_t cursor = 0;
    std::size_t matches = 0;
    while (true) {
        const std::size_t start = lower_text.find(lower_keyword, cursor);
        if (start == std::string::npos) break;
        ++matches;
        result.append(text, cursor, start - cursor);
        result.append(phrase);
        std::size_t end = start + lower_keyword.size();
        if (behavior) {
            // The behavior phrase already ends with "on"; absorb a directly
            // following "on" so the grammatical object reads through.
            std::size_t probe = end;
            while (probe < lower_text.size() &&
                   std::isspace(static_cast<unsigned char>(lower_text[probe]))) {
                ++probe;
            }
            const bool has_on =
                probe + 2 <= lower_text.size() &&
                lower_text.compare(probe, 2, "on") == 0 &&
                (probe + 2 == lower_text.size() ||
                 !std::isalnum(static_cast<unsigned char>(lower_text[probe + 2])));
            if (has_on) end = probe + 2;
        }
        cursor = end;
    }
    if (matches == 0) {
        throw KeywordAbsent("rewrite_with_pointer: keyword '" + keyword +
                            "' not found in instruction " + instruction.id);
    }
    result.append(text, cursor, std::string::npos);

    if (contains_ci(result, keyword)) {
        throw FormatError("rewrite_with_pointer: pointer template reintroduces '" +
                          keyword + "'");
    }
    return result;
}

}  // namespace mmrt::pointer
