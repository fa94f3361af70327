// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#include "mmrt/harm_amplifier.hpp"

#include <cctype>
#include <fstream>

#include "mmrt/hashing.hpp"
#include "mmrt/raster_io.hpp"
#include "mmrt/strings.hpp"

namespace mmrt::amplifier {

std::string init_prompt(const corpus::HarmfulInstruction& instruction,
                        gateway::TextLLM& attacker, const AmplifierPrompts& prompts) {
    const std::string payload =
        replace_all(prompts.init_template, "{instruction}", instruction.text);
    for (int attempt = 0; attempt <= prompts.init_retries; ++attempt) {
        std::string reply;
        {
            auto lock = attacker.acquire();
            reply = attacker.chat({{"system", prompts.attacker_system},
                                   {"user", payload}});
        }
        const std::string trimmed = trim(reply);
        if (!trimmed.empty()) return trimmed;
    }
    throw AdapterError("init_prompt: attacker returned empty prompts for " +
                       instruction.id);
}

std::pair<int, std::string> parse_judge_reply(const std::string& raw) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(raw[i]))) continue;
        std::size_t end = i;
        long value = 0;
        while (end < raw.size() && std::isdigit(static_cast<unsigned char>(raw[end]))) {
            value = value * 10 + (raw[end] - '0');
            if (value > 1000) break;
            ++end;
        }
        if (value >= 1 && value <= 10) {
            std::string rest = raw.substr(end);
            std::size_t skip = 0;
            while (skip < rest.size() &&
                   (std::isspace(static_cast<unsigned char>(rest[skip])) ||
                    rest[skip] == '.' || rest[skip] == ':' || rest[skip] == ',')) {
                ++skip;
            }
            return {static_cast<int>(value), trim(rest.substr(skip))};
        }
        i = end;
    }
    throw FormatError("parse_judge_reply: no integer in [1, 10] found");
}

namespace {

std::pair<int, std::string> judged_score(gateway::TextLLM& judge,
                                         const std::string& caption,
                                         const AmplifierPrompts& prompts) {
    for (int attempt = 0; attempt <= prompts.judge_retries; ++attempt) {
        std::string reply;
        {
            auto lock = judge.acquire();
            reply = judge.chat({{"system", prompts.judge_system}, {"user", caption}});
        }
        try {
            return parse_judge_reply(reply);
        } catch (const FormatError&) {
            if (attempt == prompts.judge_retries) throw;
        }
    }
    throw FormatError("judged_score: unreachable");
}

std::string render_block(const AmplifierPrompts& prompts,
                         const AmplificationStep& step) {
    std::string block = prompts.history_block_template;
    block = replace_all(std::move(block), "{prompt}", step.prompt);
    block = replace_all(std::move(block), "{caption}", step.caption.value_or(""));
    block = replace_all(std::move(block), "{score}",
                        step.score ? std::to_string(*step.score) : "");
    block = replace_all(std::move(block), "{explanation}",
                        step.explanation.value_or(""));
    return block;
}

}  // namespace

AmplificationTrace amplify(const corpus::HarmfulInstruction& instruction,
                           int max_iters, const AmplifierModels& models,
                           const AmplifierPrompts& prompts) {
    if (max_iters < 1) throw std::invalid_argument("amplify: max_iters must be >= 1");
    if (!models.attacker || !models.captioner || !models.judge || !models.generator) {
        throw ConfigError("amplify: attacker, captioner, judge and generator required");
    }

    AmplificationTrace trace;
    trace.instruction_id = instruction.id;
    trace.max_iters = max_iters;
    trace.history.push_back({"system", prompts.attacker_system});

    try {
        const std::string p0 = init_prompt(instruction, *models.attacker, prompts);
        {
            AmplificationStep step;
            step.k = 0;
            step.prompt = p0;
            auto lock = models.generator->acquire();
            step.image = models.generator->generate(p0);
            trace.steps.push_back(std::move(step));
        }

        for (int k = 0; k < max_iters; ++k) {
            AmplificationStep& current = trace.steps.back();
            {
                auto lock = models.captioner->acquire();
                current.caption =
                    models.captioner->caption(current.image, prompts.caption_prompt);
            }
            const auto [score, explanation] =
                judged_score(*models.judge, *current.caption, prompts);
            current.score = score;
            current.explanation = explanation;

            trace.history.push_back({"user", render_block(prompts, current)});

            std::string next_prompt;
            {
                auto lock = models.attacker->acquire();
                next_prompt = models.attacker->chat(trace.history);
            }

            AmplificationStep next;
            next.k = k + 1;
            next.prompt = next_prompt;
            {
                auto lock = models.generator->acquire();
                next.image = models.generator->generate(next_prompt);
            }
            trace.steps.push_back(std::move(next));
        }
    } catch (const AdapterError& e) {
        throw AmplifyAborted("amplify(" + instruction.id + "): " + e.what(),
                             std::move(trace));
    }
    return trace;
}

std::string to_string(SelectPolicy policy) {
    return policy == SelectPolicy::HighestScore ? "highest_score" : "final_step";
}

SelectPolicy select_policy_from_string(const std::string& name) {
    if (name == "highest_score") return SelectPolicy::HighestScore;
    if (name == "final_step") return SelectPolicy::FinalStep;
    throw ConfigError("unknown select policy: " + name);
}

const AmplificationStep& select_opt_image(const AmplificationTrace& trace,
                                          SelectPolicy policy) {
    if (trace.steps.empty()) {
        throw std::invalid_argument("select_opt_image: empty trace");
    }
    if (policy == SelectPolicy::FinalStep) return trace.steps.back();

    const AmplificationStep* best = nullptr;
    for (const auto& step : trace.steps) {
        if (!step.score) continue;
        if (!best || *step.score >= *best->score) best = &step;  // tie -> latest
    }
    return best ? *best : trace.steps.back();
}

nlohmann::json trace_to_json(const AmplificationTrace& trace) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& step : trace.steps) {
        nlohmann::json s{{"k", step.k}, {"prompt", step.prompt}};
        if (step.caption) s["caption"] = *step.caption;
        if (step.score) s["score"] = *step.score;
        if (step.explanation) s["explanation"] = *step.explanation;
        if (!step.image.pixels.empty()) {
            s["image_fingerprint"] = hash_hex(imaging::image_fingerprint(step.image));
        }
        if (step.image_ref) s["image_ref"] = *step.image_ref;
        steps.push_back(std::move(s));
    }
    nlohmann::json history = nlohmann::json::array();
    for (const auto& msg : trace.history) {
        history.push_back({{"role", msg.role}, {"content", msg.content}});
    }
    return nlohmann::json{{"instruction_id", trace.instruction_id},
                          {"max_iters", trace.max_iters},
                          {"steps", std::move(steps)},
                          {"history", std::move(history)}};
}

AmplificationTrace trace_from_json(const nlohmann::json& j) {
    AmplificationTrace trace;
    trace.instruction_id = j.at("instruction_id").get<std::string>();
    trace.max_iters = j.at("max_iters").get<int>();
    for (const auto& s : j.at("steps")) {
        AmplificationStep step;
        step.k = s.at("k").get<int>();
        step.prompt = s.at("prompt").get<std::string>();
        if (s.contains("caption")) step.caption = s["caption"];
        if (s.contains("score")) step.score = s["score"].get<int>();
        if (s.contains("explanation")) step.explanation = s["explanation"];
        if (s.contains("image_ref")) step.image_ref = s["image_ref"];
        trace.steps.push_back(std::move(step));
    }
    for (const auto& msg : j.at("history")) {
        trace.history.push_back({msg.at("role").get<std::string>(),
                                 msg.at("content").get<std::string>()});
    }
    return trace;
}

AmplificationTrace save_trace(const std::filesystem::path& base_dir,
                              const std::string& subdir, AmplificationTrace trace,
                              SelectPolicy policy) {
    const std::filesystem::path dir = base_dir / subdir;
    std::filesystem::create_directories(dir / "img");
    for (auto& step : trace.steps) {
        if (step.image.pixels.empty()) continue;
        const std::string name =
            trace.instruction_id + "-k" + std::to_string(step.k) + ".ppm";
        imaging::write_raster(dir / "img" / name, step.image);
        step.image_ref = subdir + "/img/" + name;
    }
    nlohmann::json j = trace_to_json(trace);
    const AmplificationStep& selected = select_opt_image(trace, policy);
    j["select_policy"] = to_string(policy);
    j["selected_step"] = selected.k;
    if (selected.image_ref) j["selected_ref"] = *selected.image_ref;

    std::ofstream out(dir / (trace.instruction_id + ".json"), std::ios::trunc);
    if (!out) throw Error("cannot write trace for " + trace.instruction_id);
    out << j.dump(2) << "\n";
    return trace;
}

AmplificationTrace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace: " + path.string());
    nlohmann::json j;
    in >> j;
    return trace_from_json(j);
}

}  // namespace mmrt::amplifier
