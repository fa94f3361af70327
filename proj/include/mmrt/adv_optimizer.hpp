// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmrt/adapters.hpp"
#include "mmrt/corpus.hpp"

namespace mmrt::advopt {

/// Target completions the optimizer steers the model toward. The stock set
/// ships two canonical entries plus eight stubs; deployments tune the list.
struct AffirmativeSet {
    std::vector<std::string> responses;

    static AffirmativeSet defaults();
};

struct AdvHyperparams {
    int steps = 500;               // T
    double step_size = 1.0 / 255.0;  // alpha for the sign update
    int batch = 0;                 // instructions per step; 0 = full batch
    std::uint64_t seed = 0;
    int width = 512;
    int height = 128;
    double init_value = 1.0;       // blank starting canvas
};

void to_json(nlohmann::json& j, const AdvHyperparams& hp);
void from_json(const nlohmann::json& j, AdvHyperparams& hp);

/// Per-category optimization output: the image, its loss history (exactly
/// steps+1 entries) and everything needed to reproduce the run.
struct AdversarialArtifact {
    corpus::ScenarioCategory category = corpus::ScenarioCategory::Animal;
    imaging::RasterImage image;
    std::vector<std::pair<int, double>> loss_curve;
    AdvHyperparams hyperparams;
    std::string target_model_id;
    bool diverged = false;  // final mean loss above the initial one (recorded, not fatal)
};

/// Forwards to the white-box adapter and validates the gradient shape.
/// Returns (-log p(target | text, image), pixel gradient).
std::pair<double, std::vector<double>> target_loss(gateway::WhiteBoxTarget& model,
                                                   const std::string& text,
                                                   const imaging::RasterImage& image,
                                                   const std::string& target_response);

using StepObserver =
    std::function<void(int step, const imaging::RasterImage&, double mean_loss)>;

/// Sign-gradient descent with projection onto [0, 1], starting from a blank
/// canvas. Instruction j is paired with affirmative target j mod |Ya| (fixed
/// round-robin), so loss curves stay comparable across steps. When
/// `base_composites` is supplied (one per instruction), the loss conditions
/// on the adversarial banner stacked above that composite and the gradient
/// is sliced back to the banner region; otherwise the banner alone is used.
AdversarialArtifact optimize_adv_image(
    std::span<const corpus::HarmfulInstruction> instructions,
    gateway::WhiteBoxTarget& model, const AffirmativeSet& affirmatives,
    const AdvHyperparams& hp,
    std::span<const imaging::CompositeImage> base_composites = {},
    const StepObserver& observer = {});

/// Stacks the artifact banner on top of a composite (label order: adv first).
imaging::CompositeImage apply_adv(const AdversarialArtifact& artifact,
                                  const imaging::CompositeImage& composite,
                                  double pad_value = 1.0);

/// Raster + sidecar metadata under base_dir/subdir/, refs base_dir-relative.
void save_artifact(const std::filesystem::path& base_dir, const std::string& subdir,
                   const AdversarialArtifact& artifact);
AdversarialArtifact load_artifact(const std::filesystem::path& base_dir,
                                  const std::string& sidecar_ref);

}  // namespace mmrt::advopt
