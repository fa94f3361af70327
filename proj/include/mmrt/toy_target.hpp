// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "mmrt/adapters.hpp"

namespace mmrt::gateway {

/// Closed-form differentiable stand-in for a white-box multimodal model.
///
/// The probability of emitting `target_text` is a logistic function of a
/// fixed projection of the image pixels plus a text-derived feature:
///
///     p = sigmoid(img_weight * proj(image) + text_weight * feat(text, target) + bias)
///
/// proj is a seeded, position-dependent linear projection (mean over pixels
/// of cosine-basis coefficients times pixel values), so the analytic pixel
/// gradient is exact and cheap for any image shape. Smooth, seedable and
/// fast enough to run thousands of optimization steps in tests.
class ToyTarget : public AdapterBase, public WhiteBoxTarget {
public:
    enum class Mode {
        RandomProjection,  // seeded cosine-basis projection (default)
        MeanIntensity,     // proj(image) = mean pixel value
        Constant,          // fixed probability, zero gradient
    };

    struct Params {
        Mode mode = Mode::RandomProjection;
        std::uint64_t seed = 1;
        double img_weight = 4.0;
        double text_weight = 0.5;
        double bias = 0.0;
        double constant_p = 1.0;  // only for Mode::Constant
    };

    explicit ToyTarget(Params params, std::string id = "toy-target");

    static ToyTarget constant(double p, std::string id = "toy-constant");

    /// p(target_text | text, image); exposed so tests can use it as an
    /// independent oracle for the loss.
    double probability(const imaging::RasterImage& image, const std::string& text,
                       const std::string& target_text) const;

    LossGrad loss_and_gradient(const imaging::RasterImage& image,
                               const std::string& text,
                               const std::string& target_text) override;

private:
    double projection_coefficient(int x, int y, int c, int width, int height) const;
    double logit(const imaging::RasterImage& image, const std::string& text,
                 const std::string& target_text) const;
    double text_feature(const std::string& text, const std::string& target_text) const;

    Params params_;
    double basis_amp_[3];
    double basis_fx_[3];
    double basis_fy_[3];
    double basis_fc_[3];
    double basis_phase_[3];
};

}  // namespace mmrt::gateway
