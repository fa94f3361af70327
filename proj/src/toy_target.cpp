// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#include "mmrt/toy_target.hpp"

#include <cmath>
#include <random>

#include "mmrt/errors.hpp"
#include "mmrt/hashing.hpp"

namespace mmrt::gateway {

namespace {

AdapterDescriptor toy_descriptor(std::string id) {
    AdapterDescriptor d;
    d.id = std::move(id);
    d.role = AdapterRole::WhiteboxTarget;
    d.concurrency = Concurrency::Safe;
    return d;
}

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

// Numerically stable -log(sigmoid(s)).
double softplus_neg(double s) {
    const double z = -s;
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

ToyTarget::ToyTarget(Params params, std::string id)
    : AdapterBase(toy_descriptor(std::move(id))), params_(params) {
    std::mt19937_64 rng(params_.seed);
    std::uniform_real_distribution<double> amp(0.4, 1.0);
    std::uniform_real_distribution<double> freq(0.5, 7.0);
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
    for (int k = 0; k < 3; ++k) {
        basis_amp_[k] = amp(rng);
        basis_fx_[k] = freq(rng);
        basis_fy_[k] = freq(rng);
        basis_fc_[k] = freq(rng);
        basis_phase_[k] = phase(rng);
    }
}

ToyTarget ToyTarget::constant(double p, std::string id) {
    Params params;
    params.mode = Mode::Constant;
    params.constant_p = p;
    return ToyTarget(params, std::move(id));
}

double ToyTarget::projection_coefficient(int x, int y, int c, int width,
                                         int height) const {
    if (params_.mode == Mode::MeanIntensity) return 1.0;
    const double xn = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
    const double yn = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
    double v = 0.0;
    for (int k = 0; k < 3; ++k) {
        v += basis_amp_[k] * std::cos(basis_fx_[k] * xn + basis_fy_[k] * yn +
                                      basis_fc_[k] * c + basis_phase_[k]);
    }
    return v;
}

double ToyTarget::text_feature(const std::string& text,
                               const std::string& target_text) const {
    const std::uint64_t h = fnv1a64(target_text, fnv1a64(text, params_.seed));
    return 2.0 * hash_to_unit(h) - 1.0;
}

double ToyTarget::logit(const imaging::RasterImage& image, const std::string& text,
                        const std::string& target_text) const {
    double proj = 0.0;
    std::size_t i = 0;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < image.channels; ++c, ++i) {
                proj += projection_coefficient(x, y, c, image.width, image.height) *
                        image.pixels[i];
            }
        }
    }
    proj /= static_cast<double>(image.pixel_count());
    return params_.img_weight * proj +
           params_.text_weight * text_feature(text, target_text) + params_.bias;
}

double ToyTarget::probability(const imaging::RasterImage& image,
                              const std::string& text,
                              const std::string& target_text) const {
    if (params_.mode == Mode::Constant) return params_.constant_p;
    return sigmoid(logit(image, text, target_text));
}

WhiteBoxTarget::LossGrad ToyTarget::loss_and_gradient(
    const imaging::RasterImage& image, const std::string& text,
    const std::string& target_text) {
    if (image.pixels.empty()) throw EmptyInput("toy target: empty image");

    LossGrad out;
    out.gradient.assign(image.pixel_count(), 0.0);

    if (params_.mode == Mode::Constant) {
        if (!(params_.constant_p > 0.0 && params_.constant_p <= 1.0)) {
            throw AdapterError("toy target: constant probability must be in (0, 1]");
        }
        out.loss = -std::log(params_.constant_p);
        return out;
    }

    const double s = logit(image, text, target_text);
    out.loss = softplus_neg(s);

    // d(-log sigmoid(s))/ds = sigmoid(s) - 1; ds/dx_p = img_weight * v_p / P.
    const double dl_ds = sigmoid(s) - 1.0;
    const double scale =
        dl_ds * params_.img_weight / static_cast<double>(image.pixel_count());
    std::size_t i = 0;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < image.channels; ++c, ++i) {
                out.gradient[i] =
                    scale * projection_coefficient(x, y, c, image.width, image.height);
            }
        }
    }
    return out;
}

}  // namespace mmrt::gateway
