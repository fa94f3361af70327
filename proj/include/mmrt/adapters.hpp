// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mmrt/raster.hpp"

namespace mmrt::gateway {

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};
using ChatHistory = std::vector<ChatMessage>;

/// Binary harmfulness decision over one model response.
struct Verdict {
    bool harmful = false;
    std::string raw;  // untouched judge output the decision was derived from
};

enum class AdapterRole {
    TextLlm,
    MultimodalTarget,
    WhiteboxTarget,
    Captioner,
    ImageGenerator,
    BinaryJudge,
    ImageSearch,
    Embedder,
};

enum class Concurrency { Safe, Serialize };

struct AdapterDescriptor {
    std::string id;
    AdapterRole role = AdapterRole::TextLlm;
    Concurrency concurrency = Concurrency::Safe;
    std::map<std::string, std::string> config;
};

/// Common base for every model adapter. Adapters self-declare whether they
/// are safe to call concurrently; call sites that fan out take `acquire()`
/// before each call, which locks only for Serialize adapters.
class Adapter {
public:
    virtual ~Adapter() = default;
    virtual const AdapterDescriptor& descriptor() const = 0;

    std::unique_lock<std::mutex> acquire() {
        if (descriptor().concurrency == Concurrency::Serialize) {
            return std::unique_lock<std::mutex>(serial_mutex_);
        }
        return {};
    }

private:
    std::mutex serial_mutex_;
};

/// Chat-style text model; carries the attacker, judge, classifier and
/// instruction-writer roles.
class TextLLM : public virtual Adapter {
public:
    /// Returns a nonempty reply. Throws EmptyInput on an empty history and
    /// AdapterError / TimeoutError on backend failure.
    virtual std::string chat(const ChatHistory& history) = 0;
};

/// Text generator conditioned on an optional image: the attack target.
class MultimodalTarget : public virtual Adapter {
public:
    virtual std::string generate(const std::optional<imaging::RasterImage>& image,
                                 const std::string& text) = 0;
};

/// Target exposing a differentiable loss with respect to image pixels.
class WhiteBoxTarget : public virtual Adapter {
public:
    struct LossGrad {
        double loss = 0.0;
        std::vector<double> gradient;  // same layout as image.pixels
    };
    /// loss = -log p(target_text | text, image) and its pixel gradient.
    virtual LossGrad loss_and_gradient(const imaging::RasterImage& image,
                                       const std::string& text,
                                       const std::string& target_text) = 0;
};

class Captioner : public virtual Adapter {
public:
    virtual std::string caption(const imaging::RasterImage& image,
                                const std::string& prompt) = 0;
};

class ImageGenerator : public virtual Adapter {
public:
    virtual imaging::RasterImage generate(const std::string& prompt) = 0;
};

class BinaryHarmJudge : public virtual Adapter {
public:
    /// Deterministic for a fixed adapter and input.
    virtual Verdict judge(const std::string& response) = 0;
};

/// Returns raw encoded image payloads; the caller owns decoding so that
/// undecodable results can be skipped and ledgered.
class ImageSearchClient : public virtual Adapter {
public:
    virtual std::vector<std::vector<std::uint8_t>> search(const std::string& query,
                                                          int limit) = 0;
};

/// Joint text/image embedding space used for best-image selection.
class JointEmbedder : public virtual Adapter {
public:
    virtual std::vector<double> embed_text(const std::string& text) = 0;
    virtual std::vector<double> embed_image(const imaging::RasterImage& image) = 0;
};

/// Helper base that stores the descriptor; concrete adapters derive from
/// this plus the interfaces they implement.
class AdapterBase : public virtual Adapter {
public:
    explicit AdapterBase(AdapterDescriptor descriptor)
        : descriptor_(std::move(descriptor)) {}
    const AdapterDescriptor& descriptor() const override { return descriptor_; }

protected:
    AdapterDescriptor descriptor_;
};

}  // namespace mmrt::gateway
