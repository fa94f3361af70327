// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mmrt/adapters.hpp"

namespace mmrt::gateway {

// ---------------------------------------------------------------------------
// Text models
// ---------------------------------------------------------------------------

/// Replays a fixed reply script in call order; throws AdapterError once the
/// script is exhausted. Declared Serialize because call order is its state.
class ScriptedTextLLM : public AdapterBase, public TextLLM {
public:
    explicit ScriptedTextLLM(std::vector<std::string> script,
                             std::string id = "scripted-llm");

    std::string chat(const ChatHistory& history) override;

    int calls() const { return calls_; }
    const std::vector<ChatHistory>& call_log() const { return call_log_; }

private:
    std::vector<std::string> script_;
    std::vector<ChatHistory> call_log_;
    int calls_ = 0;
};

/// Personas understood by the rule-based stub model.
enum class MockPersona {
    Keywords,      // emits a deterministic word list
    Instructions,  // emits three sentences embedding the quoted term
    Classifier,    // answers object/concept/behavior for the quoted term
    Attacker,      // produces and refines image-generation prompts
    Judge,         // answers "Score: <n>. ..." derived from the input
    Benign,        // rewrites requests and answers harmlessly
    Generic,       // mixes canned refusals and canned unsafe completions
};

MockPersona persona_from_string(const std::string& name);

/// Deterministic stand-in for a hosted chat model: every reply is a pure
/// function of (persona, seed, conversation text). Quoted spans in the prompt
/// are echoed back where a persona needs the term it was asked about.
class RuleTextLLM : public AdapterBase, public TextLLM {
public:
    RuleTextLLM(MockPersona persona, std::uint64_t seed,
                std::string id = "rule-llm", int keyword_emit_count = 60);

    std::string chat(const ChatHistory& history) override;

private:
    MockPersona persona_;
    std::uint64_t seed_;
    int keyword_emit_count_;
};

// ---------------------------------------------------------------------------
// Multimodal targets
// ---------------------------------------------------------------------------

struct TargetCallRecord {
    bool has_image = false;
    int width = 0;
    int height = 0;
    std::uint64_t image_fingerprint = 0;
    std::string text;
};

/// Replies from a fixed script in call order, recording every payload shape.
class ScriptedMultimodalTarget : public AdapterBase, public MultimodalTarget {
public:
    explicit ScriptedMultimodalTarget(std::vector<std::string> script,
                                      std::string id = "scripted-target");

    std::string generate(const std::optional<imaging::RasterImage>& image,
                         const std::string& text) override;

    const std::vector<TargetCallRecord>& call_log() const { return call_log_; }

private:
    std::vector<std::string> script_;
    std::vector<TargetCallRecord> call_log_;
    std::size_t next_ = 0;
};

/// Deterministic reply chosen from a canned bank by hashing the payload;
/// order-independent, so safe under concurrency.
class ProceduralMultimodalTarget : public AdapterBase, public MultimodalTarget {
public:
    explicit ProceduralMultimodalTarget(std::uint64_t seed,
                                        std::string id = "procedural-target",
                                        bool open_model = false);

    std::string generate(const std::optional<imaging::RasterImage>& image,
                         const std::string& text) override;

private:
    std::uint64_t seed_;
};

/// Fixture replies keyed on (image fingerprint, text); unknown payloads raise
/// AdapterError.
class KeyedMultimodalTarget : public AdapterBase, public MultimodalTarget {
public:
    explicit KeyedMultimodalTarget(std::map<std::uint64_t, std::string> replies,
                                   std::string id = "keyed-target");

    static std::uint64_t key_for(const std::optional<imaging::RasterImage>& image,
                                 const std::string& text);

    std::string generate(const std::optional<imaging::RasterImage>& image,
                         const std::string& text) override;

private:
    std::map<std::uint64_t, std::string> replies_;
};

// ---------------------------------------------------------------------------
// Captioning, generation, judging
// ---------------------------------------------------------------------------

class ScriptedCaptioner : public AdapterBase, public Captioner {
public:
    explicit ScriptedCaptioner(std::vector<std::string> script,
                               std::string id = "scripted-captioner");
    std::string caption(const imaging::RasterImage& image,
                        const std::string& prompt) override;

    int calls() const { return calls_; }

private:
    std::vector<std::string> script_;
    int calls_ = 0;
};

/// Caption derived from the image fingerprint; no visual understanding, just
/// a stable sentence per distinct image.
class ProceduralCaptioner : public AdapterBase, public Captioner {
public:
    explicit ProceduralCaptioner(std::uint64_t seed,
                                 std::string id = "procedural-captioner");
    std::string caption(const imaging::RasterImage& image,
                        const std::string& prompt) override;

private:
    std::uint64_t seed_;
};

/// Smooth sinusoidal pattern seeded by the prompt hash. `fail_on_call` makes
/// the n-th call (1-based) raise AdapterError, for failure-path tests.
class ProceduralImageGenerator : public AdapterBase, public ImageGenerator {
public:
    ProceduralImageGenerator(std::uint64_t seed, int width, int height,
                             std::string id = "procedural-generator",
                             int fail_on_call = 0);

    imaging::RasterImage generate(const std::string& prompt) override;

    int calls() const { return calls_; }

private:
    std::uint64_t seed_;
    int width_;
    int height_;
    int fail_on_call_;
    int calls_ = 0;
};

/// Marker-list judge: a response containing a refusal marker is safe; else a
/// response containing a harm marker is harmful; everything else is safe.
class LexiconJudge : public AdapterBase, public BinaryHarmJudge {
public:
    LexiconJudge(std::vector<std::string> harm_markers,
                 std::vector<std::string> refusal_markers,
                 std::string id = "lexicon-judge");

    Verdict judge(const std::string& response) override;

    static LexiconJudge with_default_markers(std::string id = "lexicon-judge");
    static const std::vector<std::string>& default_harm_markers();
    static const std::vector<std::string>& default_refusal_markers();

private:
    std::vector<std::string> harm_markers_;
    std::vector<std::string> refusal_markers_;
};

// ---------------------------------------------------------------------------
// Search and embedding
// ---------------------------------------------------------------------------

/// Returns the same fixture blobs for every query; `throws` simulates a dead
/// backend.
class ScriptedImageSearch : public AdapterBase, public ImageSearchClient {
public:
    explicit ScriptedImageSearch(std::vector<std::vector<std::uint8_t>> blobs,
                                 bool throws = false,
                                 std::string id = "scripted-search");

    std::vector<std::vector<std::uint8_t>> search(const std::string& query,
                                                  int limit) override;

private:
    std::vector<std::vector<std::uint8_t>> blobs_;
    bool throws_;
};

/// Synthesizes `count` encoded images per query, deterministically.
class ProceduralImageSearch : public AdapterBase, public ImageSearchClient {
public:
    ProceduralImageSearch(std::uint64_t seed, int count, int width, int height,
                          std::string id = "procedural-search");

    std::vector<std::vector<std::uint8_t>> search(const std::string& query,
                                                  int limit) override;

private:
    std::uint64_t seed_;
    int count_;
    int width_;
    int height_;
};

/// Serves files under root/<query>/ in filename order; a missing directory
/// yields an empty result (short supply, not an error).
class DirectoryImageSearch : public AdapterBase, public ImageSearchClient {
public:
    explicit DirectoryImageSearch(std::string root,
                                  std::string id = "directory-search");

    std::vector<std::vector<std::uint8_t>> search(const std::string& query,
                                                  int limit) override;

private:
    std::string root_;
};

/// Exact embeddings injected by tests: texts by string, images by fingerprint.
class FixedEmbedder : public AdapterBase, public JointEmbedder {
public:
    FixedEmbedder(std::map<std::string, std::vector<double>> text_vectors,
                  std::map<std::uint64_t, std::vector<double>> image_vectors,
                  std::string id = "fixed-embedder");

    std::vector<double> embed_text(const std::string& text) override;
    std::vector<double> embed_image(const imaging::RasterImage& image) override;

private:
    std::map<std::string, std::vector<double>> text_vectors_;
    std::map<std::uint64_t, std::vector<double>> image_vectors_;
};

/// Unit vector drawn from a hash-seeded stream; a cheap stand-in for a joint
/// embedding model.
class ProceduralEmbedder : public AdapterBase, public JointEmbedder {
public:
    ProceduralEmbedder(std::uint64_t seed, int dim,
                       std::string id = "procedural-embedder");

    std::vector<double> embed_text(const std::string& text) override;
    std::vector<double> embed_image(const imaging::RasterImage& image) override;

private:
    std::vector<double> from_hash(std::uint64_t h) const;

    std::uint64_t seed_;
    int dim_;
};

}  // namespace mmrt::gateway
