#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace supportsum::corpus {

struct NormalizationConfig {
    bool lowercase = true;
    bool strip_punctuation = true;
};

// One extraction unit: a sentence of a text or a sentence-like unit of a
// transcript. `index` always equals the passage's position in its source.
struct Passage {
    std::size_t index = 0;
    std::string raw_text;
    std::vector<std::string> tokens;

    friend bool operator==(const Passage&, const Passage&) = default;
};

struct InputSource {
    std::string doc_id;
    std::vector<Passage> passages;

    std::size_t size() const { return passages.size(); }
    std::size_t total_words() const;

    friend bool operator==(const InputSource&, const InputSource&) = default;
};

enum class SummaryKind { abstract, extract };

struct ReferenceSummary {
    std::string doc_id;
    std::string text;
    std::vector<std::string> tokens;
    SummaryKind kind = SummaryKind::abstract;

    friend bool operator==(const ReferenceSummary&, const ReferenceSummary&) = default;
};

struct Corpus {
    // Sorted by doc_id.
    std::vector<InputSource> documents;
    std::map<std::string, std::vector<ReferenceSummary>> references;
    // Additional related material, keyed by the document it supports.
    std::map<std::string, std::vector<InputSource>> background;

    const InputSource* find(std::string_view doc_id) const;
    const std::vector<ReferenceSummary>& references_for(const std::string& doc_id) const;
    const std::vector<InputSource>& background_for(const std::string& doc_id) const;

    friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct Segmentation {
    enum class Mode { lines, delimiters };
    Mode mode = Mode::lines;
    // UTF-8 string; every code point in it ends a passage (delimiters mode).
    std::string delimiters = ".!?";
};

struct CorpusLayout {
    std::string docs_dir = "docs";
    std::string refs_dir = "refs";
    std::string background_dir = "background";
    std::string extension = ".txt";
    Segmentation segmentation;
    NormalizationConfig normalization;
    SummaryKind reference_kind = SummaryKind::abstract;
    // Evaluation mode: every document must have at least one reference.
    bool require_references = false;
};

// Lowercases, removes Unicode punctuation and splits on Unicode whitespace.
std::vector<std::string> tokenize(std::string_view text, const NormalizationConfig& config = {});

// Splits text into passages. Spans without tokens are dropped and the
// survivors re-indexed; throws EmptySource when nothing survives.
InputSource segment(std::string_view text, const Segmentation& segmentation,
                    std::string doc_id = {}, const NormalizationConfig& config = {});

std::string read_text_file(const std::filesystem::path& path);

InputSource load_document(const std::filesystem::path& path, const Segmentation& segmentation,
                          const NormalizationConfig& config = {});

// Reads `<root>/docs/<id>.txt`, `<root>/refs/<id>.<k>.txt` and the optional
// `<root>/background/<id>.<k>.txt`. Documents are ordered by id.
Corpus load_corpus(const std::filesystem::path& root, const CorpusLayout& layout = {});

} // namespace supportsum::corpus
