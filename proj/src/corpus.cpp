#include "supportsum/corpus.hpp"

#include "supportsum/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

namespace supportsum::corpus {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at text[pos] and advances pos. Malformed
// sequences consume a single byte and decode to U+FFFD.
char32_t next_code_point(std::string_view text, std::size_t& pos)
{
    const auto lead = static_cast<unsigned char>(text[pos]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
        ++pos;
        return lead;
    } else if ((lead & 0xE0) == 0xC0) {
        len = 2;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4;
        cp = lead & 0x07;
    } else {
        ++pos;
        return kReplacement;
    }
    if (pos + len > text.size()) {
        ++pos;
        return kReplacement;
    }
    for (std::size_t k = 1; k < len; ++k) {
        const auto byte = static_cast<unsigned char>(text[pos + k]);
        if ((byte & 0xC0) != 0x80) {
            ++pos;
            return kReplacement;
        }
        cp = (cp << 6) | (byte & 0x3F);
    }
    pos += len;
    return cp;
}

void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_space(char32_t cp)
{
    switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000: case 0xFEFF:
        return true;
    default:
        return cp >= 0x2000 && cp <= 0x200B;
    }
}

// General category P* over the blocks that show up in Latin-script text and
// transcripts. Symbols (S*) such as '$' or '+' are kept.
bool is_punctuation(char32_t cp)
{
    if (cp < 0x80) {
        switch (cp) {
        case U'!': case U'"': case U'#': case U'%': case U'&': case U'\'':
        case U'(': case U')': case U'*': case U',': case U'-': case U'.':
        case U'/': case U':': case U';': case U'?': case U'@': case U'[':
        case U'\\': case U']': case U'_': case U'{': case U'}':
            return true;
        default:
            return false;
        }
    }
    switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x37E: case 0x387: case 0x55A: case 0x589: case 0x5BE: case 0x60C:
    case 0x61B: case 0x61F: case 0x6D4: case 0x964: case 0x965:
        return true;
    default:
        break;
    }
    if (cp >= 0x2010 && cp <= 0x2027) return true;
    if (cp >= 0x2030 && cp <= 0x205E) return cp != 0x2044 && cp != 0x2052;
    if (cp >= 0x2E00 && cp <= 0x2E4F) return true;
    if (cp >= 0x3001 && cp <= 0x3003) return true;
    if (cp >= 0x3008 && cp <= 0x3011) return true;
    if (cp >= 0x3014 && cp <= 0x301F) return true;
    if (cp >= 0xFE10 && cp <= 0xFE19) return true;
    if (cp >= 0xFE30 && cp <= 0xFE4F) return true;
    if (cp >= 0xFE50 && cp <= 0xFE6B) return cp != 0xFE62 && cp != 0xFE64 && cp != 0xFE65
                                             && cp != 0xFE66 && cp != 0xFE69;
    if (cp >= 0xFF01 && cp <= 0xFF0F) return cp != 0xFF04 && cp != 0xFF0B;
    if (cp == 0xFF1A || cp == 0xFF1B || cp == 0xFF1F || cp == 0xFF20) return true;
    if (cp >= 0xFF3B && cp <= 0xFF3D) return true;
    if (cp == 0xFF3F || cp == 0xFF5B || cp == 0xFF5D) return true;
    if (cp >= 0xFF5F && cp <= 0xFF65) return true;
    return false;
}

// Simple case folding for Latin, Greek and Cyrillic capitals.
char32_t to_lower(char32_t cp)
{
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if (cp < 0xC0) return cp;
    if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;
    if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp == 0x178) return 0xFF;
    if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

std::vector<char32_t> decode(std::string_view text)
{
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        out.push_back(next_code_point(text, pos));
    }
    return out;
}

std::string trim(std::string_view s)
{
    const auto* ws = " \t\r\n\v\f";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(ws);
    return std::string(s.substr(first, last - first + 1));
}

// Runs of ASCII whitespace become one space.
std::string collapse_whitespace(std::string_view s)
{
    std::string out;
    bool pending_space = false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

std::vector<std::string> split_spans(std::string_view text, const Segmentation& segmentation)
{
    std::vector<std::string> spans;
    if (segmentation.mode == Segmentation::Mode::lines) {
        std::size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            spans.push_back(trim(text.substr(start, end - start)));
            start = end + 1;
        }
        return spans;
    }

    const auto delimiters = decode(segmentation.delimiters);
    std::size_t span_start = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const char32_t cp = next_code_point(text, pos);
        if (std::find(delimiters.begin(), delimiters.end(), cp) != delimiters.end()) {
            spans.push_back(collapse_whitespace(text.substr(span_start, pos - span_start)));
            span_start = pos;
        }
    }
    if (span_start < text.size()) {
        spans.push_back(collapse_whitespace(text.substr(span_start)));
    }
    return spans;
}

// Splits "<id>.<k>.txt" into id; a name with no label part is its own id.
std::string id_from_labelled_name(const std::string& stem)
{
    const auto dot = stem.rfind('.');
    return dot == std::string::npos ? stem : stem.substr(0, dot);
}

std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::string& extension)
{
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (std::filesystem::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
        const auto& path = it->path();
        if (it->is_regular_file() && path.filename().string().ends_with(extension)) {
            files.push_back(path);
        }
    }
    if (ec) {
        throw IoError("cannot list " + dir.string() + ": " + ec.message());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::string strip_extension(const std::filesystem::path& path, const std::string& extension)
{
    auto name = path.filename().string();
    return name.substr(0, name.size() - extension.size());
}

} // namespace

std::size_t InputSource::total_words() const
{
    std::size_t total = 0;
    for (const auto& p : passages) {
        total += p.tokens.size();
    }
    return total;
}

const InputSource* Corpus::find(std::string_view doc_id) const
{
    const auto it = std::lower_bound(documents.begin(), documents.end(), doc_id,
                                     [](const InputSource& d, std::string_view id) {
                                         return d.doc_id < id;
                                     });
    return (it != documents.end() && it->doc_id == doc_id) ? &*it : nullptr;
}

const std::vector<ReferenceSummary>& Corpus::references_for(const std::string& doc_id) const
{
    static const std::vector<ReferenceSummary> none;
    const auto it = references.find(doc_id);
    return it == references.end() ? none : it->second;
}

const std::vector<InputSource>& Corpus::background_for(const std::string& doc_id) const
{
    static const std::vector<InputSource> none;
    const auto it = background.find(doc_id);
    return it == background.end() ? none : it->second;
}

std::vector<std::string> tokenize(std::string_view text, const NormalizationConfig& config)
{
    std::vector<std::string> tokens;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = next_code_point(text, pos);
        if (is_space(cp)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
            continue;
        }
        if (config.strip_punctuation && is_punctuation(cp)) {
            continue;
        }
        if (config.lowercase) {
            cp = to_lower(cp);
        }
        append_utf8(current, cp);
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

InputSource segment(std::string_view text, const Segmentation& segmentation, std::string doc_id,
                    const NormalizationConfig& config)
{
    InputSource source;
    source.doc_id = std::move(doc_id);
    for (auto& span : split_spans(text, segmentation)) {
        auto tokens = tokenize(span, config);
        if (tokens.empty()) {
            continue;
        }
        source.passages.push_back({source.passages.size(), std::move(span), std::move(tokens)});
    }
    if (source.passages.empty()) {
        throw EmptySource("no passage with content in document '" + source.doc_id + "'");
    }
    return source;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("cannot read " + path.string());
    }
    return buffer.str();
}

InputSource load_document(const std::filesystem::path& path, const Segmentation& segmentation,
                          const NormalizationConfig& config)
{
    auto id = path.stem().string();
    return segment(read_text_file(path), segmentation, std::move(id), config);
}

Corpus load_corpus(const std::filesystem::path& root, const CorpusLayout& layout)
{
    const auto docs_dir = root / layout.docs_dir;
    if (!std::filesystem::is_directory(docs_dir)) {
        throw IoError("missing documents directory " + docs_dir.string());
    }

    Corpus corpus;
    for (const auto& file : list_files(docs_dir, layout.extension)) {
        auto text = read_text_file(file);
        corpus.documents.push_back(segment(text, layout.segmentation,
                                           strip_extension(file, layout.extension),
                                           layout.normalization));
    }
    std::sort(corpus.documents.begin(), corpus.documents.end(),
              [](const InputSource& a, const InputSource& b) { return a.doc_id < b.doc_id; });

    const auto refs_dir = root / layout.refs_dir;
    if (std::filesystem::is_directory(refs_dir)) {
        for (const auto& file : list_files(refs_dir, layout.extension)) {
            auto id = id_from_labelled_name(strip_extension(file, layout.extension));
            if (corpus.find(id) == nullptr) {
                throw IoError("reference " + file.string() + " names unknown document '" + id + "'");
            }
            ReferenceSummary ref;
            ref.doc_id = id;
            ref.text = read_text_file(file);
            ref.tokens = tokenize(ref.text, layout.normalization);
            ref.kind = layout.reference_kind;
            if (ref.tokens.empty()) {
                throw DegenerateReference("reference " + file.string() + " has no tokens");
            }
            corpus.references[id].push_back(std::move(ref));
        }
    }

    const auto background_dir = root / layout.background_dir;
    if (std::filesystem::is_directory(background_dir)) {
        for (const auto& file : list_files(background_dir, layout.extension)) {
            const auto stem = strip_extension(file, layout.extension);
            auto id = id_from_labelled_name(stem);
            if (corpus.find(id) == nullptr) {
                throw IoError("background " + file.string() + " names unknown document '" + id + "'");
            }
            corpus.background[id].push_back(
                segment(read_text_file(file), layout.segmentation, stem, layout.normalization));
        }
    }

    if (layout.require_references) {
        for (const auto& doc : corpus.documents) {
            if (corpus.references_for(doc.doc_id).empty()) {
                throw MissingReference("no reference summary for document '" + doc.doc_id + "'");
            }
        }
    }
    return corpus;
}

} // namespace supportsum::corpus
