#include "supportsum/summarizer.hpp"

#include "supportsum/errors.hpp"
#include "supportsum/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace supportsum::summarizer {

SizeBudget SizeBudget::words(std::size_t n)
{
    if (n == 0) {
        throw InvalidArgument("word budget must be positive");
    }
    return {Kind::words, static_cast<double>(n)};
}

SizeBudget SizeBudget::sentences(std::size_t n)
{
    if (n == 0) {
        throw InvalidArgument("sentence budget must be positive");
    }
    return {Kind::sentences, static_cast<double>(n)};
}

SizeBudget SizeBudget::compression(double rate)
{
    if (!(rate > 0.0 && rate < 1.0)) {
        throw InvalidArgument("compression rate must lie in (0,1)");
    }
    return {Kind::compression, rate};
}

SizeBudget SizeBudget::parse(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw InvalidArgument("budget must look like words:N, sentences:N or compression:F");
    }
    const auto head = text.substr(0, colon);
    const auto arg = text.substr(colon + 1);
    if (head == "words") return words(parse_count(arg));
    if (head == "sentences") return sentences(parse_count(arg));
    if (head == "compression") return compression(parse_double(arg));
    throw InvalidArgument("unknown budget kind '" + std::string(head) + "'");
}

std::string SizeBudget::name() const
{
    switch (kind) {
    case Kind::words: return "words:" + format_shortest(limit);
    case Kind::sentences: return "sentences:" + format_shortest(limit);
    case Kind::compression: return "compression:" + format_shortest(limit);
    }
    return {};
}

std::vector<std::string> Summary::tokens(const corpus::InputSource& source) const
{
    std::vector<std::string> out;
    for (auto i : selected) {
        const auto& t = source.passages.at(i).tokens;
        out.insert(out.end(), t.begin(), t.end());
    }
    return out;
}

Summary compose(const Ranking& ranking, const corpus::InputSource& source, const SizeBudget& budget)
{
    Summary summary;
    summary.doc_id = source.doc_id;

    double word_limit = budget.limit;
    if (budget.kind == SizeBudget::Kind::compression) {
        word_limit = budget.limit * static_cast<double>(source.total_words());
    }

    for (const auto& entry : ranking.entries()) {
        if (entry.index >= source.size()) {
            throw InvalidArgument("ranking refers to passage " + std::to_string(entry.index)
                                  + " outside the source");
        }
        if (budget.kind == SizeBudget::Kind::sentences) {
            if (static_cast<double>(summary.selected.size()) >= budget.limit) {
                break;
            }
        } else if (!(static_cast<double>(summary.word_count) < word_limit)) {
            break;
        }
        summary.selected.push_back(entry.index);
        summary.word_count += source.passages[entry.index].tokens.size();
    }

    std::sort(summary.selected.begin(), summary.selected.end());
    for (std::size_t k = 0; k < summary.selected.size(); ++k) {
        if (k > 0) {
            summary.text += '\n';
        }
        summary.text += source.passages[summary.selected[k]].raw_text;
    }
    return summary;
}

std::string summary_to_json(const Summary& summary)
{
    nlohmann::ordered_json j;
    j["doc_id"] = summary.doc_id;
    j["indices"] = summary.selected;
    j["text"] = summary.text;
    return j.dump(2);
}

} // namespace supportsum::summarizer
