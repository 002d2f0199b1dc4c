#include "lingcurr/lexical_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "lingcurr/error.hpp"
#include "lingcurr/text_io.hpp"

namespace lingcurr {

std::optional<PosTag> parse_pos_tag(std::string_view text) {
    if (text == "NOUN") return PosTag::noun;
    if (text == "VERB") return PosTag::verb;
    if (text == "ADJ") return PosTag::adj;
    if (text == "ADV") return PosTag::adv;
    if (text == "OTHER") return PosTag::other;
    return std::nullopt;
}

namespace {

bool is_word_byte(unsigned char ch) {
    return (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch >= 0x80;
}

bool is_terminator(char ch) { return ch == '.' || ch == '!' || ch == '?'; }

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& ch : out)
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    return out;
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

TokenizedText tokenize(std::string_view text) {
    TokenizedText out;
    std::string current;
    bool open_sentence = false;
    auto flush = [&] {
        if (!current.empty()) {
            out.tokens.push_back(lowercase(current));
            current.clear();
            open_sentence = true;
        }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto ch = static_cast<unsigned char>(text[i]);
        if (is_word_byte(ch)) {
            current.push_back(static_cast<char>(ch));
        } else if (ch == '\'' && !current.empty() && i + 1 < text.size() &&
                   is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
            current.push_back('\'');
        } else {
            flush();
            if (is_terminator(static_cast<char>(ch)) && open_sentence) {
                ++out.sentence_count;
                open_sentence = false;
            }
        }
    }
    flush();
    if (open_sentence) ++out.sentence_count;
    return out;
}

FrequencyList::FrequencyList(std::vector<std::string> ranked_words, std::size_t cutoff)
    : ranked_(std::move(ranked_words)), cutoff_(cutoff) {
    if (cutoff_ > ranked_.size())
        throw ArgumentError("frequency cutoff " + std::to_string(cutoff_) + " exceeds list length " +
                            std::to_string(ranked_.size()));
    std::unordered_set<std::string> seen;
    for (const auto& w : ranked_)
        if (!seen.insert(w).second) throw ValidationError("duplicate word \"" + w + "\" in frequency list");
    top_.insert(ranked_.begin(), ranked_.begin() + static_cast<std::ptrdiff_t>(cutoff_));
}

bool FrequencyList::is_frequent(std::string_view word) const { return top_.count(std::string(word)) > 0; }

FrequencyList load_frequency_list(const std::filesystem::path& path, std::size_t cutoff) {
    std::vector<std::string> words;
    for (const auto& line : io::read_lines(path)) {
        auto w = io::trim(line);
        if (!w.empty()) words.push_back(lowercase(w));
    }
    const std::size_t effective = std::min(cutoff, words.size());
    return FrequencyList(std::move(words), effective);
}

TtrFamily ttr_family(const TokenizedText& t, std::size_t k_segment) {
    TtrFamily out;
    const std::size_t n = t.tokens.size();
    if (n == 0) return out;
    if (k_segment == 0) throw ArgumentError("segment length must be positive");

    const std::unordered_set<std::string> types(t.tokens.begin(), t.tokens.end());
    const double u = static_cast<double>(types.size());
    const double nn = static_cast<double>(n);
    out.ttr = u / nn;
    out.root_ttr = u / std::sqrt(nn);
    out.corrected_ttr = u / std::sqrt(2.0 * nn);
    out.log_ttr = n > 1 ? std::log(u) / std::log(nn) : 1.0;

    const std::size_t segments = n / k_segment;
    if (segments == 0) {
        out.msttr = out.ttr;
    } else {
        double sum = 0.0;
        for (std::size_t s = 0; s < segments; ++s) {
            const auto begin = t.tokens.begin() + static_cast<std::ptrdiff_t>(s * k_segment);
            const std::unordered_set<std::string> seg(begin, begin + static_cast<std::ptrdiff_t>(k_segment));
            sum += static_cast<double>(seg.size()) / static_cast<double>(k_segment);
        }
        out.msttr = sum / static_cast<double>(segments);
    }
    return out;
}

SophisticationCounts sophistication_counts(const TokenizedText& t, const FrequencyList& f, std::size_t first_k) {
    SophisticationCounts out;
    const std::size_t n = t.tokens.size();
    if (n == 0) return out;

    std::unordered_set<std::string> types;
    std::unordered_set<std::string> sophisticated_types;
    std::size_t sophisticated_tokens = 0;
    for (const auto& tok : t.tokens) {
        types.insert(tok);
        if (!f.is_frequent(tok)) {
            ++sophisticated_tokens;
            sophisticated_types.insert(tok);
        }
    }
    const std::size_t window = std::min(first_k, n);
    const std::unordered_set<std::string> first(t.tokens.begin(), t.tokens.begin() + static_cast<std::ptrdiff_t>(window));

    out.unique_words = static_cast<double>(types.size());
    out.unique_sophisticated = static_cast<double>(sophisticated_types.size());
    out.total_sophisticated = static_cast<double>(sophisticated_tokens);
    out.lexical_sophistication_total = safe_ratio(out.total_sophisticated, static_cast<double>(n));
    out.lexical_sophistication_unique = safe_ratio(out.unique_sophisticated, out.unique_words);
    out.unique_in_first_k = static_cast<double>(first.size());
    return out;
}

PosIndices pos_indices(const TokenizedText& t) {
    if (!t.tags) {
        std::string names;
        for (const auto& n : pos_index_names()) names += (names.empty() ? "" : ", ") + n;
        throw UnsupportedInputError("POS tags required for: " + names);
    }
    const auto& tags = *t.tags;
    if (tags.size() != t.tokens.size())
        throw ValidationError("tag count " + std::to_string(tags.size()) + " does not match token count " +
                              std::to_string(t.tokens.size()));

    std::unordered_set<std::string> nouns, verbs, adjs, advs;
    std::size_t noun_count = 0, verb_count = 0, adj_count = 0, adv_count = 0;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        const auto& tok = t.tokens[i];
        switch (tags[i]) {
            case PosTag::noun: nouns.insert(tok); ++noun_count; break;
            case PosTag::verb: verbs.insert(tok); ++verb_count; break;
            case PosTag::adj: adjs.insert(tok); ++adj_count; break;
            case PosTag::adv: advs.insert(tok); ++adv_count; break;
            case PosTag::other: break;
        }
    }
    const double lexical = static_cast<double>(noun_count + verb_count + adj_count + adv_count);
    const double verbs_d = static_cast<double>(verb_count);

    PosIndices out;
    out.noun_variation = safe_ratio(static_cast<double>(nouns.size()), lexical);
    out.adj_variation = safe_ratio(static_cast<double>(adjs.size()), lexical);
    out.adv_variation = safe_ratio(static_cast<double>(advs.size()), lexical);
    out.verb_variation_unique = safe_ratio(static_cast<double>(verbs.size()), verbs_d);
    out.verbs_per_token = safe_ratio(verbs_d, static_cast<double>(t.tokens.size()));
    out.nouns_per_verb = static_cast<double>(noun_count) / std::max(verbs_d, 1.0);
    out.adverbs_per_sentence_proxy =
        static_cast<double>(adv_count) / static_cast<double>(std::max<std::size_t>(t.sentence_count, 1));
    return out;
}

const std::vector<std::string>& ttr_index_names() {
    static const std::vector<std::string> names{"ttr", "root_ttr", "corrected_ttr", "log_ttr", "msttr"};
    return names;
}

const std::vector<std::string>& frequency_free_count_names() {
    static const std::vector<std::string> names{"unique_words", "unique_in_first_k"};
    return names;
}

const std::vector<std::string>& sophistication_index_names() {
    static const std::vector<std::string> names{"unique_sophisticated", "total_sophisticated",
                                                "lexical_sophistication_total", "lexical_sophistication_unique"};
    return names;
}

const std::vector<std::string>& pos_index_names() {
    static const std::vector<std::string> names{"noun_variation", "adj_variation",   "adv_variation",
                                                "verb_variation", "verbs_per_token", "nouns_per_verb",
                                                "adverbs_per_sentence"};
    return names;
}

namespace {

TokenizedText parse_tagged_text(const nlohmann::json& j, const char* tokens_key, const char* tags_key,
                                const std::string& source, std::size_t lineno) {
    auto tok_it = j.find(tokens_key);
    auto tag_it = j.find(tags_key);
    if (tok_it == j.end() || !tok_it->is_array())
        throw ParseError(source, lineno, std::string("missing array \"") + tokens_key + "\"");
    if (tag_it == j.end() || !tag_it->is_array())
        throw ParseError(source, lineno, std::string("missing array \"") + tags_key + "\"");
    if (tok_it->size() != tag_it->size())
        throw ParseError(source, lineno, std::string("\"") + tokens_key + "\" and \"" + tags_key + "\" differ in length");

    TokenizedText t;
    std::vector<PosTag> tags;
    std::string joined;
    for (std::size_t i = 0; i < tok_it->size(); ++i) {
        const auto& tok = (*tok_it)[i];
        const auto& tag = (*tag_it)[i];
        if (!tok.is_string() || !tag.is_string()) throw ParseError(source, lineno, "tokens and tags must be strings");
        auto parsed = parse_pos_tag(tag.get<std::string>());
        if (!parsed) throw ParseError(source, lineno, "unknown tag \"" + tag.get<std::string>() + "\"");
        t.tokens.push_back(lowercase(tok.get<std::string>()));
        tags.push_back(*parsed);
        joined += tok.get<std::string>();
        joined.push_back(' ');
    }
    t.tags = std::move(tags);
    // Sentence boundaries survive as punctuation tokens in tagger output.
    t.sentence_count = tokenize(joined).sentence_count;
    return t;
}

}  // namespace

TaggedCorpus parse_tagged_corpus(std::string_view jsonl, const std::string& source) {
    TaggedCorpus corpus;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (io::trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(source, lineno, std::string("invalid JSON: ") + e.what());
        }
        auto id = j.find("id");
        if (id == j.end() || !id->is_string()) throw ParseError(source, lineno, "missing string \"id\"");
        TaggedRecord rec;
        rec.text = parse_tagged_text(j, "tokens", "tags", source, lineno);
        if (j.contains("pair_tokens")) rec.pair = parse_tagged_text(j, "pair_tokens", "pair_tags", source, lineno);
        if (!corpus.emplace(id->get<std::string>(), std::move(rec)).second)
            throw ValidationError(source + ":" + std::to_string(lineno) + ": duplicate id \"" + id->get<std::string>() + "\"");
    }
    return corpus;
}

TaggedCorpus load_tagged_corpus(const std::filesystem::path& path) {
    std::string content;
    for (const auto& l : io::read_lines(path)) {
        content += l;
        content.push_back('\n');
    }
    return parse_tagged_corpus(content, path.string());
}

std::vector<std::string> native_index_names(const MetricOptions& opts) {
    std::vector<std::string> names = ttr_index_names();
    const auto& free = frequency_free_count_names();
    names.insert(names.end(), free.begin(), free.end());
    if (opts.frequency) {
        const auto& soph = sophistication_index_names();
        names.insert(names.end(), soph.begin(), soph.end());
    }
    if (opts.tags) {
        const auto& pos = pos_index_names();
        names.insert(names.end(), pos.begin(), pos.end());
    }
    return names;
}

namespace {

std::vector<double> index_row(const TokenizedText& t, const MetricOptions& opts) {
    std::vector<double> row;
    const auto ttr = ttr_family(t, opts.k_segment);
    row.insert(row.end(), {ttr.ttr, ttr.root_ttr, ttr.corrected_ttr, ttr.log_ttr, ttr.msttr});

    std::unordered_set<std::string> types(t.tokens.begin(), t.tokens.end());
    const std::size_t window = std::min(opts.first_k, t.tokens.size());
    std::unordered_set<std::string> first(t.tokens.begin(), t.tokens.begin() + static_cast<std::ptrdiff_t>(window));
    row.push_back(static_cast<double>(types.size()));
    row.push_back(static_cast<double>(first.size()));

    if (opts.frequency) {
        const auto s = sophistication_counts(t, *opts.frequency, opts.first_k);
        row.insert(row.end(), {s.unique_sophisticated, s.total_sophisticated, s.lexical_sophistication_total,
                               s.lexical_sophistication_unique});
    }
    if (opts.tags) {
        const auto p = pos_indices(t);
        row.insert(row.end(), {p.noun_variation, p.adj_variation, p.adv_variation, p.verb_variation_unique,
                               p.verbs_per_token, p.nouns_per_verb, p.adverbs_per_sentence_proxy});
    }
    return row;
}

IndexMatrix matrix_for(const Dataset& d, const MetricOptions& opts, bool second_text) {
    const auto names = native_index_names(opts);
    Matrix values(d.size(), names.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Sample& s = d[i];
        TokenizedText t;
        if (opts.tags) {
            auto it = opts.tags->find(s.id);
            if (it == opts.tags->end()) throw CoverageError("no tagged tokens for sample \"" + s.id + "\"");
            if (second_text) {
                if (!it->second.pair)
                    throw CoverageError("no tagged pair tokens for sample \"" + s.id + "\"");
                t = *it->second.pair;
            } else {
                t = it->second.text;
            }
        } else {
            t = tokenize(second_text ? s.text_pair.value_or("") : s.text);
        }
        const auto row = index_row(t, opts);
        std::copy(row.begin(), row.end(), values.row(i).begin());
    }
    return IndexMatrix(d.ids(), names, std::move(values));
}

}  // namespace

IndexMatrix compute_index_matrix(const Dataset& d, const MetricOptions& opts) {
    auto first = matrix_for(d, opts, false);
    if (!d.has_pairs()) return first;
    return concatenate_pair_indices(first, matrix_for(d, opts, true));
}

}  // namespace lingcurr
