#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lingcurr/corpus_store.hpp"

namespace lingcurr {

enum class PosTag { noun, verb, adj, adv, other };

std::optional<PosTag> parse_pos_tag(std::string_view text);

struct TokenizedText {
    std::vector<std::string> tokens;
    std::optional<std::vector<PosTag>> tags;
    // Runs of '.', '!' or '?' close a sentence; a trailing fragment counts.
    // Zero for text without tokens.
    std::size_t sentence_count = 0;
};

// Lowercased maximal runs of alphanumeric bytes (bytes >= 0x80 count as word
// characters so UTF-8 words stay whole). An apostrophe between two word
// characters stays inside the token.
TokenizedText tokenize(std::string_view text);

class FrequencyList {
public:
    // Throws ValidationError on duplicates, ArgumentError if cutoff exceeds
    // the list length.
    FrequencyList(std::vector<std::string> ranked_words, std::size_t cutoff);

    std::size_t cutoff() const noexcept { return cutoff_; }
    std::size_t size() const noexcept { return ranked_.size(); }
    // True when the word is among the `cutoff` most frequent.
    bool is_frequent(std::string_view word) const;

private:
    std::vector<std::string> ranked_;
    std::size_t cutoff_;
    std::unordered_set<std::string> top_;
};

inline constexpr std::size_t kDefaultFrequencyCutoff = 2000;
inline constexpr std::size_t kDefaultSegmentLength = 50;
inline constexpr std::size_t kDefaultFirstK = 50;

// One word per line, most frequent first. A cutoff larger than the list is
// clamped to the list length.
FrequencyList load_frequency_list(const std::filesystem::path& path,
                                  std::size_t cutoff = kDefaultFrequencyCutoff);

struct TtrFamily {
    double ttr = 0.0;
    double root_ttr = 0.0;
    double corrected_ttr = 0.0;
    double log_ttr = 0.0;
    double msttr = 0.0;
};

TtrFamily ttr_family(const TokenizedText& t, std::size_t k_segment = kDefaultSegmentLength);

struct SophisticationCounts {
    double unique_words = 0.0;
    double unique_sophisticated = 0.0;
    double total_sophisticated = 0.0;
    double lexical_sophistication_total = 0.0;
    double lexical_sophistication_unique = 0.0;
    double unique_in_first_k = 0.0;
};

SophisticationCounts sophistication_counts(const TokenizedText& t, const FrequencyList& f,
                                           std::size_t first_k = kDefaultFirstK);

struct PosIndices {
    double noun_variation = 0.0;
    double adj_variation = 0.0;
    double adv_variation = 0.0;
    double verb_variation_unique = 0.0;
    double verbs_per_token = 0.0;
    double nouns_per_verb = 0.0;
    double adverbs_per_sentence_proxy = 0.0;
};

// Throws UnsupportedInputError when `t` carries no tags.
PosIndices pos_indices(const TokenizedText& t);

// Column names, in emission order, for each index group.
const std::vector<std::string>& ttr_index_names();
const std::vector<std::string>& sophistication_index_names();     // requires a frequency list
const std::vector<std::string>& frequency_free_count_names();     // unique_words, unique_in_first_k
const std::vector<std::string>& pos_index_names();

// Pre-tokenized, tagged text keyed by sample id. `pair` holds the second text
// of pair samples.
struct TaggedRecord {
    TokenizedText text;
    std::optional<TokenizedText> pair;
};
using TaggedCorpus = std::map<std::string, TaggedRecord, std::less<>>;

// JSON-lines with `id`, `tokens`, `tags` and optional `pair_tokens`,
// `pair_tags`.
TaggedCorpus load_tagged_corpus(const std::filesystem::path& path);
TaggedCorpus parse_tagged_corpus(std::string_view jsonl, const std::string& source = "<memory>");

struct MetricOptions {
    std::size_t k_segment = kDefaultSegmentLength;
    std::size_t first_k = kDefaultFirstK;
    // Sophistication columns are emitted only when a list is present.
    const FrequencyList* frequency = nullptr;
    // When present, POS columns are emitted and the tagged tokens replace
    // tokenize() output for the covered samples.
    const TaggedCorpus* tags = nullptr;
};

std::vector<std::string> native_index_names(const MetricOptions& opts);

// One row per sample in dataset order. Pair datasets get (P)/(H) columns.
IndexMatrix compute_index_matrix(const Dataset& d, const MetricOptions& opts);

}  // namespace lingcurr
