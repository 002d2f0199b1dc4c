#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "generators.hpp"
#include "lingcurr/error.hpp"
#include "lingcurr/lexical_metrics.hpp"

using namespace lingcurr;
using lingcurr::testing::Rng;

namespace {

TokenizedText tokens(std::vector<std::string> words) {
    TokenizedText t;
    t.tokens = std::move(words);
    t.sentence_count = t.tokens.empty() ? 0 : 1;
    return t;
}

TokenizedText tagged(std::vector<std::string> words, std::vector<PosTag> tags, std::size_t sentences = 1) {
    TokenizedText t = tokens(std::move(words));
    t.tags = std::move(tags);
    t.sentence_count = sentences;
    return t;
}

}  // namespace

TEST_CASE("tokenize") {
    CHECK(tokenize("The cat sat.").tokens == std::vector<std::string>{"the", "cat", "sat"});
    CHECK(tokenize("don't stop").tokens == std::vector<std::string>{"don't", "stop"});
    CHECK(tokenize("").tokens.empty());
    CHECK(tokenize("").sentence_count == 0);
    CHECK(tokenize("'quoted' words").tokens == std::vector<std::string>{"quoted", "words"});
    CHECK(tokenize("One. Two! Three").sentence_count == 3);
    CHECK(tokenize("Wait... what?!").sentence_count == 2);
    CHECK(tokenize("Café au lait").tokens == std::vector<std::string>{"café", "au", "lait"});
}

TEST_CASE("ttr family on [a,b,b,a,c]") {
    const auto f = ttr_family(tokens({"a", "b", "b", "a", "c"}), 50);
    CHECK(f.ttr == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(f.corrected_ttr == doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-15));
    CHECK(f.corrected_ttr == doctest::Approx(0.94868).epsilon(1e-5));
    CHECK(f.root_ttr == doctest::Approx(1.34164).epsilon(1e-5));
    CHECK(f.log_ttr == doctest::Approx(std::log(3.0) / std::log(5.0)).epsilon(1e-15));
    CHECK(f.log_ttr == doctest::Approx(0.68261).epsilon(1e-5));
    CHECK(ttr_family(tokens({"a", "b", "b", "a", "c"}), 2).msttr == 1.0);
}

TEST_CASE("ttr degenerate cases") {
    const auto empty = ttr_family(tokens({}), 50);
    CHECK(empty.ttr == 0.0);
    CHECK(empty.msttr == 0.0);
    CHECK(empty.log_ttr == 0.0);
    CHECK(ttr_family(tokens({"x"}), 50).log_ttr == 1.0);
}

TEST_CASE("property: ttr identities and bounds on random token multisets") {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = testing::uniform_size(rng, 1, 200);
        const auto t = tokens(testing::random_tokens(rng, n, testing::uniform_size(rng, 1, 60)));
        const auto f = ttr_family(t, 50);
        const double nn = static_cast<double>(n);
        CHECK(f.ttr >= 0.0);
        CHECK(f.ttr <= 1.0);
        CHECK(std::abs(f.corrected_ttr - f.ttr * std::sqrt(nn / 2.0)) <= 1e-12);
        CHECK(std::abs(f.root_ttr - f.ttr * std::sqrt(nn)) <= 1e-12);
    }
}

TEST_CASE("property: msttr ignores a trailing partial segment and equals ttr for short texts") {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = testing::uniform_size(rng, 2, 20);
        const std::size_t full = testing::uniform_size(rng, 1, 5) * k;
        auto words = testing::random_tokens(rng, full, 15);
        const double base = ttr_family(tokens(words), k).msttr;
        auto longer = words;
        const auto tail = testing::random_tokens(rng, testing::uniform_size(rng, 1, k - 1), 15);
        longer.insert(longer.end(), tail.begin(), tail.end());
        CHECK(ttr_family(tokens(longer), k).msttr == base);

        const auto short_text = tokens(testing::random_tokens(rng, k - 1, 5));
        const auto f = ttr_family(short_text, k);
        CHECK(f.msttr == f.ttr);
    }
}

TEST_CASE("property: duplicating every token of an all-unique text halves ttr") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = testing::uniform_size(rng, 1, 50);
        std::vector<std::string> words;
        for (std::size_t i = 0; i < n; ++i) words.push_back("u" + std::to_string(i));
        auto doubled = words;
        doubled.insert(doubled.end(), words.begin(), words.end());
        CHECK(ttr_family(tokens(doubled), 50).ttr == ttr_family(tokens(words), 50).ttr / 2.0);
    }
}

TEST_CASE("sophistication counts") {
    const FrequencyList top({"the"}, 1);
    const auto s = sophistication_counts(tokens({"the", "cat"}), top);
    CHECK(s.total_sophisticated == 1.0);
    CHECK(s.lexical_sophistication_total == 0.5);
    CHECK(s.unique_sophisticated == 1.0);
    CHECK(s.lexical_sophistication_unique == 0.5);

    const auto inside = sophistication_counts(tokens({"the", "the"}), top);
    CHECK(inside.lexical_sophistication_total == 0.0);
    CHECK(inside.lexical_sophistication_unique == 0.0);

    const auto empty = sophistication_counts(tokens({}), top);
    CHECK(empty.unique_words == 0.0);
    CHECK(empty.total_sophisticated == 0.0);
    CHECK(empty.unique_in_first_k == 0.0);

    const auto window = sophistication_counts(tokens({"a", "b", "a", "c", "d"}), top, 3);
    CHECK(window.unique_in_first_k == 2.0);
}

TEST_CASE("property: sophistication ratios lie in [0,1] and do not grow with the cutoff") {
    Rng rng(14);
    std::vector<std::string> ranked;
    for (int i = 0; i < 40; ++i) ranked.push_back("w" + std::to_string(i));
    for (int trial = 0; trial < 200; ++trial) {
        const auto t = tokens(testing::random_tokens(rng, testing::uniform_size(rng, 1, 80), 60));
        double prev_total = 2.0, prev_unique = 2.0;
        for (std::size_t k = 0; k <= ranked.size(); k += 5) {
            const auto s = sophistication_counts(t, FrequencyList(ranked, k));
            CHECK(s.lexical_sophistication_total >= 0.0);
            CHECK(s.lexical_sophistication_total <= 1.0);
            CHECK(s.lexical_sophistication_unique >= 0.0);
            CHECK(s.lexical_sophistication_unique <= 1.0);
            CHECK(s.lexical_sophistication_total <= prev_total);
            CHECK(s.lexical_sophistication_unique <= prev_unique);
            prev_total = s.lexical_sophistication_total;
            prev_unique = s.lexical_sophistication_unique;
        }
    }
}

TEST_CASE("frequency list contract") {
    CHECK_THROWS_AS(FrequencyList({"a", "a"}, 1), ValidationError);
    CHECK_THROWS_AS(FrequencyList({"a"}, 2), ArgumentError);
    const FrequencyList f({"a", "b", "c"}, 2);
    CHECK(f.is_frequent("b"));
    CHECK_FALSE(f.is_frequent("c"));
}

TEST_CASE("pos indices") {
    const auto run = pos_indices(tagged({"run", "run"}, {PosTag::verb, PosTag::verb}));
    CHECK(run.verb_variation_unique == 0.5);
    CHECK(run.verbs_per_token == 1.0);

    const auto no_verbs = pos_indices(tagged({"cat", "dog", "the"}, {PosTag::noun, PosTag::noun, PosTag::other}));
    CHECK(no_verbs.verb_variation_unique == 0.0);
    CHECK(no_verbs.nouns_per_verb == 2.0);
    CHECK(no_verbs.noun_variation == 1.0);

    const auto mixed = pos_indices(tagged({"fast", "dogs", "run", "very", "fast"},
                                          {PosTag::adj, PosTag::noun, PosTag::verb, PosTag::adv, PosTag::adv}, 2));
    CHECK(mixed.adv_variation == doctest::Approx(2.0 / 5.0));
    CHECK(mixed.adj_variation == doctest::Approx(1.0 / 5.0));
    CHECK(mixed.adverbs_per_sentence_proxy == 1.0);
}

TEST_CASE("untagged input is unsupported and the error lists the tag-dependent indices") {
    try {
        pos_indices(tokens({"a"}));
        FAIL("expected an error");
    } catch (const UnsupportedInputError& e) {
        CHECK(std::string(e.what()).find("verb_variation") != std::string::npos);
    }
}

TEST_CASE("compute_index_matrix shapes and determinism") {
    const Dataset single = parse_dataset(std::string(R"({"id":"a","text":"The cat sat.","label":0,"split":"train"})") +
                                         "\n" + R"({"id":"b","text":"A dog ran far.","label":1,"split":"train"})");
    const FrequencyList f({"the", "a"}, 2);
    MetricOptions opts;
    opts.frequency = &f;
    const IndexMatrix m = compute_index_matrix(single, opts);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 11);
    CHECK(compute_index_matrix(single, opts).values() == m.values());
    CHECK(compute_index_matrix(single, {}).cols() == 7);

    const Dataset pair = parse_dataset(
        std::string(R"({"id":"a","text":"The cat sat.","text_pair":"It slept.","label":0,"split":"train"})") + "\n" +
        R"({"id":"b","text":"A dog ran.","text_pair":"Fast.","label":1,"split":"train"})");
    const IndexMatrix p = compute_index_matrix(pair, opts);
    CHECK(p.cols() == 22);
    CHECK(p.index_names().front() == "ttr (P)");
    CHECK(p.index_names()[11] == "ttr (H)");
}

TEST_CASE("tagged corpus feeds POS columns") {
    const Dataset d = parse_dataset(R"({"id":"a","text":"The cat sat","label":0,"split":"train"})");
    const TaggedCorpus tags =
        parse_tagged_corpus(R"({"id":"a","tokens":["the","cat","sat"],"tags":["OTHER","NOUN","VERB"]})");
    MetricOptions opts;
    opts.tags = &tags;
    const IndexMatrix m = compute_index_matrix(d, opts);
    CHECK(m.cols() == 14);
    const auto c = m.column_of("verb_variation");
    REQUIRE(c.has_value());
    CHECK(m.values()(0, *c) == 1.0);
    CHECK_THROWS_AS(parse_tagged_corpus(R"({"id":"a","tokens":["x"],"tags":[]})"), ParseError);
}
