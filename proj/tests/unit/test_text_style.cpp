#include <doctest.h>

#include <json.hpp>

#include <random>
#include <sstream>

#include "../support/test_support.h"
#include "stylematch/text_style.h"

using namespace stylematch;
using namespace stylematch::testing;

namespace {

std::vector<std::string> norms(const TokenList& t) {
    std::vector<std::string> out;
    for (const auto& tok : t) out.push_back(tok.norm);
    return out;
}

std::vector<TokenList> history_of(std::initializer_list<const char*> texts) {
    std::vector<TokenList> h;
    for (const char* t : texts) h.push_back(tokenize(t));
    return h;
}

}  // namespace

TEST_CASE("tokenize") {
    const auto t = tokenize("Do you like movies?");
    REQUIRE(t.size() == 4);
    CHECK(t[3].norm == "movies");
    CHECK(t[3].surface == "movies?");
    CHECK(t[1].is_pronoun);
    CHECK_FALSE(t[3].is_stopword);

    CHECK(tokenize("").empty());
    CHECK(tokenize("   \t\n").empty());
    CHECK(norms(tokenize("I... I think so.")) == std::vector<std::string>{"i", "i", "think", "so"});
    CHECK(norms(tokenize("-- ... !!")).empty());
    CHECK(norms(tokenize("\"Well,\" she said.")) == std::vector<std::string>{"well", "she", "said"});
}

TEST_CASE("tokenize: sentence indices") {
    const auto t = tokenize("You like movies. You really like movies.");
    REQUIRE(t.size() == 7);
    CHECK(t[2].sentence == 0);
    CHECK(t[3].sentence == 1);
    CHECK(tokenize("no punctuation at all").back().sentence == 0);
    const auto dots = tokenize("Hi . there");
    CHECK(dots.back().sentence == 1);
}

TEST_CASE("tokenize: order preserved and deterministic") {
    std::mt19937 rng(1);
    const std::vector<std::string> words{"Alpha", "beta,", "GAMMA.", "delta!", "you", "(eps)", "zeta?", "it's"};
    for (int trial = 0; trial < 100; ++trial) {
        std::ostringstream text;
        std::vector<std::string> expect;
        for (int i = 0; i < 12; ++i) {
            const auto& w = words[rng() % words.size()];
            text << w << (rng() % 2 ? "  " : " ");
            std::string n;
            const auto b = w.find_first_not_of("(.,!?)");
            const auto e = w.find_last_not_of("(.,!?)");
            for (char ch : w.substr(b, e - b + 1)) n.push_back(static_cast<char>(std::tolower(ch)));
            expect.push_back(n);
        }
        const auto a = tokenize(text.str());
        CHECK(norms(a) == expect);
        CHECK(norms(tokenize(text.str())) == norms(a));
        for (const auto& tok : a) {
            CHECK_FALSE(tok.norm.empty());
            if (tok.is_pronoun) CHECK(Lexicon::builtin().pronouns().count(tok.norm) == 1);
        }
    }
}

TEST_CASE("pronoun ratio") {
    CHECK(pronoun_ratio(tokenize("you like movies")) == doctest::Approx(1.0 / 3.0));
    CHECK(pronoun_ratio(tokenize("run fast now")) == 0.0);
    CHECK(pronoun_ratio(tokenize("I told you he left")) == doctest::Approx(3.0 / 5.0));
    CHECK(pronoun_ratio({}) == 0.0);
    // Possessives are not pronouns here.
    CHECK(pronoun_ratio(tokenize("my dog and your cat")) == 0.0);
}

TEST_CASE("repetition features") {
    SUBCASE("within utterance") {
        const auto r = repetition_features(tokenize("dogs love dogs"), {});
        CHECK(r.term_rep_rate == doctest::Approx(1.0 / 3.0));
        CHECK(r.term_count == 3);
        CHECK(r.repeated_term_count == 1);
        CHECK(r.sentence_flags == std::vector<bool>{true});
    }
    SUBCASE("all unique") {
        const auto r = repetition_features(tokenize("Cats chase mice. Birds sing."), {});
        CHECK(r.term_rep_rate == 0.0);
        CHECK(r.sentence_flags == std::vector<bool>{false, false});
    }
    SUBCASE("against history") {
        const auto r = repetition_features(tokenize("I like parks"), history_of({"parks are nice"}));
        CHECK(r.term_count == 2);
        CHECK(r.term_rep_rate == doctest::Approx(0.5));
    }
    SUBCASE("no terms") {
        const auto r = repetition_features(tokenize("it is what it is"), {});
        CHECK(r.term_count == 0);
        CHECK(r.term_rep_rate == 0.0);
    }
}

TEST_CASE("speech rate") {
    CHECK(speech_rate(10, 4.0) == doctest::Approx(2.5));
    CHECK(speech_rate(0, 3.0) == 0.0);
    CHECK(speech_rate(7, 2.8) == doctest::Approx(2.5));
    CHECK(speech_rate(5, 0.0) == 0.0);
}

TEST_CASE("content features") {
    CHECK(content_features("", AcousticFeatures{}, {}) == ContentFeatures{});

    const auto f = content_features("You like movies. You really like movies.", AcousticFeatures{}, {});
    CHECK(f.word_count == 7);
    CHECK(f.pronoun_count == 2);
    CHECK(f.pronoun_ratio == doctest::Approx(2.0 / 7.0));
    CHECK(f.sentence_count == 2);
    CHECK(f.repeated_sentence_count == 1);
    CHECK(f.rep_sentence_ratio == doctest::Approx(0.5));
    CHECK(std::abs(f.pronoun_ratio * f.word_count - std::round(f.pronoun_ratio * f.word_count)) < 1e-12);

    const auto timed = content_features("one two three four", AcousticFeatures{0, 0, 2.0}, {});
    CHECK(timed.speech_rate_wps == doctest::Approx(2.0));
}

TEST_CASE("content features: scope flag") {
    const auto h = history_of({"parks are nice"});
    const auto window = content_features("I like parks", AcousticFeatures{}, h, RepetitionScope::Window);
    const auto local = content_features("I like parks", AcousticFeatures{}, h, RepetitionScope::Utterance);
    CHECK(window.repeated_term_count == 1);
    CHECK(local.repeated_term_count == 0);
    CHECK(parse_repetition_scope("utterance") == RepetitionScope::Utterance);
    CHECK(to_string(RepetitionScope::Window) == "window");
    CHECK_THROWS(parse_repetition_scope("global"));
}

TEST_CASE("content features: 50-utterance corpus against hand-count oracle") {
    // tests/oracles/content_oracle.py; history is the previous five lines.
    const auto expected = nlohmann::json::parse(slurp(fixture("content_expected.json")));
    std::istringstream corpus(slurp(fixture("content_corpus.txt")));
    std::vector<std::string> lines;
    for (std::string line; std::getline(corpus, line);)
        if (!line.empty()) lines.push_back(line);
    REQUIRE(lines.size() == 50);
    REQUIRE(expected.size() == 50);

    for (std::size_t i = 0; i < lines.size(); ++i) {
        CAPTURE(lines[i]);
        const auto& e = expected[i];
        REQUIRE(e["text"] == lines[i]);
        std::vector<TokenList> history;
        for (std::size_t j = i >= 5 ? i - 5 : 0; j < i; ++j) history.push_back(tokenize(lines[j]));

        auto check = [](const ContentFeatures& f, const nlohmann::json& x) {
            CHECK(f.word_count == x["word_count"].get<int>());
            CHECK(f.pronoun_count == x["pronoun_count"].get<int>());
            CHECK(f.term_count == x["term_count"].get<int>());
            CHECK(f.repeated_term_count == x["repeated_term_count"].get<int>());
            CHECK(f.sentence_count == x["sentence_count"].get<int>());
            CHECK(f.repeated_sentence_count == x["repeated_sentence_count"].get<int>());
            const int wc = x["word_count"].get<int>();
            CHECK(f.pronoun_ratio == doctest::Approx(wc ? x["pronoun_count"].get<double>() / wc : 0.0));
            CHECK(f.pronoun_ratio >= 0.0);
            CHECK(f.pronoun_ratio <= 1.0);
            CHECK(f.term_rep_rate >= 0.0);
            CHECK(f.term_rep_rate <= 1.0);
            CHECK(f.rep_sentence_ratio >= 0.0);
            CHECK(f.rep_sentence_ratio <= 1.0);
        };
        check(content_features(lines[i], AcousticFeatures{}, history, RepetitionScope::Window), e);
        check(content_features(lines[i], AcousticFeatures{}, history, RepetitionScope::Utterance), e["utterance_only"]);
    }
}

TEST_CASE("repetition: adding history never lowers the rate") {
    std::istringstream corpus(slurp(fixture("content_corpus.txt")));
    std::vector<TokenList> all;
    for (std::string line; std::getline(corpus, line);)
        if (!line.empty()) all.push_back(tokenize(line));
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const auto& u = all[rng() % all.size()];
        std::vector<TokenList> history;
        double prev = repetition_features(u, history).term_rep_rate;
        for (int k = 0; k < 8; ++k) {
            history.push_back(all[rng() % all.size()]);
            const double now = repetition_features(u, history).term_rep_rate;
            CHECK(now >= prev);
            prev = now;
        }
    }
}

TEST_CASE("lexicon: data files match the built-in lists") {
    const auto lex = Lexicon::from_files(source_dir() / "data/stopwords.txt", source_dir() / "data/pronouns.txt");
    CHECK(lex.stopwords() == Lexicon::builtin().stopwords());
    CHECK(lex.pronouns() == Lexicon::builtin().pronouns());
    CHECK(Lexicon::builtin().pronouns().count("you") == 1);
    CHECK(Lexicon::builtin().pronouns().count("my") == 0);

    const auto words = Lexicon::parse_word_list("# comment\nFoo\n\n  bar  \n");
    CHECK(words == std::set<std::string>{"foo", "bar"});

    const Lexicon custom({"like"}, {"movies"});
    const auto t = tokenize("you like movies", custom);
    CHECK_FALSE(t[0].is_pronoun);
    CHECK(t[1].is_stopword);
    CHECK(t[2].is_pronoun);
}
