#pragma once

#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stylematch/audio.h"

namespace stylematch {

// Word lists used to flag tokens. The built-in lists are compiled from
// data/stopwords.txt and data/pronouns.txt.
class Lexicon {
public:
    Lexicon(std::set<std::string> stopwords, std::set<std::string> pronouns);

    static const Lexicon& builtin();
    static Lexicon from_files(const std::filesystem::path& stopwords, const std::filesystem::path& pronouns);
    // One word per line; blank lines and '#' comments ignored; lowercased.
    static std::set<std::string> parse_word_list(std::string_view text);

    bool is_stopword(const std::string& norm) const { return stopwords_.count(norm) > 0; }
    bool is_pronoun(const std::string& norm) const { return pronouns_.count(norm) > 0; }

    const std::set<std::string>& stopwords() const { return stopwords_; }
    const std::set<std::string>& pronouns() const { return pronouns_; }

private:
    std::set<std::string> stopwords_;
    std::set<std::string> pronouns_;
};

struct Token {
    std::string surface;
    std::string norm;
    bool is_stopword = false;
    bool is_pronoun = false;
    int sentence = 0;  // 0-based sentence index within the utterance

    bool is_term() const { return !is_stopword; }
};

using TokenList = std::vector<Token>;

// Whitespace split, edge punctuation stripped, ASCII-lowercased. A chunk whose
// trailing punctuation contains '.', '!' or '?' closes the current sentence.
TokenList tokenize(std::string_view text, const Lexicon& lexicon = Lexicon::builtin());

double pronoun_ratio(const TokenList& tokens);

enum class RepetitionScope { Utterance, Window };

std::string to_string(RepetitionScope scope);
RepetitionScope parse_repetition_scope(std::string_view s);

struct RepetitionResult {
    double term_rep_rate = 0.0;
    std::vector<bool> sentence_flags;  // one per non-empty sentence, in order
    int term_count = 0;
    int repeated_term_count = 0;
};

// `history` holds the same speaker's earlier utterances, oldest first.
RepetitionResult repetition_features(const TokenList& utterance, const std::vector<TokenList>& history);

double speech_rate(int word_count, double voiced_duration_s);

struct ContentFeatures {
    double pronoun_ratio = 0.0;
    double term_rep_rate = 0.0;
    double rep_sentence_ratio = 0.0;
    int word_count = 0;
    double speech_rate_wps = 0.0;

    // Integer counts behind the ratios.
    int pronoun_count = 0;
    int term_count = 0;
    int repeated_term_count = 0;
    int sentence_count = 0;
    int repeated_sentence_count = 0;

    bool operator==(const ContentFeatures&) const = default;
};

ContentFeatures content_features(const TokenList& tokens, const AcousticFeatures& acoustics,
                                 const std::vector<TokenList>& history,
                                 RepetitionScope scope = RepetitionScope::Window);

ContentFeatures content_features(std::string_view text, const AcousticFeatures& acoustics,
                                 const std::vector<TokenList>& history,
                                 RepetitionScope scope = RepetitionScope::Window,
                                 const Lexicon& lexicon = Lexicon::builtin());

}  // namespace stylematch
