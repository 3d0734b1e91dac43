#include "stylematch/text_style.h"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "stylematch/error.h"

namespace stylematch {

namespace detail {
extern const std::string_view kBuiltinStopwords;
extern const std::string_view kBuiltinPronouns;
}  // namespace detail

namespace {

bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool closes_sentence(std::string_view trailing) {
    return trailing.find_first_of(".!?") != std::string_view::npos;
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Lexicon::Lexicon(std::set<std::string> stopwords, std::set<std::string> pronouns)
    : stopwords_(std::move(stopwords)), pronouns_(std::move(pronouns)) {}

const Lexicon& Lexicon::builtin() {
    static const Lexicon lexicon(parse_word_list(detail::kBuiltinStopwords),
                                 parse_word_list(detail::kBuiltinPronouns));
    return lexicon;
}

Lexicon Lexicon::from_files(const std::filesystem::path& stopwords, const std::filesystem::path& pronouns) {
    return Lexicon(parse_word_list(read_file(stopwords)), parse_word_list(read_file(pronouns)));
}

std::set<std::string> Lexicon::parse_word_list(std::string_view text) {
    std::set<std::string> words;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
        while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
        if (!line.empty()) words.insert(lower_ascii(line));
        pos = nl + 1;
    }
    return words;
}

TokenList tokenize(std::string_view text, const Lexicon& lexicon) {
    TokenList tokens;
    int sentence = 0;
    bool sentence_has_tokens = false;

    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && is_space(text[pos])) ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && !is_space(text[pos])) ++pos;
        if (start == pos) break;
        const std::string_view chunk = text.substr(start, pos - start);

        std::size_t b = 0;
        while (b < chunk.size() && is_punct(chunk[b])) ++b;
        std::size_t e = chunk.size();
        while (e > b && is_punct(chunk[e - 1])) --e;

        if (e > b) {
            Token t;
            t.surface = std::string(chunk);
            t.norm = lower_ascii(chunk.substr(b, e - b));
            t.is_stopword = lexicon.is_stopword(t.norm);
            t.is_pronoun = lexicon.is_pronoun(t.norm);
            t.sentence = sentence;
            tokens.push_back(std::move(t));
            sentence_has_tokens = true;
        }
        const std::string_view trailing = e > b ? chunk.substr(e) : chunk;
        if (sentence_has_tokens && closes_sentence(trailing)) {
            ++sentence;
            sentence_has_tokens = false;
        }
    }
    return tokens;
}

double pronoun_ratio(const TokenList& tokens) {
    if (tokens.empty()) return 0.0;
    std::size_t count = 0;
    for (const auto& t : tokens) count += t.is_pronoun ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(tokens.size());
}

std::string to_string(RepetitionScope scope) {
    return scope == RepetitionScope::Utterance ? "utterance" : "window";
}

RepetitionScope parse_repetition_scope(std::string_view s) {
    if (s == "utterance") return RepetitionScope::Utterance;
    if (s == "window") return RepetitionScope::Window;
    throw InvalidArgument("repetition_scope must be 'utterance' or 'window', got '" + std::string(s) + "'");
}

RepetitionResult repetition_features(const TokenList& utterance, const std::vector<TokenList>& history) {
    std::unordered_set<std::string> seen;
    for (const auto& past : history) {
        for (const auto& t : past) seen.insert(t.norm);
    }

    RepetitionResult out;
    const int sentences = utterance.empty() ? 0 : utterance.back().sentence + 1;
    out.sentence_flags.assign(static_cast<std::size_t>(sentences), false);
    for (const auto& t : utterance) {
        if (!t.is_term()) continue;
        ++out.term_count;
        if (!seen.insert(t.norm).second) {
            ++out.repeated_term_count;
            out.sentence_flags[static_cast<std::size_t>(t.sentence)] = true;
        }
    }
    out.term_rep_rate =
        out.term_count ? static_cast<double>(out.repeated_term_count) / out.term_count : 0.0;
    return out;
}

double speech_rate(int word_count, double voiced_duration_s) {
    if (voiced_duration_s <= 0.0) return 0.0;
    return static_cast<double>(word_count) / voiced_duration_s;
}

ContentFeatures content_features(const TokenList& tokens, const AcousticFeatures& acoustics,
                                 const std::vector<TokenList>& history, RepetitionScope scope) {
    static const std::vector<TokenList> kNoHistory;
    const auto rep = repetition_features(tokens, scope == RepetitionScope::Window ? history : kNoHistory);

    ContentFeatures f;
    f.word_count = static_cast<int>(tokens.size());
    for (const auto& t : tokens) f.pronoun_count += t.is_pronoun ? 1 : 0;
    f.pronoun_ratio = pronoun_ratio(tokens);
    f.term_count = rep.term_count;
    f.repeated_term_count = rep.repeated_term_count;
    f.term_rep_rate = rep.term_rep_rate;
    f.sentence_count = static_cast<int>(rep.sentence_flags.size());
    for (bool flag : rep.sentence_flags) f.repeated_sentence_count += flag ? 1 : 0;
    f.rep_sentence_ratio =
        f.sentence_count ? static_cast<double>(f.repeated_sentence_count) / f.sentence_count : 0.0;
    f.speech_rate_wps = speech_rate(f.word_count, acoustics.voiced_duration_s);
    return f;
}

ContentFeatures content_features(std::string_view text, const AcousticFeatures& acoustics,
                                 const std::vector<TokenList>& history, RepetitionScope scope,
                                 const Lexicon& lexicon) {
    return content_features(tokenize(text, lexicon), acoustics, history, scope);
}

}  // namespace stylematch
