#include "stylematch/pipeline.h"

#include <cctype>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "stylematch/error.h"
#include "stylematch/serialize.h"
#include "stylematch/wav.h"

namespace stylematch {

using json = nlohmann::json;

std::string to_string(Condition c) { return c == Condition::Matching ? "matching" : "control"; }

Condition parse_condition(std::string_view s) {
    if (s == "matching") return Condition::Matching;
    if (s == "control") return Condition::Control;
    throw InvalidArgument("condition must be 'matching' or 'control', got '" + std::string(s) + "'");
}

std::string to_string(Speaker s) { return s == Speaker::User ? "user" : "agent"; }

void validate(const SessionConfig& cfg) {
    validate(cfg.style_weights);
    if (!(cfg.reference_wps > 0.0)) throw InvalidArgument("reference_wps must be positive");
    if (cfg.top_k < 1) throw InvalidArgument("top_k must be at least 1");
    if (!(cfg.vad.frame_ms > 0.0) || !(cfg.vad.hop_ms > 0.0)) throw InvalidArgument("VAD frame and hop must be positive");
    if (cfg.vad.threshold < 0.0 || cfg.vad.hangover_ms < 0.0 || cfg.vad.min_segment_ms < 0.0) {
        throw InvalidArgument("VAD threshold, hangover and minimum segment must be non-negative");
    }
}

namespace {

bool blank(std::string_view s) {
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::shared_ptr<const Lexicon> make_lexicon(const SessionConfig& cfg) {
    if (!cfg.stopwords_file && !cfg.pronouns_file) {
        return std::shared_ptr<const Lexicon>(&Lexicon::builtin(), [](const Lexicon*) {});
    }
    const Lexicon& base = Lexicon::builtin();
    auto read_list = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw NotFound("cannot open " + path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return Lexicon::parse_word_list(text);
    };
    return std::make_shared<const Lexicon>(cfg.stopwords_file ? read_list(*cfg.stopwords_file) : base.stopwords(),
                                           cfg.pronouns_file ? read_list(*cfg.pronouns_file) : base.pronouns());
}

}  // namespace

Session::Session(SessionConfig config, std::shared_ptr<const TaskPack> pack) : pack_(std::move(pack)) {
    if (!pack_) throw InvalidArgument("session needs a task pack");
    validate(config);
    if (config.task_id.empty()) config.task_id = pack_->task_id;
    state_.config = std::move(config);
    lexicon_ = make_lexicon(state_.config);
}

std::vector<Candidate> styled_candidates(const TokenList& user_tokens, const TaskPack& pack,
                                         const std::vector<TokenList>& user_history, const SessionConfig& cfg,
                                         const Lexicon& lexicon) {
    auto candidates = generate_candidates(user_tokens, pack, cfg.top_k);
    for (auto& c : candidates) {
        const auto content = content_features(tokenize(c.text, lexicon), AcousticFeatures{}, user_history,
                                              cfg.repetition_scope);
        c.style = make_style_vector(content, AcousticFeatures{});
    }
    return candidates;
}

const Turn& Session::process_turn(std::string_view text, const std::optional<AcousticFeatures>& acoustics) {
    if (blank(text)) throw InvalidArgument("turn text is empty");
    const SessionConfig& cfg = state_.config;
    const Lexicon& lexicon = *lexicon_;

    // Sensing: user style against the user's own prior window.
    const TokenList tokens = tokenize(text, lexicon);
    const AcousticFeatures sensed = acoustics.value_or(AcousticFeatures{});
    const std::vector<TokenList> prior(state_.user_history.begin(), state_.user_history.end());
    const ContentFeatures user_content = content_features(tokens, sensed, prior, cfg.repetition_scope);

    // Build both turns before touching state so a failure leaves the session unchanged.
    SpeakerState next_state = update(state_.user_state, user_content, sensed);
    std::deque<TokenList> next_history = state_.user_history;
    next_history.push_back(tokens);
    while (next_history.size() > kStyleWindowSize) next_history.pop_front();
    const std::vector<TokenList> window_history(next_history.begin(), next_history.end());

    Turn user;
    user.index = state_.turn_index;
    user.speaker = Speaker::User;
    user.text = std::string(text);
    user.style = make_style_vector(user_content, sensed);
    user.acoustics = acoustics;
    user.content = user_content;

    TurnDiagnostics diag;
    diag.window_style = window_style(next_state);
    diag.prosody_delta = prosody_delta(next_state);

    Turn agent;
    agent.index = state_.turn_index;
    agent.speaker = Speaker::Agent;

    if (const Intent* intent = match_intent(tokens, *pack_)) {
        diag.intent_id = intent->id;
        agent.text = select_scripted(*intent, cfg.seed + static_cast<std::uint64_t>(state_.turn_index));
    } else {
        std::vector<Candidate> candidates = styled_candidates(tokens, *pack_, window_history, cfg, lexicon);
        for (const auto& c : candidates) {
            diag.candidates.push_back({c.model_rank, c.text,
                                       content_distance(c.style, diag.window_style, cfg.style_weights)});
        }
        if (cfg.condition == Condition::Matching) {
            const auto ranked = rerank(std::move(candidates), diag.window_style, cfg.style_weights);
            agent.text = ranked.front().text;
            diag.selected_rank = ranked.front().model_rank;
        } else {
            agent.text = candidates.front().text;
            diag.selected_rank = candidates.front().model_rank;
        }
    }

    diag.prosody_target = cfg.condition == Condition::Matching ? map_prosody(diag.prosody_delta, cfg.reference_wps)
                                                               : ProsodyTarget{};
    agent.ssml = emit_ssml(agent.text, diag.prosody_target);
    agent.content = content_features(tokenize(agent.text, lexicon), AcousticFeatures{}, window_history,
                                     cfg.repetition_scope);
    agent.style = make_style_vector(agent.content, AcousticFeatures{});
    agent.diagnostics = std::move(diag);

    state_.user_state = std::move(next_state);
    state_.user_history = std::move(next_history);
    state_.transcript.push_back(std::move(user));
    state_.transcript.push_back(std::move(agent));
    ++state_.turn_index;
    return state_.transcript.back();
}

std::vector<TranscriptEntry> parse_transcript(std::istream& in) {
    std::vector<TranscriptEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!j.is_object()) throw ParseError("record must be a JSON object", lineno);

        TranscriptEntry e;
        e.line = lineno;
        if (j.contains("index")) {
            if (!j["index"].is_number_integer()) throw ParseError("'index' must be an integer", lineno);
            e.index = j["index"].get<int>();
        } else {
            e.index = entries.empty() ? 0 : entries.back().index + 1;
        }
        if (!entries.empty() && e.index <= entries.back().index) {
            throw ParseError("'index' must increase (got " + std::to_string(e.index) + ")", lineno);
        }
        if (!j.contains("text") || !j["text"].is_string()) throw ParseError("'text' must be a string", lineno);
        e.text = j["text"].get<std::string>();
        if (blank(e.text)) throw ParseError("'text' is empty", lineno);
        if (j.contains("audio_ref") && !j["audio_ref"].is_null()) {
            if (!j["audio_ref"].is_string()) throw ParseError("'audio_ref' must be a string", lineno);
            e.audio_ref = j["audio_ref"].get<std::string>();
        }
        if (j.contains("acoustics") && !j["acoustics"].is_null()) {
            try {
                e.acoustics = acoustics_from_json(j["acoustics"]);
            } catch (const Error& err) {
                throw ParseError(err.what(), lineno);
            }
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<TranscriptEntry> read_transcript(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("cannot open " + path.string());
    try {
        return parse_transcript(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

Session replay(const std::vector<TranscriptEntry>& entries, const std::optional<std::filesystem::path>& audio_dir,
               const SessionConfig& config, std::shared_ptr<const TaskPack> pack) {
    if (audio_dir && !std::filesystem::is_directory(*audio_dir)) {
        throw NotFound("audio directory not found: " + audio_dir->string());
    }
    Session session(config, std::move(pack));
    for (const auto& e : entries) {
        std::optional<AcousticFeatures> acoustics = e.acoustics;
        if (audio_dir && e.audio_ref) {
            const auto path = *audio_dir / *e.audio_ref;
            if (!std::filesystem::exists(path)) {
                throw NotFound("line " + std::to_string(e.line) + ": audio file not found: " + path.string());
            }
            acoustics = utterance_acoustics(read_wav(path), config.vad);
        }
        session.process_turn(e.text, acoustics);
    }
    return session;
}

}  // namespace stylematch
