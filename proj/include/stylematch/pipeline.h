#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylematch/audio.h"
#include "stylematch/dialogue.h"
#include "stylematch/prosody.h"
#include "stylematch/ranker.h"
#include "stylematch/style_state.h"
#include "stylematch/text_style.h"

namespace stylematch {

enum class Condition { Matching, Control };

std::string to_string(Condition c);
Condition parse_condition(std::string_view s);

struct SessionConfig {
    Condition condition = Condition::Matching;
    std::string task_id;
    StyleWeights style_weights;
    double reference_wps = kDefaultReferenceWps;
    VadConfig vad;
    RepetitionScope repetition_scope = RepetitionScope::Window;
    std::uint64_t seed = 0;
    int top_k = kDefaultTopK;
    // Optional word-list overrides; the built-in lexicon is used otherwise.
    std::optional<std::string> stopwords_file;
    std::optional<std::string> pronouns_file;
};

// Throws InvalidArgument on out-of-range settings.
void validate(const SessionConfig& cfg);

enum class Speaker { User, Agent };
std::string to_string(Speaker s);

struct CandidateDiagnostic {
    int model_rank = 0;
    std::string text;
    double distance = 0.0;
};

struct TurnDiagnostics {
    std::optional<std::string> intent_id;
    std::vector<CandidateDiagnostic> candidates;  // generator order
    std::optional<int> selected_rank;              // set for generated replies
    ProsodyTarget prosody_target;
    StyleVector window_style;
    std::optional<ProsodyDelta> prosody_delta;
};

struct Turn {
    int index = 0;
    Speaker speaker = Speaker::User;
    std::string text;
    std::optional<std::string> ssml;              // agent only
    StyleVector style;
    std::optional<AcousticFeatures> acoustics;    // user only, when sensed
    ContentFeatures content;
    std::optional<TurnDiagnostics> diagnostics;   // agent only
};

struct SessionState {
    SessionConfig config;
    SpeakerState user_state;
    std::deque<TokenList> user_history;  // last kStyleWindowSize user utterances
    std::vector<Turn> transcript;
    int turn_index = 0;
};

// Owns a session's state together with its (shared, immutable) task pack.
// One process_turn at a time.
class Session {
public:
    Session(SessionConfig config, std::shared_ptr<const TaskPack> pack);

    // Returns the agent turn just appended. Throws InvalidArgument on
    // empty text.
    const Turn& process_turn(std::string_view text, const std::optional<AcousticFeatures>& acoustics);

    const SessionState& state() const { return state_; }
    const TaskPack& pack() const { return *pack_; }

private:
    SessionState state_;
    std::shared_ptr<const TaskPack> pack_;
    std::shared_ptr<const Lexicon> lexicon_;
};

// The candidate set for a turn before any re-ranking, with style filled in.
std::vector<Candidate> styled_candidates(const TokenList& user_tokens, const TaskPack& pack,
                                         const std::vector<TokenList>& user_history, const SessionConfig& cfg,
                                         const Lexicon& lexicon);

struct TranscriptEntry {
    int index = 0;
    std::string text;
    std::optional<std::string> audio_ref;
    std::optional<AcousticFeatures> acoustics;
    std::size_t line = 0;
};

// Line-delimited JSON, one user turn per line; blank lines skipped.
// Throws ParseError carrying the offending line number.
std::vector<TranscriptEntry> parse_transcript(std::istream& in);
std::vector<TranscriptEntry> read_transcript(const std::filesystem::path& path);

// Runs every entry through a fresh session. With `audio_dir`, audio_ref
// entries are loaded and analyzed; without it they are ignored.
Session replay(const std::vector<TranscriptEntry>& entries, const std::optional<std::filesystem::path>& audio_dir,
               const SessionConfig& config, std::shared_ptr<const TaskPack> pack);

}  // namespace stylematch
