#include "stylematch/serialize.h"

#include <cmath>
#include <set>

#include "stylematch/error.h"

namespace stylematch {

using json = nlohmann::json;

json to_json(const StyleVector& v) {
    return {{"pronoun_ratio", v.pronoun_ratio},
            {"term_rep_rate", v.term_rep_rate},
            {"rep_sentence_ratio", v.rep_sentence_ratio},
            {"utterance_len_words", v.utterance_len_words},
            {"speech_rate_wps", v.speech_rate_wps},
            {"pitch_hz", v.pitch_hz},
            {"loudness_rms", v.loudness_rms}};
}

json to_json(const AcousticFeatures& a) {
    return {{"pitch_hz", a.f0_hz}, {"rms", a.rms}, {"voiced_duration_s", a.voiced_duration_s}};
}

json to_json(const ContentFeatures& c) {
    return {{"pronoun_ratio", c.pronoun_ratio},
            {"term_rep_rate", c.term_rep_rate},
            {"rep_sentence_ratio", c.rep_sentence_ratio},
            {"word_count", c.word_count},
            {"speech_rate_wps", c.speech_rate_wps},
            {"pronoun_count", c.pronoun_count},
            {"term_count", c.term_count},
            {"repeated_term_count", c.repeated_term_count},
            {"sentence_count", c.sentence_count},
            {"repeated_sentence_count", c.repeated_sentence_count}};
}

json to_json(const ProsodyTarget& t) {
    return {{"pitch", std::string(to_string(t.pitch))},
            {"volume", std::string(to_string(t.loudness))},
            {"rate", t.rate}};
}

json to_json(const ProsodyDelta& d) {
    return {{"pitch_sigma", d.pitch_sigma}, {"loudness_sigma", d.loudness_sigma}, {"window_wps", d.window_wps}};
}

json to_json(const StyleWeights& w) {
    return {{"w_pronoun", w.w_pronoun},
            {"w_rep_rate", w.w_rep_rate},
            {"w_rep_sent", w.w_rep_sent},
            {"w_len", w.w_len},
            {"len_scale", w.len_scale}};
}

json to_json(const VadConfig& v) {
    return {{"frame_ms", v.frame_ms},
            {"hop_ms", v.hop_ms},
            {"threshold", v.threshold},
            {"hangover_ms", v.hangover_ms},
            {"min_segment_ms", v.min_segment_ms}};
}

json to_json(const SessionConfig& c) {
    json j = {{"condition", to_string(c.condition)},
              {"task_id", c.task_id},
              {"style_weights", to_json(c.style_weights)},
              {"reference_wps", c.reference_wps},
              {"vad", to_json(c.vad)},
              {"repetition_scope", to_string(c.repetition_scope)},
              {"seed", c.seed},
              {"top_k", c.top_k}};
    j["stopwords_file"] = c.stopwords_file ? json(*c.stopwords_file) : json(nullptr);
    j["pronouns_file"] = c.pronouns_file ? json(*c.pronouns_file) : json(nullptr);
    return j;
}

namespace {

json stats_json(const RunningStats& s) {
    return {{"count", s.count()}, {"mean", s.mean()}, {"variance", s.variance()}, {"stddev", s.stddev()}};
}

json optional_json(const std::optional<ProsodyDelta>& d) { return d ? to_json(*d) : json(nullptr); }

double number_field(const json& j, const char* key, double fallback) {
    if (!j.contains(key) || j[key].is_null()) return fallback;
    if (!j[key].is_number()) throw InvalidArgument(std::string("'") + key + "' must be a number");
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) throw InvalidArgument(std::string("'") + key + "' must be finite");
    return v;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw InvalidArgument("unknown " + where + " key '" + key + "'");
    }
}

}  // namespace

json to_json(const SpeakerState& s) {
    json window = json::array();
    for (const auto& v : s.window) window.push_back(to_json(v));
    return {{"window", window},
            {"utterance_count", s.utterance_count},
            {"baseline_pitch", stats_json(s.baseline_pitch)},
            {"baseline_loudness", stats_json(s.baseline_loudness)},
            {"window_style", s.window.empty() ? json(nullptr) : to_json(window_style(s))},
            {"prosody_delta", optional_json(prosody_delta(s))}};
}

json to_json(const Turn& t) {
    json j = {{"index", t.index}, {"speaker", to_string(t.speaker)}, {"text", t.text}, {"style", to_json(t.style)},
              {"content", to_json(t.content)}};
    if (t.speaker == Speaker::User) {
        j["acoustics"] = t.acoustics ? to_json(*t.acoustics) : json(nullptr);
        return j;
    }
    j["ssml"] = t.ssml ? json(*t.ssml) : json(nullptr);
    if (t.diagnostics) {
        const auto& d = *t.diagnostics;
        json candidates = json::array();
        json distances = json::array();
        for (const auto& c : d.candidates) {
            candidates.push_back({{"model_rank", c.model_rank}, {"text", c.text}, {"distance", c.distance}});
            distances.push_back(c.distance);
        }
        j["diagnostics"] = {{"intent_id", d.intent_id ? json(*d.intent_id) : json(nullptr)},
                            {"candidates", candidates},
                            {"candidate_distances", distances},
                            {"selected_rank", d.selected_rank ? json(*d.selected_rank) : json(nullptr)},
                            {"prosody_target", to_json(d.prosody_target)},
                            {"window_style", to_json(d.window_style)},
                            {"prosody_delta", optional_json(d.prosody_delta)}};
    }
    return j;
}

AcousticFeatures acoustics_from_json(const json& j) {
    if (!j.is_object()) throw InvalidArgument("acoustics must be an object");
    reject_unknown(j, {"pitch_hz", "rms", "voiced_duration_s"}, "acoustics");
    AcousticFeatures a;
    a.f0_hz = number_field(j, "pitch_hz", 0.0);
    a.rms = number_field(j, "rms", 0.0);
    a.voiced_duration_s = number_field(j, "voiced_duration_s", 0.0);
    if (a.f0_hz != 0.0 && (a.f0_hz < kMinF0Hz || a.f0_hz > kMaxF0Hz)) {
        throw InvalidArgument("pitch_hz must be 0 or within [50, 500]");
    }
    if (a.rms < 0.0 || a.rms > 1.0) throw InvalidArgument("rms must be within [0, 1]");
    if (a.voiced_duration_s < 0.0) throw InvalidArgument("voiced_duration_s must be non-negative");
    return a;
}

ProsodyTarget prosody_target_from_json(const json& j) {
    ProsodyTarget t;
    t.pitch = parse_pitch_level(j.at("pitch").get<std::string>());
    t.loudness = parse_loudness_level(j.at("volume").get<std::string>());
    t.rate = j.at("rate").get<double>();
    return t;
}

SessionConfig apply_config_json(SessionConfig c, const json& j) {
    if (!j.is_object()) throw InvalidArgument("config must be an object");
    reject_unknown(j,
                   {"schema_version", "condition", "task_id", "style_weights", "reference_wps", "vad",
                    "repetition_scope", "seed", "top_k", "stopwords_file", "pronouns_file"},
                   "config");
    if (j.contains("schema_version") && j["schema_version"] != kConfigSchema) {
        throw InvalidArgument("unsupported config schema_version " + j["schema_version"].dump());
    }
    auto string_field = [&](const char* key) {
        if (!j[key].is_string()) throw InvalidArgument(std::string("'") + key + "' must be a string");
        return j[key].get<std::string>();
    };
    if (j.contains("condition")) c.condition = parse_condition(string_field("condition"));
    if (j.contains("task_id")) c.task_id = string_field("task_id");
    if (j.contains("repetition_scope")) c.repetition_scope = parse_repetition_scope(string_field("repetition_scope"));
    c.reference_wps = number_field(j, "reference_wps", c.reference_wps);
    if (j.contains("seed")) {
        const json& seed = j["seed"];
        if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) throw InvalidArgument("'seed' must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("top_k")) {
        if (!j["top_k"].is_number_integer()) throw InvalidArgument("'top_k' must be an integer");
        c.top_k = j["top_k"].get<int>();
    }
    if (j.contains("style_weights")) {
        const json& w = j["style_weights"];
        if (!w.is_object()) throw InvalidArgument("style_weights must be an object");
        reject_unknown(w, {"w_pronoun", "w_rep_rate", "w_rep_sent", "w_len", "len_scale"}, "style_weights");
        c.style_weights.w_pronoun = number_field(w, "w_pronoun", c.style_weights.w_pronoun);
        c.style_weights.w_rep_rate = number_field(w, "w_rep_rate", c.style_weights.w_rep_rate);
        c.style_weights.w_rep_sent = number_field(w, "w_rep_sent", c.style_weights.w_rep_sent);
        c.style_weights.w_len = number_field(w, "w_len", c.style_weights.w_len);
        c.style_weights.len_scale = number_field(w, "len_scale", c.style_weights.len_scale);
    }
    if (j.contains("vad")) {
        const json& v = j["vad"];
        if (!v.is_object()) throw InvalidArgument("vad must be an object");
        reject_unknown(v, {"frame_ms", "hop_ms", "threshold", "hangover_ms", "min_segment_ms"}, "vad");
        c.vad.frame_ms = number_field(v, "frame_ms", c.vad.frame_ms);
        c.vad.hop_ms = number_field(v, "hop_ms", c.vad.hop_ms);
        c.vad.threshold = number_field(v, "threshold", c.vad.threshold);
        c.vad.hangover_ms = number_field(v, "hangover_ms", c.vad.hangover_ms);
        c.vad.min_segment_ms = number_field(v, "min_segment_ms", c.vad.min_segment_ms);
    }
    for (const char* key : {"stopwords_file", "pronouns_file"}) {
        if (!j.contains(key)) continue;
        std::optional<std::string> value;
        if (!j[key].is_null()) value = string_field(key);
        (std::string(key) == "stopwords_file" ? c.stopwords_file : c.pronouns_file) = value;
    }
    validate(c);
    return c;
}

json summarize(const json& transcript) {
    json pitch_hist = json::object();
    json volume_hist = json::object();
    for (auto level : {PitchLevel::XLow, PitchLevel::Low, PitchLevel::Medium, PitchLevel::High, PitchLevel::XHigh}) {
        pitch_hist[std::string(to_string(level))] = 0;
    }
    for (auto level : {LoudnessLevel::XSoft, LoudnessLevel::Soft, LoudnessLevel::Medium, LoudnessLevel::Loud,
                       LoudnessLevel::XLoud}) {
        volume_hist[std::string(to_string(level))] = 0;
    }

    int user_turns = 0, agent_turns = 0, scripted = 0, generated = 0, reranked = 0;
    double selected_sum = 0.0, rank0_sum = 0.0, rate_sum = 0.0;
    json trajectory = json::array();
    for (const auto& t : transcript) {
        if (t.at("speaker") == "user") {
            ++user_turns;
            continue;
        }
        ++agent_turns;
        const json& d = t.at("diagnostics");
        const json& target = d.at("prosody_target");
        pitch_hist[target.at("pitch").get<std::string>()] = pitch_hist[target.at("pitch").get<std::string>()].get<int>() + 1;
        volume_hist[target.at("volume").get<std::string>()] =
            volume_hist[target.at("volume").get<std::string>()].get<int>() + 1;
        rate_sum += target.at("rate").get<double>();
        if (!d.at("intent_id").is_null()) {
            ++scripted;
        } else {
            ++generated;
            const int selected = d.at("selected_rank").get<int>();
            if (selected != 0) ++reranked;
            for (const auto& c : d.at("candidates")) {
                const int rank = c.at("model_rank").get<int>();
                if (rank == selected) selected_sum += c.at("distance").get<double>();
                if (rank == 0) rank0_sum += c.at("distance").get<double>();
            }
        }
        trajectory.push_back({{"index", t.at("index")},
                              {"window_style", d.at("window_style")},
                              {"prosody_delta", d.at("prosody_delta")}});
    }
    return {{"user_turns", user_turns},
            {"agent_turns", agent_turns},
            {"scripted_turns", scripted},
            {"generated_turns", generated},
            {"reranked_turns", reranked},
            {"mean_selected_distance", generated ? json(selected_sum / generated) : json(nullptr)},
            {"mean_rank0_distance", generated ? json(rank0_sum / generated) : json(nullptr)},
            {"mean_rate", agent_turns ? json(rate_sum / agent_turns) : json(nullptr)},
            {"pitch_levels", pitch_hist},
            {"volume_levels", volume_hist},
            {"style_trajectory", trajectory}};
}

json session_record(const SessionState& state) {
    json transcript = json::array();
    for (const auto& t : state.transcript) transcript.push_back(to_json(t));
    json record = {{"schema_version", kSessionSchema},
                   {"config", to_json(state.config)},
                   {"turn_index", state.turn_index},
                   {"user_state", to_json(state.user_state)},
                   {"transcript", transcript}};
    record["summary"] = summarize(record["transcript"]);
    return record;
}

std::string dump_record(const json& record) {
    return record.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

}  // namespace stylematch
