#include "stylematch/cli.h"

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stylematch/error.h"
#include "stylematch/gateway.h"
#include "stylematch/pipeline.h"
#include "stylematch/serialize.h"
#include "stylematch/wav.h"

namespace stylematch::cli {

using json = nlohmann::json;

namespace {

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
    err << json{{"error", code}, {"message", message}}.dump(-1, ' ', false, json::error_handler_t::replace) << "\n";
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": invalid JSON: " + e.what());
    }
}

struct SessionFlags {
    std::string config_file;
    std::string packs_dir;
    std::string task;
    std::string condition;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* app, bool task_required) {
        app->add_option("--config", config_file, "Pipeline config file (JSON)");
        app->add_option("--packs-dir", packs_dir, "Directory of task packs");
        auto* t = app->add_option("--task", task, "Task pack id");
        auto* c = app->add_option("--condition", condition, "matching or control")
                      ->check(CLI::IsMember({"matching", "control"}));
        if (task_required) {
            t->required();
            c->required();
        }
        app->add_option("--seed", seed, "Seed for scripted-response rotation");
    }

    SessionConfig build() const {
        SessionConfig cfg;
        if (!config_file.empty()) cfg = apply_config_json(cfg, read_json_file(config_file));
        if (!task.empty()) cfg.task_id = task;
        if (!condition.empty()) cfg.condition = parse_condition(condition);
        if (seed) cfg.seed = *seed;
        return cfg;
    }

    std::filesystem::path packs() const { return packs_dir.empty() ? default_packs_dir() : std::filesystem::path(packs_dir); }
};

std::shared_ptr<const TaskPack> find_pack(const std::filesystem::path& dir, const std::string& task) {
    const auto reg = PackRegistry::load_dir(dir);
    auto pack = reg.find(task);
    if (!pack) throw NotFound("unknown task '" + task + "' in " + dir.string());
    return pack;
}

std::string fixed(double v, int digits) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

// --- features -------------------------------------------------------------

int cmd_features(const std::vector<std::string>& wavs, const VadConfig& vad, bool segments, std::ostream& out) {
    for (const auto& path : wavs) {
        const AudioClip clip = read_wav(path);
        const AcousticFeatures a = utterance_acoustics(clip, vad);
        json rec = {{"file", path}, {"sample_rate_hz", clip.sample_rate_hz}, {"duration_s", clip.duration_s()}};
        rec.update(to_json(a));
        if (segments) {
            json segs = json::array();
            for (const auto& s : detect_voiced_segments(clip, vad)) {
                segs.push_back({{"start_s", s.start_s}, {"end_s", s.end_s}, {"f0_hz", estimate_f0(s)},
                                {"rms", compute_rms(s)}});
            }
            rec["segments"] = segs;
        }
        out << rec.dump() << "\n";
    }
    return kExitOk;
}

// --- report ----------------------------------------------------------------

int cmd_report(const std::string& path, bool as_json, std::ostream& out) {
    const json record = read_json_file(path);
    if (!record.is_object() || record.value("schema_version", "") != kSessionSchema) {
        throw ParseError(path + ": not a " + std::string(kSessionSchema) + " record");
    }
    if (!record.contains("transcript") || !record["transcript"].is_array()) {
        throw ParseError(path + ": record has no transcript");
    }
    json summary;
    try {
        summary = summarize(record["transcript"]);
    } catch (const json::exception& e) {
        throw ParseError(path + ": malformed transcript: " + e.what());
    }
    if (as_json) {
        out << summary.dump(2) << "\n";
        return kExitOk;
    }

    const json& cfg = record["config"];
    out << "session: task=" << cfg.value("task_id", "?") << " condition=" << cfg.value("condition", "?")
        << " turns=" << summary["user_turns"] << "\n";
    out << "agent turns: " << summary["agent_turns"] << " (scripted " << summary["scripted_turns"] << ", generated "
        << summary["generated_turns"] << ", re-ranked " << summary["reranked_turns"] << ")\n";
    auto num = [&](const char* key) {
        return summary[key].is_null() ? std::string("n/a") : fixed(summary[key].get<double>(), 4);
    };
    out << "mean selected distance: " << num("mean_selected_distance")
        << "  mean rank-0 distance: " << num("mean_rank0_distance") << "\n";
    out << "mean rate: " << num("mean_rate") << "\n";
    for (const char* key : {"pitch_levels", "volume_levels"}) {
        out << (std::string(key) == "pitch_levels" ? "pitch levels:" : "volume levels:");
        // Print in ordinal order, not key order.
        const auto names = std::string(key) == "pitch_levels"
                               ? std::vector<std::string>{"x-low", "low", "medium", "high", "x-high"}
                               : std::vector<std::string>{"x-soft", "soft", "medium", "loud", "x-loud"};
        for (const auto& n : names) out << " " << n << "=" << summary[key][n];
        out << "\n";
    }
    out << "trajectory:\n";
    out << "  turn  pronoun  rep_rate  rep_sent    len    wps   pitch    loud  pitch_sd  loud_sd\n";
    for (const auto& step : summary["style_trajectory"]) {
        const json& w = step["window_style"];
        const json& d = step["prosody_delta"];
        auto col = [](double v, int width, int digits) {
            std::ostringstream ss;
            ss << std::setw(width) << std::fixed << std::setprecision(digits) << v;
            return ss.str();
        };
        out << std::setw(6) << step["index"].get<int>() << col(w["pronoun_ratio"], 9, 3) << col(w["term_rep_rate"], 10, 3)
            << col(w["rep_sentence_ratio"], 10, 3) << col(w["utterance_len_words"], 7, 1)
            << col(w["speech_rate_wps"], 7, 2) << col(w["pitch_hz"], 8, 1) << col(w["loudness_rms"], 8, 3);
        if (d.is_null()) {
            out << "         -        -";
        } else {
            out << col(d["pitch_sigma"], 10, 2) << col(d["loudness_sigma"], 9, 2);
        }
        out << "\n";
    }
    return kExitOk;
}

// --- repl ------------------------------------------------------------------

struct Persona {
    static constexpr double kBasePitchHz = 200.0;
    static constexpr double kBaseRms = 0.1;
    static constexpr double kStep = 0.05;  // one directive unit = 5% of base
    double pitch = 0.0;
    double loud = 0.0;
    double wps = kDefaultReferenceWps;

    AcousticFeatures acoustics(int words) const {
        AcousticFeatures a;
        a.f0_hz = std::clamp(kBasePitchHz * (1.0 + kStep * pitch), kMinF0Hz, kMaxF0Hz);
        a.rms = std::clamp(kBaseRms * (1.0 + kStep * loud), 0.0, 1.0);
        a.voiced_duration_s = wps > 0.0 ? words / wps : 0.0;
        return a;
    }
};

// Consumes leading /directives from the line; returns the remaining text.
// Sets `quit` on /quit.
std::string apply_directives(const std::string& line, Persona& persona, bool& quit, std::ostream& out) {
    std::istringstream ss(line);
    std::string word;
    std::string rest;
    while (ss >> word) {
        if (word.empty() || word[0] != '/') {
            std::getline(ss, rest);
            return word + rest;
        }
        if (word == "/quit" || word == "/exit") {
            quit = true;
            return {};
        }
        if (word == "/reset") {
            persona = Persona{};
            continue;
        }
        double value = 0.0;
        if (!(ss >> value)) {
            out << "! directive " << word << " needs a number\n";
            return {};
        }
        if (word == "/pitch") {
            persona.pitch = value;
        } else if (word == "/loud") {
            persona.loud = value;
        } else if (word == "/wps") {
            persona.wps = value;
        } else {
            out << "! unknown directive " << word << "\n";
            return {};
        }
    }
    return {};
}

int cmd_repl(const SessionFlags& flags, std::istream& in, std::ostream& out) {
    const SessionConfig cfg = flags.build();
    Session session(cfg, find_pack(flags.packs(), cfg.task_id));
    Persona persona;
    out << "stylematch repl: task=" << cfg.task_id << " condition=" << to_string(cfg.condition)
        << " (directives: /pitch N /loud N /wps N /reset /quit)\n";
    std::string line;
    while (out << "> " << std::flush, std::getline(in, line)) {
        bool quit = false;
        const std::string text = apply_directives(line, persona, quit, out);
        if (quit) break;
        if (text.empty()) {
            out << "  persona: pitch " << fixed(persona.acoustics(0).f0_hz, 1) << " Hz, rms "
                << fixed(persona.acoustics(0).rms, 3) << ", " << fixed(persona.wps, 2) << " wps\n";
            continue;
        }
        const int words = static_cast<int>(tokenize(text).size());
        const Turn& turn = session.process_turn(text, persona.acoustics(words));
        const auto& d = *turn.diagnostics;
        out << "agent: " << turn.text << "\n";
        out << "ssml:  " << *turn.ssml << "\n";
        out << "style: intent=" << d.intent_id.value_or("-")
            << " selected_rank=" << (d.selected_rank ? std::to_string(*d.selected_rank) : "-")
            << " window=" << to_json(d.window_style).dump()
            << " delta=" << (d.prosody_delta ? to_json(*d.prosody_delta).dump() : "none") << "\n";
    }
    out << "\n";
    return kExitOk;
}

// --- serve -----------------------------------------------------------------

Gateway* g_serving = nullptr;

extern "C" void handle_stop_signal(int) {
    if (g_serving) g_serving->stop();
}

int cmd_serve(const SessionFlags& flags, const std::string& host, std::optional<int> port, long idle_minutes,
              const std::string& cors, std::ostream& out, std::ostream& err) {
    Gateway::Options opts;
    opts.defaults = flags.build();
    opts.idle_timeout = std::chrono::minutes(idle_minutes);
    opts.cors_origin = cors;
    Gateway gateway(PackRegistry::load_dir(flags.packs()), opts);
    const int bound = gateway.bind(host, port.value_or(port_from_env()));
    if (bound <= 0) {
        report_error(err, "bind", "cannot bind " + host + ":" + std::to_string(port.value_or(port_from_env())));
        return kExitInput;
    }
    out << json{{"listening", host + ":" + std::to_string(bound)}}.dump() << std::endl;
    g_serving = &gateway;
    std::signal(SIGINT, handle_stop_signal);
    std::signal(SIGTERM, handle_stop_signal);
    gateway.listen();
    g_serving = nullptr;
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Conversational style matching agent"};
    app.name("stylematch");
    app.require_subcommand(1);

    // features
    std::vector<std::string> wavs;
    VadConfig vad;
    bool show_segments = false;
    auto* features = app.add_subcommand("features", "Acoustic features of WAV utterances (one JSON line each)");
    features->add_option("--wav", wavs, "PCM16 mono WAV file (repeatable)")->required();
    features->add_option("--threshold", vad.threshold, "VAD RMS threshold")->capture_default_str();
    features->add_option("--hangover-ms", vad.hangover_ms, "VAD hangover")->capture_default_str();
    features->add_option("--min-segment-ms", vad.min_segment_ms, "Minimum voiced segment")->capture_default_str();
    features->add_flag("--segments", show_segments, "Include per-segment detail");

    // replay
    SessionFlags replay_flags;
    std::string transcript_path, audio_dir, out_path;
    auto* replay_cmd = app.add_subcommand("replay", "Replay a user-turn transcript through the pipeline");
    replay_cmd->add_option("--transcript", transcript_path, "Line-delimited JSON user turns")->required();
    replay_cmd->add_option("--audio-dir", audio_dir, "Directory that audio_ref paths resolve against");
    replay_cmd->add_option("--out", out_path, "Session record output (default stdout)");
    replay_flags.attach(replay_cmd, true);

    // repl
    SessionFlags repl_flags;
    auto* repl = app.add_subcommand("repl", "Interactive text session");
    repl_flags.attach(repl, true);

    // serve
    SessionFlags serve_flags;
    std::string host = "127.0.0.1";
    std::optional<int> port;
    long idle_minutes = 30;
    std::string cors = "*";
    auto* serve = app.add_subcommand("serve", "Start the HTTP gateway");
    serve->add_option("--port", port, "Port (default $STYLEMATCH_PORT or 8080)")->check(CLI::Range(0, 65535));
    serve->add_option("--host", host, "Bind address")->capture_default_str();
    serve->add_option("--idle-timeout-min", idle_minutes, "Session idle timeout")->capture_default_str()->check(
        CLI::PositiveNumber);
    serve->add_option("--cors-origin", cors, "Access-Control-Allow-Origin value")->capture_default_str();
    serve_flags.attach(serve, false);

    // pack-lint
    std::vector<std::string> pack_files;
    auto* lint = app.add_subcommand("pack-lint", "Validate task pack files");
    lint->add_option("pack", pack_files, "Task pack JSON file(s)")->required();

    // report
    std::string session_path;
    bool report_json = false;
    auto* report = app.add_subcommand("report", "Summary metrics of a session record");
    report->add_option("--session", session_path, "Session record from replay")->required();
    report->add_flag("--json", report_json, "Print the summary as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report_error(err, "usage", e.what());
        return kExitUsage;
    }

    try {
        if (features->parsed()) return cmd_features(wavs, vad, show_segments, out);
        if (replay_cmd->parsed()) {
            const SessionConfig cfg = replay_flags.build();
            const auto entries = read_transcript(transcript_path);
            const auto pack = find_pack(replay_flags.packs(), cfg.task_id);
            const Session session =
                replay(entries, audio_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(audio_dir), cfg,
                       pack);
            const std::string text = dump_record(session_record(session.state()));
            if (out_path.empty()) {
                out << text;
            } else {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) throw Error("cannot write " + out_path);
                f << text;
            }
            return kExitOk;
        }
        if (repl->parsed()) return cmd_repl(repl_flags, in, out);
        if (serve->parsed()) return cmd_serve(serve_flags, host, port, idle_minutes, cors, out, err);
        if (lint->parsed()) {
            int status = kExitOk;
            for (const auto& f : pack_files) {
                const auto issues = lint_pack_file(f);
                if (issues.empty()) {
                    out << f << ": ok\n";
                    continue;
                }
                status = kExitInput;
                for (const auto& issue : issues) report_error(err, "pack", f + ": " + issue);
            }
            return status;
        }
        if (report->parsed()) return cmd_report(session_path, report_json, out);
    } catch (const Error& e) {
        report_error(err, "input", e.what());
        return kExitInput;
    } catch (const json::exception& e) {
        report_error(err, "input", e.what());
        return kExitInput;
    }
    report_error(err, "usage", "no subcommand");
    return kExitUsage;
}

}  // namespace stylematch::cli
