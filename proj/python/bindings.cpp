#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

#include "stylematch/audio.h"
#include "stylematch/dialogue.h"
#include "stylematch/error.h"
#include "stylematch/pipeline.h"
#include "stylematch/prosody.h"
#include "stylematch/serialize.h"
#include "stylematch/text_style.h"
#include "stylematch/wav.h"

namespace py = pybind11;
using namespace stylematch;
using nlohmann::json;

namespace {

// JSON values cross the boundary as Python objects via the stdlib parser.
py::object to_py(const json& j) {
    return py::module_::import("json").attr("loads")(j.dump(-1, ' ', false, json::error_handler_t::replace));
}

json from_py(const py::handle& obj) {
    return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

std::optional<AcousticFeatures> acoustics_arg(const py::object& obj) {
    if (obj.is_none()) return std::nullopt;
    if (py::isinstance<AcousticFeatures>(obj)) return obj.cast<AcousticFeatures>();
    return acoustics_from_json(from_py(obj));
}

AudioClip make_clip(std::vector<double> samples, int rate) {
    AudioClip c{std::move(samples), rate};
    validate(c);
    return c;
}

SessionConfig make_config(const std::string& task, const std::string& condition, std::uint64_t seed,
                          const py::object& config) {
    SessionConfig cfg;
    if (!config.is_none()) cfg = apply_config_json(cfg, from_py(config));
    cfg.task_id = task;
    cfg.condition = parse_condition(condition);
    cfg.seed = seed;
    validate(cfg);
    return cfg;
}

std::shared_ptr<const TaskPack> pack_for(const std::optional<std::filesystem::path>& dir, const std::string& task) {
    const auto reg = PackRegistry::load_dir(dir ? *dir : default_packs_dir());
    auto pack = reg.find(task);
    if (!pack) throw NotFound("no task pack named '" + task + "'");
    return pack;
}

class PySession {
public:
    PySession(const std::string& task, const std::string& condition, std::uint64_t seed,
              const std::optional<std::filesystem::path>& packs_dir, const py::object& config)
        : session_(make_config(task, condition, seed, config), pack_for(packs_dir, task)) {}

    py::object process_turn(const std::string& text, const py::object& acoustics) {
        return to_py(to_json(session_.process_turn(text, acoustics_arg(acoustics))));
    }
    py::object record() const { return to_py(session_record(session_.state())); }
    int turn_index() const { return session_.state().turn_index; }

private:
    Session session_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Conversational style matching engine";

    // Most recently registered translators are tried first, so the base goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<NotFound>(m, "NotFound", PyExc_FileNotFoundError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<AcousticFeatures>(m, "AcousticFeatures")
        .def(py::init<>())
        .def(py::init([](double f0, double rms, double dur) { return AcousticFeatures{f0, rms, dur}; }),
             py::arg("pitch_hz"), py::arg("rms"), py::arg("voiced_duration_s"))
        .def_readwrite("pitch_hz", &AcousticFeatures::f0_hz)
        .def_readwrite("rms", &AcousticFeatures::rms)
        .def_readwrite("voiced_duration_s", &AcousticFeatures::voiced_duration_s)
        .def("to_dict", [](const AcousticFeatures& a) { return to_py(to_json(a)); })
        .def("__repr__", [](const AcousticFeatures& a) {
            return "AcousticFeatures(pitch_hz=" + std::to_string(a.f0_hz) + ", rms=" + std::to_string(a.rms) +
                   ", voiced_duration_s=" + std::to_string(a.voiced_duration_s) + ")";
        });

    py::class_<Token>(m, "Token")
        .def_readonly("surface", &Token::surface)
        .def_readonly("norm", &Token::norm)
        .def_readonly("is_stopword", &Token::is_stopword)
        .def_readonly("is_pronoun", &Token::is_pronoun)
        .def_readonly("sentence", &Token::sentence)
        .def("__repr__", [](const Token& t) { return "Token('" + t.norm + "')"; });

    m.def("tokenize", [](const std::string& text) { return tokenize(text); }, py::arg("text"));
    m.def(
        "content_features",
        [](const std::string& text, const std::vector<std::string>& history, const std::string& scope,
           const py::object& acoustics) {
            std::vector<TokenList> h;
            for (const auto& s : history) h.push_back(tokenize(s));
            const auto a = acoustics_arg(acoustics).value_or(AcousticFeatures{});
            return to_py(to_json(content_features(text, a, h, parse_repetition_scope(scope))));
        },
        py::arg("text"), py::arg("history") = std::vector<std::string>{}, py::arg("scope") = "window",
        py::arg("acoustics") = py::none());

    m.def("compute_rms", [](const std::vector<double>& s) { return compute_rms(s); }, py::arg("samples"));
    m.def(
        "estimate_f0",
        [](std::vector<double> s, int rate) {
            const auto c = make_clip(std::move(s), rate);
            return estimate_f0(whole_clip(c));
        },
        py::arg("samples"), py::arg("sample_rate_hz"));
    m.def(
        "utterance_acoustics",
        [](std::vector<double> s, int rate) { return utterance_acoustics(make_clip(std::move(s), rate), VadConfig{}); },
        py::arg("samples"), py::arg("sample_rate_hz"));
    m.def(
        "read_wav",
        [](const std::filesystem::path& p) {
            auto c = read_wav(p);
            return py::make_tuple(std::move(c.samples), c.sample_rate_hz);
        },
        py::arg("path"));

    m.def(
        "map_prosody",
        [](std::optional<double> pitch_sigma, std::optional<double> loudness_sigma, std::optional<double> window_wps,
           double reference_wps) {
            std::optional<ProsodyDelta> d;
            if (pitch_sigma || loudness_sigma || window_wps)
                d = ProsodyDelta{pitch_sigma.value_or(0), loudness_sigma.value_or(0), window_wps.value_or(0)};
            return to_py(to_json(map_prosody(d, reference_wps)));
        },
        py::arg("pitch_sigma") = py::none(), py::arg("loudness_sigma") = py::none(),
        py::arg("window_wps") = py::none(), py::arg("reference_wps") = kDefaultReferenceWps);
    m.def(
        "emit_ssml",
        [](const std::string& text, const std::string& pitch, const std::string& volume, double rate) {
            return emit_ssml(text, ProsodyTarget{parse_pitch_level(pitch), parse_loudness_level(volume), rate});
        },
        py::arg("text"), py::arg("pitch") = "medium", py::arg("volume") = "medium", py::arg("rate") = 1.0);

    m.def("lint_pack", [](const std::filesystem::path& p) { return lint_pack_file(p); }, py::arg("path"));
    m.def(
        "task_ids",
        [](const std::optional<std::filesystem::path>& dir) {
            return PackRegistry::load_dir(dir ? *dir : default_packs_dir()).task_ids();
        },
        py::arg("packs_dir") = py::none());
    m.def("default_packs_dir", [] { return default_packs_dir(); });

    py::class_<PySession>(m, "Session")
        .def(py::init<const std::string&, const std::string&, std::uint64_t, const std::optional<std::filesystem::path>&,
                      const py::object&>(),
             py::arg("task"), py::arg("condition") = "matching", py::arg("seed") = 0, py::arg("packs_dir") = py::none(),
             py::arg("config") = py::none())
        .def("process_turn", &PySession::process_turn, py::arg("text"), py::arg("acoustics") = py::none())
        .def("record", &PySession::record)
        .def_property_readonly("turn_index", &PySession::turn_index);

    m.def(
        "replay",
        [](const std::filesystem::path& transcript, const std::string& task, const std::string& condition,
           std::uint64_t seed, const std::optional<std::filesystem::path>& audio_dir,
           const std::optional<std::filesystem::path>& packs_dir, const py::object& config) {
            const auto cfg = make_config(task, condition, seed, config);
            const auto s = replay(read_transcript(transcript), audio_dir, cfg, pack_for(packs_dir, task));
            return to_py(session_record(s.state()));
        },
        py::arg("transcript"), py::arg("task"), py::arg("condition") = "matching", py::arg("seed") = 0,
        py::arg("audio_dir") = py::none(), py::arg("packs_dir") = py::none(), py::arg("config") = py::none());
}
