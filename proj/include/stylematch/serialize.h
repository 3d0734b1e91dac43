#pragma once

#include <string>

#include <json.hpp>

#include "stylematch/pipeline.h"

namespace stylematch {

inline constexpr const char* kSessionSchema = "stylematch.session/1";
inline constexpr const char* kConfigSchema = "stylematch.config/1";

nlohmann::json to_json(const StyleVector& v);
nlohmann::json to_json(const AcousticFeatures& a);
nlohmann::json to_json(const ContentFeatures& c);
nlohmann::json to_json(const ProsodyTarget& t);
nlohmann::json to_json(const ProsodyDelta& d);
nlohmann::json to_json(const StyleWeights& w);
nlohmann::json to_json(const VadConfig& v);
nlohmann::json to_json(const SessionConfig& c);
nlohmann::json to_json(const SpeakerState& s);
nlohmann::json to_json(const Turn& t);

// {pitch_hz, rms, voiced_duration_s}; missing fields default to 0.
// Throws InvalidArgument on wrong types or out-of-range values.
AcousticFeatures acoustics_from_json(const nlohmann::json& j);
ProsodyTarget prosody_target_from_json(const nlohmann::json& j);

// Applies the fields present in `j` on top of `base`. Unknown keys are
// rejected so typos in config files surface.
SessionConfig apply_config_json(SessionConfig base, const nlohmann::json& j);

// The versioned session record shared by CLI replay and the gateway.
nlohmann::json session_record(const SessionState& state);

// Summary metrics over a serialized transcript array.
nlohmann::json summarize(const nlohmann::json& transcript);

// Canonical text form: two-space indent, trailing newline.
std::string dump_record(const nlohmann::json& record);

}  // namespace stylematch
