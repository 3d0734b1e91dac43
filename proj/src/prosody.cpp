#include "stylematch/prosody.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "stylematch/error.h"

namespace stylematch {

namespace {

constexpr std::array<std::string_view, 5> kPitchNames{"x-low", "low", "medium", "high", "x-high"};
constexpr std::array<std::string_view, 5> kLoudnessNames{"x-soft", "soft", "medium", "loud", "x-loud"};

template <typename Enum>
Enum parse_level(std::string_view s, const std::array<std::string_view, 5>& names, const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == s) return static_cast<Enum>(i);
    }
    throw InvalidArgument(std::string("unknown ") + what + " level '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(PitchLevel level) { return kPitchNames[static_cast<std::size_t>(level)]; }
std::string_view to_string(LoudnessLevel level) { return kLoudnessNames[static_cast<std::size_t>(level)]; }

PitchLevel parse_pitch_level(std::string_view s) { return parse_level<PitchLevel>(s, kPitchNames, "pitch"); }
LoudnessLevel parse_loudness_level(std::string_view s) {
    return parse_level<LoudnessLevel>(s, kLoudnessNames, "loudness");
}

int ordinal(PitchLevel level) { return static_cast<int>(level); }
int ordinal(LoudnessLevel level) { return static_cast<int>(level); }

int sigma_band(double sigma) {
    if (std::isnan(sigma)) return 2;
    if (sigma < -1.5) return 0;
    if (sigma < -0.5) return 1;
    if (sigma <= 0.5) return 2;
    if (sigma <= 1.5) return 3;
    return 4;
}

ProsodyTarget map_prosody(const std::optional<ProsodyDelta>& delta, double reference_wps) {
    if (!(reference_wps > 0.0)) throw InvalidArgument("reference_wps must be positive");
    ProsodyTarget t;
    if (!delta) return t;
    t.pitch = static_cast<PitchLevel>(sigma_band(delta->pitch_sigma));
    t.loudness = static_cast<LoudnessLevel>(sigma_band(delta->loudness_sigma));
    if (delta->window_wps > 0.0 && std::isfinite(delta->window_wps)) {
        t.rate = std::clamp(delta->window_wps / reference_wps, kMinRate, kMaxRate);
    }
    return t;
}

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string emit_ssml(std::string_view text, const ProsodyTarget& target) {
    if (text.empty()) throw InvalidArgument("cannot emit SSML for empty text");
    const double rate = std::clamp(target.rate, kMinRate, kMaxRate);
    char rate_buf[16];
    std::snprintf(rate_buf, sizeof rate_buf, "%.2f", rate);

    std::string out = "<speak><prosody pitch=\"";
    out += to_string(target.pitch);
    out += "\" volume=\"";
    out += to_string(target.loudness);
    out += "\" rate=\"";
    out += rate_buf;
    out += "\">";
    out += xml_escape(text);
    out += "</prosody></speak>";
    return out;
}

}  // namespace stylematch
