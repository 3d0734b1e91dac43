#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "stylematch/style_state.h"

namespace stylematch {

enum class PitchLevel { XLow, Low, Medium, High, XHigh };
enum class LoudnessLevel { XSoft, Soft, Medium, Loud, XLoud };

std::string_view to_string(PitchLevel level);
std::string_view to_string(LoudnessLevel level);
PitchLevel parse_pitch_level(std::string_view s);
LoudnessLevel parse_loudness_level(std::string_view s);

// 0 (lowest) .. 4 (highest); shared by both enums.
int ordinal(PitchLevel level);
int ordinal(LoudnessLevel level);

inline constexpr double kMinRate = 0.5;
inline constexpr double kMaxRate = 2.0;
inline constexpr double kDefaultReferenceWps = 2.5;

struct ProsodyTarget {
    PitchLevel pitch = PitchLevel::Medium;
    LoudnessLevel loudness = LoudnessLevel::Medium;
    double rate = 1.0;

    bool operator==(const ProsodyTarget&) const = default;
};

// Band index for a standardized delta: edges at +-0.5 and +-1.5.
// Level ordinal 0..4 for a standardized delta; NaN maps to medium (2).
int sigma_band(double sigma);

// reference_wps must be positive. An empty delta yields the neutral target.
ProsodyTarget map_prosody(const std::optional<ProsodyDelta>& delta, double reference_wps);

std::string xml_escape(std::string_view text);

// Rate rendered with two decimals. Throws InvalidArgument on empty text.
std::string emit_ssml(std::string_view text, const ProsodyTarget& target);

}  // namespace stylematch
