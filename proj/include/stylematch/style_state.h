#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include "stylematch/audio.h"
#include "stylematch/text_style.h"

namespace stylematch {

inline constexpr std::size_t kStyleWindowSize = 5;

// The seven style variables for one utterance (or a window average).
struct StyleVector {
    double pronoun_ratio = 0.0;
    double term_rep_rate = 0.0;
    double rep_sentence_ratio = 0.0;
    double utterance_len_words = 0.0;
    double speech_rate_wps = 0.0;
    double pitch_hz = 0.0;
    double loudness_rms = 0.0;

    bool operator==(const StyleVector&) const = default;
};

StyleVector make_style_vector(const ContentFeatures& content, const AcousticFeatures& acoustics);

// Single-pass (Welford) mean and population variance.
class RunningStats {
public:
    void add(double x);

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const { return count_ ? m2_ / static_cast<double>(count_) : 0.0; }
    double stddev() const;

    static RunningStats from_parts(std::size_t count, double mean, double m2);
    double m2() const { return m2_; }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct SpeakerState {
    std::deque<StyleVector> window;  // oldest first, at most kStyleWindowSize
    std::size_t utterance_count = 0;
    RunningStats baseline_pitch;     // utterances with pitch > 0 only
    RunningStats baseline_loudness;

    void push(const StyleVector& v);
};

SpeakerState update(SpeakerState state, const ContentFeatures& content, const AcousticFeatures& acoustics);

// Field-wise mean over the window; pitch averages voiced entries only.
// Throws InvalidArgument on an empty state.
StyleVector window_style(const SpeakerState& state);

struct ProsodyDelta {
    double pitch_sigma = 0.0;
    double loudness_sigma = 0.0;
    double window_wps = 0.0;

    bool operator==(const ProsodyDelta&) const = default;
};

// Relative floor on the baseline deviation used to standardize deltas.
inline constexpr double kBaselineStddevFloor = 0.05;

// Empty until the speaker has produced kStyleWindowSize utterances.
std::optional<ProsodyDelta> prosody_delta(const SpeakerState& state);

}  // namespace stylematch
