#include "stylematch/style_state.h"

#include <algorithm>
#include <cmath>

#include "stylematch/error.h"

namespace stylematch {

StyleVector make_style_vector(const ContentFeatures& content, const AcousticFeatures& acoustics) {
    StyleVector v;
    v.pronoun_ratio = content.pronoun_ratio;
    v.term_rep_rate = content.term_rep_rate;
    v.rep_sentence_ratio = content.rep_sentence_ratio;
    v.utterance_len_words = content.word_count;
    v.speech_rate_wps = content.speech_rate_wps;
    v.pitch_hz = acoustics.f0_hz;
    v.loudness_rms = acoustics.rms;
    return v;
}

void RunningStats::add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

double RunningStats::stddev() const { return std::sqrt(std::max(0.0, variance())); }

RunningStats RunningStats::from_parts(std::size_t count, double mean, double m2) {
    RunningStats s;
    s.count_ = count;
    s.mean_ = mean;
    s.m2_ = m2;
    return s;
}

void SpeakerState::push(const StyleVector& v) {
    window.push_back(v);
    while (window.size() > kStyleWindowSize) window.pop_front();
    ++utterance_count;
    if (v.pitch_hz > 0.0) baseline_pitch.add(v.pitch_hz);
    baseline_loudness.add(v.loudness_rms);
}

SpeakerState update(SpeakerState state, const ContentFeatures& content, const AcousticFeatures& acoustics) {
    state.push(make_style_vector(content, acoustics));
    return state;
}

StyleVector window_style(const SpeakerState& state) {
    if (state.window.empty()) throw InvalidArgument("window_style on a speaker with no utterances");

    StyleVector mean;
    double pitch_sum = 0.0;
    std::size_t voiced = 0;
    for (const auto& v : state.window) {
        mean.pronoun_ratio += v.pronoun_ratio;
        mean.term_rep_rate += v.term_rep_rate;
        mean.rep_sentence_ratio += v.rep_sentence_ratio;
        mean.utterance_len_words += v.utterance_len_words;
        mean.speech_rate_wps += v.speech_rate_wps;
        mean.loudness_rms += v.loudness_rms;
        if (v.pitch_hz > 0.0) {
            pitch_sum += v.pitch_hz;
            ++voiced;
        }
    }
    const auto n = static_cast<double>(state.window.size());
    mean.pronoun_ratio /= n;
    mean.term_rep_rate /= n;
    mean.rep_sentence_ratio /= n;
    mean.utterance_len_words /= n;
    mean.speech_rate_wps /= n;
    mean.loudness_rms /= n;
    mean.pitch_hz = voiced ? pitch_sum / static_cast<double>(voiced) : 0.0;
    return mean;
}

namespace {

double standardize(double value, const RunningStats& baseline) {
    if (baseline.count() == 0) return 0.0;
    const double scale = std::max(baseline.stddev(), kBaselineStddevFloor * std::abs(baseline.mean()));
    if (!(scale > 0.0)) return 0.0;
    return (value - baseline.mean()) / scale;
}

}  // namespace

std::optional<ProsodyDelta> prosody_delta(const SpeakerState& state) {
    if (state.utterance_count < kStyleWindowSize) return std::nullopt;

    const StyleVector w = window_style(state);
    ProsodyDelta d;
    // No voiced utterance in the window: nothing to compare against.
    d.pitch_sigma = w.pitch_hz > 0.0 ? standardize(w.pitch_hz, state.baseline_pitch) : 0.0;
    d.loudness_sigma = standardize(w.loudness_rms, state.baseline_loudness);
    d.window_wps = w.speech_rate_wps;
    return d;
}

}  // namespace stylematch
