#pragma once

#include <span>
#include <vector>

namespace stylematch {

// Mono PCM audio with samples normalized to [-1, 1].
struct AudioClip {
    std::vector<double> samples;
    int sample_rate_hz = 16000;

    double duration_s() const {
        return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
    }
};

bool is_supported_sample_rate(int hz);

// Throws InvalidArgument for an unsupported rate or out-of-range samples.
void validate(const AudioClip& clip);

struct VadConfig {
    double frame_ms = 30.0;
    double hop_ms = 10.0;
    double threshold = 0.02;       // short-time RMS, linear amplitude
    double hangover_ms = 150.0;    // gaps shorter than this are bridged
    double min_segment_ms = 100.0;
};

// A view into a parent clip; the clip must outlive the segment.
struct VoicedSegment {
    double start_s = 0.0;
    double end_s = 0.0;
    std::span<const double> samples;
    int sample_rate_hz = 16000;

    double duration_s() const { return end_s - start_s; }
};

struct AcousticFeatures {
    double f0_hz = 0.0;  // 0 means unvoiced / unknown
    double rms = 0.0;
    double voiced_duration_s = 0.0;

    bool operator==(const AcousticFeatures&) const = default;
};

inline constexpr double kMinF0Hz = 50.0;
inline constexpr double kMaxF0Hz = 500.0;

// Segment spanning the whole clip, for feeding estimators directly.
VoicedSegment whole_clip(const AudioClip& clip);

// Per-frame short-time RMS on the VAD frame grid. Exposed for diagnostics.
std::vector<double> frame_energies(const AudioClip& clip, const VadConfig& cfg);

std::vector<VoicedSegment> detect_voiced_segments(const AudioClip& clip, const VadConfig& cfg);

// Median normalized-autocorrelation pitch over voiced 40 ms frames.
// Returns 0 when fewer than 20% of frames are voiced.
double estimate_f0(const VoicedSegment& segment);

double compute_rms(std::span<const double> samples);
inline double compute_rms(const VoicedSegment& segment) { return compute_rms(segment.samples); }

AcousticFeatures utterance_acoustics(const AudioClip& clip, const VadConfig& cfg);

}  // namespace stylematch
