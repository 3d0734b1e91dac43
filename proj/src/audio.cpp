#include "stylematch/audio.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "stylematch/error.h"

namespace stylematch {

namespace {

constexpr double kPitchFrameMs = 40.0;
constexpr double kPitchHopMs = 10.0;
constexpr double kVoicingThreshold = 0.5;
constexpr double kOctavePeakRatio = 0.9;
constexpr double kMinVoicedFraction = 0.2;

std::size_t ms_to_samples(double ms, int rate) {
    return static_cast<std::size_t>(std::lround(ms * rate / 1000.0));
}

struct FrameGrid {
    std::size_t frame_len;
    std::size_t hop;
    std::size_t count;

    std::size_t begin(std::size_t i) const { return i * hop; }
    std::size_t end(std::size_t i, std::size_t total) const {
        return std::min(i * hop + frame_len, total);
    }
};

// Frames start every hop; the last one is truncated at the clip end so the
// tail is never dropped.
FrameGrid make_grid(std::size_t total, std::size_t frame_len, std::size_t hop) {
    FrameGrid g{std::max<std::size_t>(frame_len, 1), std::max<std::size_t>(hop, 1), 0};
    if (total == 0) return g;
    if (total <= g.frame_len) {
        g.count = 1;
        return g;
    }
    g.count = 1 + (total - g.frame_len + g.hop - 1) / g.hop;
    return g;
}

struct FramePitch {
    bool voiced = false;
    double f0 = 0.0;
};

// Normalized autocorrelation over the overlapping part of the frame. Returns
// r[lag] for lag in [0, max_lag].
std::vector<double> normalized_acf(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];

    std::vector<double> r(max_lag + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag && lag < n; ++lag) {
        double cross = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) cross += x[i] * x[i + lag];
        const double e_head = prefix[n - lag];
        const double e_tail = prefix[n] - prefix[lag];
        const double denom = std::sqrt(e_head * e_tail);
        r[lag] = denom > 0.0 ? cross / denom : 0.0;
    }
    return r;
}

FramePitch frame_pitch(std::span<const double> raw, int rate) {
    std::vector<double> x(raw.begin(), raw.end());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double energy = 0.0;
    for (double& v : x) {
        v -= mean;
        energy += v * v;
    }
    if (energy / static_cast<double>(x.size()) < 1e-12) return {};

    const auto min_lag = static_cast<std::size_t>(std::floor(rate / kMaxF0Hz));
    const auto max_lag = static_cast<std::size_t>(std::ceil(rate / kMinF0Hz));
    if (max_lag + 2 >= x.size() || min_lag < 2) return {};

    const std::vector<double> r = normalized_acf(x, max_lag + 1);

    double best = -1.0;
    std::vector<std::size_t> peaks;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
        if (r[lag] >= r[lag - 1] && r[lag] > r[lag + 1]) {
            peaks.push_back(lag);
            best = std::max(best, r[lag]);
        }
    }
    if (peaks.empty() || best < kVoicingThreshold) return {};

    // Lowest lag close to the global maximum: guards against picking a
    // subharmonic (2T, 3T...) that scores marginally higher.
    std::size_t chosen = peaks.front();
    for (std::size_t lag : peaks) {
        if (r[lag] >= kOctavePeakRatio * best) {
            chosen = lag;
            break;
        }
    }

    const double left = r[chosen - 1];
    const double mid = r[chosen];
    const double right = r[chosen + 1];
    const double curvature = left - 2.0 * mid + right;
    double offset = 0.0;
    if (curvature < 0.0) offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);

    const double f0 = rate / (static_cast<double>(chosen) + offset);
    if (f0 < kMinF0Hz || f0 > kMaxF0Hz) return {};
    return {true, f0};
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

bool is_supported_sample_rate(int hz) {
    switch (hz) {
        case 8000:
        case 16000:
        case 22050:
        case 44100:
        case 48000:
            return true;
        default:
            return false;
    }
}

void validate(const AudioClip& clip) {
    if (!is_supported_sample_rate(clip.sample_rate_hz)) {
        throw InvalidArgument("unsupported sample rate " + std::to_string(clip.sample_rate_hz) +
                              " Hz (expected 8000, 16000, 22050, 44100 or 48000)");
    }
    for (double s : clip.samples) {
        if (!(s >= -1.0 && s <= 1.0)) throw InvalidArgument("sample outside [-1, 1]");
    }
}

VoicedSegment whole_clip(const AudioClip& clip) {
    return VoicedSegment{0.0, clip.duration_s(), std::span<const double>(clip.samples),
                         clip.sample_rate_hz};
}

std::vector<double> frame_energies(const AudioClip& clip, const VadConfig& cfg) {
    validate(clip);
    const auto grid = make_grid(clip.samples.size(), ms_to_samples(cfg.frame_ms, clip.sample_rate_hz),
                                ms_to_samples(cfg.hop_ms, clip.sample_rate_hz));
    std::vector<double> energies(grid.count);
    const std::span<const double> all(clip.samples);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const std::size_t b = grid.begin(i);
        energies[i] = compute_rms(all.subspan(b, grid.end(i, all.size()) - b));
    }
    return energies;
}

std::vector<VoicedSegment> detect_voiced_segments(const AudioClip& clip, const VadConfig& cfg) {
    validate(clip);
    const int rate = clip.sample_rate_hz;
    const std::size_t total = clip.samples.size();
    const auto grid =
        make_grid(total, ms_to_samples(cfg.frame_ms, rate), ms_to_samples(cfg.hop_ms, rate));
    const std::vector<double> energy = frame_energies(clip, cfg);

    // Runs of active frames as [begin_sample, end_sample).
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = 0; i < grid.count;) {
        if (energy[i] <= cfg.threshold) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < grid.count && energy[j + 1] > cfg.threshold) ++j;
        runs.emplace_back(grid.begin(i), grid.end(j, total));
        i = j + 1;
    }

    const auto hangover = static_cast<double>(ms_to_samples(cfg.hangover_ms, rate));
    std::vector<std::pair<std::size_t, std::size_t>> merged;
    for (const auto& run : runs) {
        if (!merged.empty()) {
            auto& last = merged.back();
            const double gap = static_cast<double>(run.first) - static_cast<double>(last.second);
            if (gap < hangover) {
                last.second = std::max(last.second, run.second);
                continue;
            }
        }
        merged.push_back(run);
    }

    const std::size_t min_len = ms_to_samples(cfg.min_segment_ms, rate);
    std::vector<VoicedSegment> segments;
    const std::span<const double> all(clip.samples);
    for (const auto& [b, e] : merged) {
        if (e - b < min_len) continue;
        segments.push_back(VoicedSegment{static_cast<double>(b) / rate, static_cast<double>(e) / rate,
                                         all.subspan(b, e - b), rate});
    }
    return segments;
}

double estimate_f0(const VoicedSegment& segment) {
    const int rate = segment.sample_rate_hz;
    const std::size_t frame_len = ms_to_samples(kPitchFrameMs, rate);
    const std::size_t hop = ms_to_samples(kPitchHopMs, rate);
    if (segment.samples.size() < frame_len) return 0.0;

    const std::size_t count = 1 + (segment.samples.size() - frame_len) / hop;
    std::vector<double> estimates;
    for (std::size_t i = 0; i < count; ++i) {
        const FramePitch p = frame_pitch(segment.samples.subspan(i * hop, frame_len), rate);
        if (p.voiced) estimates.push_back(p.f0);
    }
    if (estimates.empty() ||
        static_cast<double>(estimates.size()) < kMinVoicedFraction * static_cast<double>(count)) {
        return 0.0;
    }
    return median(std::move(estimates));
}

double compute_rms(std::span<const double> samples) {
    if (samples.empty()) return 0.0;
    double sum = 0.0;
    for (double s : samples) sum += s * s;
    return std::sqrt(sum / static_cast<double>(samples.size()));
}

AcousticFeatures utterance_acoustics(const AudioClip& clip, const VadConfig& cfg) {
    const auto segments = detect_voiced_segments(clip, cfg);
    if (segments.empty()) return {};

    AcousticFeatures out;
    double sum_sq = 0.0;
    std::size_t n = 0;
    std::vector<std::pair<double, double>> pitched;  // (f0, duration)
    for (const auto& seg : segments) {
        for (double s : seg.samples) sum_sq += s * s;
        n += seg.samples.size();
        out.voiced_duration_s += seg.duration_s();
        const double f0 = estimate_f0(seg);
        if (f0 > 0.0) pitched.emplace_back(f0, seg.duration_s());
    }
    out.rms = n ? std::min(1.0, std::sqrt(sum_sq / static_cast<double>(n))) : 0.0;

    if (!pitched.empty()) {
        std::sort(pitched.begin(), pitched.end());
        double total = 0.0;
        for (const auto& p : pitched) total += p.second;
        double cumulative = 0.0;
        for (const auto& [f0, dur] : pitched) {
            cumulative += dur;
            if (cumulative >= 0.5 * total) {
                out.f0_hz = f0;
                break;
            }
        }
    }
    return out;
}

}  // namespace stylematch
