#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stylematch/audio.h"

#ifndef STYLEMATCH_SOURCE_DIR
#error "tests need STYLEMATCH_SOURCE_DIR"
#endif

namespace stylematch::testing {

inline std::filesystem::path source_dir() { return STYLEMATCH_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return source_dir() / "tests" / "fixtures" / name; }
inline std::filesystem::path golden(const std::string& name) { return source_dir() / "tests" / "golden" / name; }
inline std::filesystem::path packs_dir() { return source_dir() / "data" / "packs"; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline constexpr double kPi = 3.14159265358979323846;

inline std::vector<double> sine(double freq, double seconds, double amp, int rate = 16000) {
    const auto n = static_cast<std::size_t>(std::lround(seconds * rate));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = amp * std::sin(2.0 * kPi * freq * static_cast<double>(i) / rate);
    return out;
}

// Naive (aliased) sawtooth in [-amp, amp].
inline std::vector<double> sawtooth(double freq, double seconds, double amp, int rate = 16000) {
    const auto n = static_cast<std::size_t>(std::lround(seconds * rate));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phase = std::fmod(freq * static_cast<double>(i) / rate, 1.0);
        out[i] = amp * (2.0 * phase - 1.0);
    }
    return out;
}

inline std::vector<double> square(double freq, double seconds, double amp, int rate = 16000) {
    auto s = sine(freq, seconds, 1.0, rate);
    for (double& v : s) v = v >= 0.0 ? amp : -amp;
    return s;
}

inline std::vector<double> noise(double seconds, double amp, unsigned seed, int rate = 16000) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-amp, amp);
    std::vector<double> out(static_cast<std::size_t>(std::lround(seconds * rate)));
    for (double& v : out) v = dist(rng);
    return out;
}

inline std::vector<double> silence(double seconds, int rate = 16000) {
    return std::vector<double>(static_cast<std::size_t>(std::lround(seconds * rate)), 0.0);
}

inline std::vector<double> concat(std::initializer_list<std::vector<double>> parts) {
    std::vector<double> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

inline AudioClip clip(std::vector<double> samples, int rate = 16000) { return AudioClip{std::move(samples), rate}; }

}  // namespace stylematch::testing

#include "stylematch/dialogue.h"

namespace stylematch::testing {

// Minimal valid pack: `n` single-keyword intents plus a 10-entry corpus.
inline TaskPack make_pack(std::size_t n = 10, std::string task_id = "unit") {
    TaskPack p;
    p.task_id = std::move(task_id);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string key = "kw" + std::to_string(i);
        p.intents.push_back(Intent{"intent_" + std::to_string(i), {{key}}, {"Scripted " + key + "."}, 1.0});
    }
    for (int i = 0; i < 10; ++i) p.response_corpus.push_back("Generic reply number " + std::to_string(i) + ".");
    return p;
}

}  // namespace stylematch::testing
