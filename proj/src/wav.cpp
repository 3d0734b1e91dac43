#include "stylematch/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "stylematch/error.h"

namespace stylematch {

namespace {

std::uint32_t read_u32(std::span<const unsigned char> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t read_u16(std::span<const unsigned char> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag_is(std::span<const unsigned char> b, std::size_t at, const char* tag) {
    return b.size() >= at + 4 && std::equal(tag, tag + 4, b.begin() + static_cast<std::ptrdiff_t>(at));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

struct Format {
    std::uint16_t format;
    std::uint16_t channels;
    std::uint32_t rate;
    std::uint16_t bits;
};

}  // namespace

AudioClip decode_wav(std::span<const unsigned char> b) {
    if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) {
        throw ParseError("not a RIFF/WAVE file");
    }

    std::optional<Format> fmt;
    std::span<const unsigned char> data;
    bool have_data = false;
    std::size_t pos = 12;
    while (pos + 8 <= b.size()) {
        const std::uint32_t size = read_u32(b, pos + 4);
        const std::size_t body = pos + 8;
        if (body + size > b.size()) {
            // Truncated trailing chunk; tolerate a short data chunk only.
            if (!tag_is(b, pos, "data")) throw ParseError("truncated WAV chunk");
        }
        const std::size_t avail = std::min<std::size_t>(size, b.size() - body);
        if (tag_is(b, pos, "fmt ")) {
            if (avail < 16) throw ParseError("WAV fmt chunk too short");
            fmt = Format{read_u16(b, body), read_u16(b, body + 2), read_u32(b, body + 4),
                         read_u16(b, body + 14)};
            if (fmt->format == 0xFFFE && avail >= 26) fmt->format = read_u16(b, body + 24);
        } else if (tag_is(b, pos, "data")) {
            data = b.subspan(body, avail);
            have_data = true;
        }
        pos = body + size + (size & 1u);
    }

    if (!fmt) throw ParseError("WAV has no fmt chunk");
    if (!have_data) throw ParseError("WAV has no data chunk");
    if (fmt->format != 1) throw ParseError("WAV is not PCM (format " + std::to_string(fmt->format) + ")");
    if (fmt->channels != 1) {
        throw ParseError("WAV has " + std::to_string(fmt->channels) +
                         " channels; only mono input is supported");
    }
    if (fmt->bits != 16) throw ParseError("WAV is " + std::to_string(fmt->bits) + "-bit; expected 16-bit PCM");

    AudioClip clip;
    clip.sample_rate_hz = static_cast<int>(fmt->rate);
    clip.samples.reserve(data.size() / 2);
    for (std::size_t i = 0; i + 1 < data.size(); i += 2) {
        const auto v = static_cast<std::int16_t>(read_u16(data, i));
        clip.samples.push_back(static_cast<double>(v) / 32768.0);
    }
    if (!is_supported_sample_rate(clip.sample_rate_hz)) {
        throw ParseError("unsupported sample rate " + std::to_string(clip.sample_rate_hz) + " Hz");
    }
    return clip;
}

AudioClip read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("cannot open " + path.string());
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_wav(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<unsigned char> encode_wav(const AudioClip& clip) {
    validate(clip);
    const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
    std::vector<unsigned char> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, 1);
    put_u16(out, 1);
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (double s : clip.samples) {
        const long q = std::clamp(std::lround(s * 32768.0), -32768L, 32767L);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
    return out;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
    const auto bytes = encode_wav(clip);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace stylematch
