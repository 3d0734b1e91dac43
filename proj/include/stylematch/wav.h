#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stylematch/audio.h"

namespace stylematch {

// RIFF/WAVE, PCM 16-bit signed, mono only. Throws ParseError otherwise.
AudioClip read_wav(const std::filesystem::path& path);
AudioClip decode_wav(std::span<const unsigned char> bytes);

std::vector<unsigned char> encode_wav(const AudioClip& clip);
void write_wav(const std::filesystem::path& path, const AudioClip& clip);

}  // namespace stylematch
