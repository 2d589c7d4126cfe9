/* Copyright 2026 The TinyLift Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "tinylift/sim/wav.h"

#include <cstring>
#include <fstream>
#include <iterator>

namespace tinylift::sim {

std::string to_string(WavErrc code) {
  switch (code) {
    case WavErrc::kNotRiff: return "NotRiff";
    case WavErrc::kUnsupportedEncoding: return "UnsupportedEncoding";
    case WavErrc::kMalformed: return "MalformedWav";
    case WavErrc::kIo: return "IoError";
  }
  return "WavError";
}

namespace {

uint16_t le16(const uint8_t* p) { return static_cast<uint16_t>(p[0] | (p[1] << 8)); }
uint32_t le32(const uint8_t* p) {
  return uint32_t{p[0]} | (uint32_t{p[1]} << 8) | (uint32_t{p[2]} << 16) | (uint32_t{p[3]} << 24);
}

void put16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}
void put32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
void put_tag(std::vector<uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

dsp::AudioBuffer read_wav(std::span<const uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw WavError(WavErrc::kNotRiff);
  }
  bool have_format = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    const uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) throw WavError(WavErrc::kMalformed, "chunk overruns file");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw WavError(WavErrc::kMalformed, "short fmt chunk");
      const uint8_t* fmt = bytes.data() + body;
      const uint16_t format = le16(fmt);
      const uint16_t channels = le16(fmt + 2);
      const uint32_t rate = le32(fmt + 4);
      const uint16_t bits = le16(fmt + 14);
      if (format != 1 || channels != 1 || rate != dsp::kSampleRate || bits != 16) {
        throw WavError(WavErrc::kUnsupportedEncoding,
                       "format " + std::to_string(format) + ", " + std::to_string(channels) +
                           " ch, " + std::to_string(rate) + " Hz, " + std::to_string(bits) + " bit");
      }
      have_format = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_format) throw WavError(WavErrc::kMalformed, "data chunk before fmt chunk");
      if (size % 2 != 0) throw WavError(WavErrc::kMalformed, "odd data length");
      dsp::AudioBuffer audio;
      audio.samples.resize(size / 2);
      for (std::size_t i = 0; i < audio.samples.size(); ++i) {
        audio.samples[i] = static_cast<int16_t>(le16(bytes.data() + body + 2 * i));
      }
      return audio;
    }
    pos = body + size + (size & 1);
  }
  throw WavError(WavErrc::kMalformed, have_format ? "no data chunk" : "no fmt chunk");
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError(WavErrc::kIo, "cannot open " + path);
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WavError(WavErrc::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

dsp::AudioBuffer read_wav_file(const std::string& path) { return read_wav(read_file(path)); }

std::vector<uint8_t> write_wav(const dsp::AudioBuffer& audio) {
  const auto data_bytes = static_cast<uint32_t>(audio.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<uint32_t>(audio.sample_rate));
  put32(out, static_cast<uint32_t>(audio.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (int16_t s : audio.samples) put16(out, static_cast<uint16_t>(s));
  return out;
}

}  // namespace tinylift::sim
