// Copyright 2026 The Glotkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "glotkit/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "glotkit/error.hpp"

namespace glotkit {

namespace {

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  b.push_back(v & 0xff);
  b.push_back((v >> 8) & 0xff);
  b.push_back((v >> 16) & 0xff);
  b.push_back((v >> 24) & 0xff);
}

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(v & 0xff);
  b.push_back((v >> 8) & 0xff);
}

void put_tag(std::vector<std::uint8_t>& b, const char* tag) {
  b.insert(b.end(), tag, tag + 4);
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

void write_wav(const std::string& path, const Waveform& w) {
  validate(w);
  const std::uint32_t n = static_cast<std::uint32_t>(w.size());
  const std::uint32_t data_bytes = n * 2;

  std::vector<std::uint8_t> buf;
  buf.reserve(44 + data_bytes);
  put_tag(buf, "RIFF");
  put_u32(buf, 36 + data_bytes);
  put_tag(buf, "WAVE");
  put_tag(buf, "fmt ");
  put_u32(buf, 16);
  put_u16(buf, 1);  // PCM
  put_u16(buf, 1);  // mono
  put_u32(buf, static_cast<std::uint32_t>(w.sample_rate));
  put_u32(buf, static_cast<std::uint32_t>(w.sample_rate) * 2);
  put_u16(buf, 2);
  put_u16(buf, 16);
  put_tag(buf, "data");
  put_u32(buf, data_bytes);
  for (double s : w.samples) {
    const double clipped = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::lround(clipped * 32767.0));
    put_u16(buf, static_cast<std::uint16_t>(q));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::io_failure, "cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) raise(ErrorCode::io_failure, "write failed: " + path);
}

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::io_failure, "cannot open for reading: " + path);
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (buf.size() < 44 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    raise(ErrorCode::io_failure, "not a RIFF/WAVE file: " + path);

  int sample_rate = 0;
  std::uint16_t channels = 0, bits = 0, format = 0;
  const std::uint8_t* data = nullptr;
  std::uint32_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const char* tag = reinterpret_cast<const char*>(buf.data() + pos);
    const std::uint32_t len = get_u32(buf.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + len > buf.size()) break;
    if (std::memcmp(tag, "fmt ", 4) == 0 && len >= 16) {
      format = get_u16(buf.data() + body);
      channels = get_u16(buf.data() + body + 2);
      sample_rate = static_cast<int>(get_u32(buf.data() + body + 4));
      bits = get_u16(buf.data() + body + 14);
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data = buf.data() + body;
      data_len = len;
    }
    pos = body + len + (len & 1);
  }

  if (format != 1 || channels != 1 || bits != 16 || data == nullptr || sample_rate <= 0)
    raise(ErrorCode::io_failure, "expected 16-bit PCM mono WAV: " + path);

  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(data_len / 2);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    const auto v = static_cast<std::int16_t>(get_u16(data + 2 * i));
    w.samples[i] = static_cast<double>(v) / 32767.0;
  }
  return w;
}

}  // namespace glotkit
