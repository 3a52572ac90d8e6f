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

#pragma once

#include <string>

#include "glotkit/signal.hpp"

namespace glotkit {

/// 16-bit PCM mono RIFF/WAVE. Samples are clipped to [-1, 1] and quantized
/// with round-half-away, so equal inputs produce byte-identical files.
void write_wav(const std::string& path, const Waveform& w);

/// Reads a 16-bit PCM mono WAV; anything else is an io_failure.
Waveform read_wav(const std::string& path);

}  // namespace glotkit
