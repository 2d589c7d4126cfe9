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
#ifndef TINYLIFT_DSP_FRONTEND_H_
#define TINYLIFT_DSP_FRONTEND_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tinylift/error.h"

namespace tinylift::dsp {

inline constexpr int kSampleRate = 16000;
inline constexpr std::size_t kWindowLength = 480;  // 30 ms
inline constexpr std::size_t kStride = 320;        // 20 ms
inline constexpr std::size_t kFftSize = 512;
inline constexpr std::size_t kNumBins = 256;
inline constexpr std::size_t kNumMelChannels = 43;
inline constexpr std::size_t kNumSlices = 49;
inline constexpr std::size_t kSamplesPerSecond = 16000;
inline constexpr std::size_t kNumMfcc = 13;
inline constexpr double kMelLowHz = 125.0;
inline constexpr double kMelHighHz = 7500.0;
inline constexpr double kDefaultEnergyFloor = 1e-6;

enum class DspErrc {
  kBufferTooShort,
  kWrongFrameLength,
  kNegativeMagnitude,
  kBadSampleRate,
};
std::string to_string(DspErrc code);
using DspError = Error<DspErrc>;

enum class WindowKind { kRectangular, kHann };

struct AudioBuffer {
  std::vector<int16_t> samples;
  int sample_rate = kSampleRate;
};

using Frame = std::vector<double>;
using FeatureSlice = std::array<double, kNumMelChannels>;

struct QuantizedFeatures {
  std::vector<int8_t> data;  // row-major, rows x cols
  std::size_t rows = 0;
  std::size_t cols = 0;
  double scale = 1.0;
  int zero_point = 0;
};

// Time-major feature matrix: one row per 20 ms slice.
struct Spectrogram {
  std::vector<std::vector<double>> rows;
  std::optional<QuantizedFeatures> quantized;

  std::size_t num_rows() const { return rows.size(); }
  std::size_t num_cols() const { return rows.empty() ? 0 : rows.front().size(); }
};

struct FrontendOptions {
  WindowKind window = WindowKind::kRectangular;
  double energy_floor = kDefaultEnergyFloor;
  // Emit 13 cepstral coefficients per slice instead of 43 log-mel energies.
  bool mfcc = false;
};

std::size_t frame_count(std::size_t num_samples,
                        std::size_t window_len = kWindowLength,
                        std::size_t stride = kStride);

// Slices `samples` into overlapping windows. Throws kBufferTooShort when
// fewer than `window_len` samples are available.
std::vector<Frame> frame_audio(std::span<const int16_t> samples,
                               std::size_t window_len = kWindowLength,
                               std::size_t stride = kStride);

// |X[k]| for k in [0, 256) of the 512-point DFT of the zero-padded frame.
std::vector<double> fft_magnitude(std::span<const double> frame,
                                  WindowKind window = WindowKind::kRectangular);

// Triangular mel filterbank. The table is input-independent and built once.
class MelFilterbank {
 public:
  struct Channel {
    std::size_t first_bin = 0;
    std::vector<double> weights;  // weights[i] applies to bin first_bin + i
  };

  MelFilterbank();

  static const MelFilterbank& instance();

  const std::vector<Channel>& channels() const { return channels_; }
  double weight(std::size_t channel, std::size_t bin) const;

  FeatureSlice apply(std::span<const double> magnitudes) const;

 private:
  std::vector<Channel> channels_;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

FeatureSlice mel_filterbank(std::span<const double> magnitudes);

FeatureSlice log_scale(const FeatureSlice& energies,
                       double energy_floor = kDefaultEnergyFloor);

std::vector<double> dct_mfcc(std::span<const double> slice,
                             std::size_t num_coeffs = kNumMfcc);

// Builds the 49-row spectrogram from the most recent second of audio.
Spectrogram build_spectrogram(const AudioBuffer& buffer,
                              const FrontendOptions& options = {});

QuantizedFeatures quantize_features(const Spectrogram& spectrogram,
                                    double scale, int zero_point);

double dequantize_feature(int8_t q, double scale, int zero_point);

// CSV dump, one row per slice, 9 significant digits.
std::string spectrogram_to_csv(const Spectrogram& spectrogram);

}  // namespace tinylift::dsp

#endif  // TINYLIFT_DSP_FRONTEND_H_
