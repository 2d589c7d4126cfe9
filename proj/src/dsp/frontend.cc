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
#include "tinylift/dsp/frontend.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

namespace tinylift::dsp {

std::string to_string(DspErrc code) {
  switch (code) {
    case DspErrc::kBufferTooShort: return "BufferTooShort";
    case DspErrc::kWrongFrameLength: return "WrongFrameLength";
    case DspErrc::kNegativeMagnitude: return "NegativeMagnitude";
    case DspErrc::kBadSampleRate: return "BadSampleRate";
  }
  return "DspError";
}

namespace {

using Complex = std::complex<double>;

// In-place iterative radix-2 transform; `data.size()` must be a power of two.
void fft_in_place(std::vector<Complex>& data) {
  const std::size_t n = data.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex twiddle = std::polar(1.0, angle * static_cast<double>(k));
        const Complex even = data[start + k];
        const Complex odd = data[start + k + half] * twiddle;
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }
}

const std::vector<double>& hann_window() {
  static const std::vector<double> window = [] {
    std::vector<double> w(kWindowLength);
    for (std::size_t n = 0; n < kWindowLength; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                  static_cast<double>(kWindowLength));
    }
    return w;
  }();
  return window;
}

}  // namespace

std::size_t frame_count(std::size_t num_samples, std::size_t window_len,
                        std::size_t stride) {
  if (num_samples < window_len) return 0;
  return (num_samples - window_len) / stride + 1;
}

std::vector<Frame> frame_audio(std::span<const int16_t> samples,
                               std::size_t window_len, std::size_t stride) {
  if (samples.size() < window_len) {
    throw DspError(DspErrc::kBufferTooShort,
                   std::to_string(samples.size()) + " samples < window " +
                       std::to_string(window_len));
  }
  const std::size_t count = frame_count(samples.size(), window_len, stride);
  std::vector<Frame> frames;
  frames.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    auto window = samples.subspan(f * stride, window_len);
    frames.emplace_back(window.begin(), window.end());
  }
  return frames;
}

std::vector<double> fft_magnitude(std::span<const double> frame, WindowKind window) {
  if (frame.size() != kWindowLength) {
    throw DspError(DspErrc::kWrongFrameLength,
                   "expected 480 samples, got " + std::to_string(frame.size()));
  }
  std::vector<Complex> buffer(kFftSize, Complex(0.0, 0.0));
  for (std::size_t n = 0; n < kWindowLength; ++n) {
    const double w = window == WindowKind::kHann ? hann_window()[n] : 1.0;
    buffer[n] = Complex(frame[n] * w, 0.0);
  }
  fft_in_place(buffer);
  std::vector<double> magnitudes(kNumBins);
  for (std::size_t k = 0; k < kNumBins; ++k) magnitudes[k] = std::abs(buffer[k]);
  return magnitudes;
}

double hz_to_mel(double hz) { return 1127.0 * std::log1p(hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * std::expm1(mel / 1127.0); }

MelFilterbank::MelFilterbank() {
  const double mel_low = hz_to_mel(kMelLowHz);
  const double mel_high = hz_to_mel(kMelHighHz);
  const double step = (mel_high - mel_low) / static_cast<double>(kNumMelChannels + 1);
  const double bin_hz = static_cast<double>(kSampleRate) / static_cast<double>(kFftSize);

  channels_.resize(kNumMelChannels);
  for (std::size_t c = 0; c < kNumMelChannels; ++c) {
    const double left = mel_low + step * static_cast<double>(c);
    const double center = left + step;
    const double right = center + step;
    Channel& channel = channels_[c];
    bool started = false;
    for (std::size_t k = 0; k < kNumBins; ++k) {
      const double mel = hz_to_mel(bin_hz * static_cast<double>(k));
      double w = 0.0;
      if (mel > left && mel <= center) {
        w = (mel - left) / (center - left);
      } else if (mel > center && mel < right) {
        w = (right - mel) / (right - center);
      }
      if (w > 0.0) {
        if (!started) {
          channel.first_bin = k;
          started = true;
        }
        channel.weights.resize(k - channel.first_bin + 1, 0.0);
        channel.weights.back() = w;
      }
    }
  }
}

const MelFilterbank& MelFilterbank::instance() {
  static const MelFilterbank bank;
  return bank;
}

double MelFilterbank::weight(std::size_t channel, std::size_t bin) const {
  const Channel& c = channels_.at(channel);
  if (bin < c.first_bin || bin >= c.first_bin + c.weights.size()) return 0.0;
  return c.weights[bin - c.first_bin];
}

FeatureSlice MelFilterbank::apply(std::span<const double> magnitudes) const {
  if (magnitudes.size() != kNumBins) {
    throw DspError(DspErrc::kWrongFrameLength,
                   "expected 256 magnitudes, got " + std::to_string(magnitudes.size()));
  }
  for (double m : magnitudes) {
    if (!(m >= 0.0)) throw DspError(DspErrc::kNegativeMagnitude);
  }
  FeatureSlice energies{};
  for (std::size_t c = 0; c < kNumMelChannels; ++c) {
    const Channel& channel = channels_[c];
    double sum = 0.0;
    for (std::size_t i = 0; i < channel.weights.size(); ++i) {
      sum += channel.weights[i] * magnitudes[channel.first_bin + i];
    }
    energies[c] = sum;
  }
  return energies;
}

FeatureSlice mel_filterbank(std::span<const double> magnitudes) {
  return MelFilterbank::instance().apply(magnitudes);
}

FeatureSlice log_scale(const FeatureSlice& energies, double energy_floor) {
  FeatureSlice out{};
  for (std::size_t i = 0; i < energies.size(); ++i) {
    out[i] = std::log(std::max(energies[i], energy_floor));
  }
  return out;
}

std::vector<double> dct_mfcc(std::span<const double> slice, std::size_t num_coeffs) {
  const std::size_t n = slice.size();
  const double norm0 = std::sqrt(1.0 / static_cast<double>(n));
  const double norm = std::sqrt(2.0 / static_cast<double>(n));
  std::vector<double> coeffs(num_coeffs, 0.0);
  for (std::size_t k = 0; k < num_coeffs; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += slice[i] * std::cos(std::numbers::pi / static_cast<double>(n) *
                                 (static_cast<double>(i) + 0.5) * static_cast<double>(k));
    }
    coeffs[k] = sum * (k == 0 ? norm0 : norm);
  }
  return coeffs;
}

Spectrogram build_spectrogram(const AudioBuffer& buffer, const FrontendOptions& options) {
  if (buffer.sample_rate != kSampleRate) {
    throw DspError(DspErrc::kBadSampleRate, std::to_string(buffer.sample_rate) + " Hz");
  }
  if (buffer.samples.size() < kSamplesPerSecond) {
    throw DspError(DspErrc::kBufferTooShort, "need one second (16000 samples), got " +
                                                 std::to_string(buffer.samples.size()));
  }
  std::span<const int16_t> latest(buffer.samples);
  latest = latest.last(kSamplesPerSecond);

  Spectrogram spectrogram;
  spectrogram.rows.reserve(kNumSlices);
  for (const Frame& frame : frame_audio(latest)) {
    const FeatureSlice slice =
        log_scale(mel_filterbank(fft_magnitude(frame, options.window)), options.energy_floor);
    if (options.mfcc) {
      spectrogram.rows.push_back(dct_mfcc(slice, kNumMfcc));
    } else {
      spectrogram.rows.emplace_back(slice.begin(), slice.end());
    }
  }
  return spectrogram;
}

QuantizedFeatures quantize_features(const Spectrogram& spectrogram, double scale,
                                    int zero_point) {
  QuantizedFeatures q;
  q.rows = spectrogram.num_rows();
  q.cols = spectrogram.num_cols();
  q.scale = scale;
  q.zero_point = zero_point;
  q.data.reserve(q.rows * q.cols);
  for (const auto& row : spectrogram.rows) {
    for (double x : row) {
      const double v = std::round(x / scale) + zero_point;
      q.data.push_back(static_cast<int8_t>(std::clamp(v, -128.0, 127.0)));
    }
  }
  return q;
}

double dequantize_feature(int8_t q, double scale, int zero_point) {
  return (static_cast<int>(q) - zero_point) * scale;
}

std::string spectrogram_to_csv(const Spectrogram& spectrogram) {
  std::string out;
  char cell[32];
  for (const auto& row : spectrogram.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(cell, sizeof(cell), "%.9g", row[i]);
      if (i > 0) out += ',';
      out += cell;
    }
    out += '\n';
  }
  return out;
}

}  // namespace tinylift::dsp
