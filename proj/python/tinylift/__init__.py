# Copyright 2026 The TinyLift Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python access to the TinyLift floor-unit stack."""

from ._core import (
    ARENA_BYTES,
    FLASH_BUDGET_BYTES,
    ConfigError,
    ControllerError,
    DspError,
    GoldenError,
    NnError,
    ScenarioError,
    VisionError,
    WavError,
    crc8,
    decide_keyword,
    decide_person,
    features,
    features_csv,
    fft_magnitude,
    infer_audio,
    infer_image,
    inspect_model,
    make_fixtures,
    mel_filterbank,
    parse_scores_csv,
    quantize_multiplier,
    reference_model,
    requantize,
    run_scenario,
    score_to_percent,
    verify_golden,
)

KEYWORD_LABELS = ("one", "two", "three", "four", "unknown", "silence")

__version__ = "0.1.0"
