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
import math
import struct
import wave

import pytest

import tinylift


@pytest.fixture(scope="module")
def fixtures(tmp_path_factory):
    root = tmp_path_factory.mktemp("fixtures")
    tinylift.make_fixtures(str(root))
    return root


@pytest.fixture(scope="module")
def tone_wav(tmp_path_factory):
    path = tmp_path_factory.mktemp("audio") / "tone.wav"
    samples = [round(12000 * math.sin(2 * math.pi * 1000 * n / 16000)) for n in range(16000)]
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(16000)
        w.writeframes(struct.pack("<16000h", *samples))
    return path


def test_features_shape(tone_wav):
    rows = tinylift.features(str(tone_wav))
    assert len(rows) == 49
    assert all(len(r) == 43 for r in rows)
    for r in rows[1:]:
        assert r == pytest.approx(rows[0], abs=1e-9)
    mfcc = tinylift.features(str(tone_wav), mfcc=True)
    assert all(len(r) == 13 for r in mfcc)


def test_silence_hits_energy_floor(fixtures):
    rows = tinylift.features(str(fixtures / "silence_5s.wav"))
    assert all(v == pytest.approx(math.log(1e-6)) for r in rows for v in r)


def test_csv_matches_features(tone_wav):
    wav = str(tone_wav)
    rows = tinylift.features(wav)
    lines = [l for l in tinylift.features_csv(wav).splitlines() if l and not l[0].isalpha()]
    parsed = [[float(x) for x in l.split(",")] for l in lines]
    assert len(parsed) == len(rows)
    for a, b in zip(parsed, rows):
        assert a == pytest.approx(b, abs=1e-4)


def test_impulse_spectrum_is_flat():
    frame = [0.0] * 480
    frame[0] = 1.0
    assert tinylift.fft_magnitude(frame) == pytest.approx([1.0] * 256)


def test_inference_on_fixtures(fixtures):
    assert tinylift.infer_image(str(fixtures / "person.pgm")) == [-127, 127]
    assert tinylift.infer_image(str(fixtures / "empty.pgm"))[1] < 0
    for floor, label in enumerate(tinylift.KEYWORD_LABELS[:4], start=1):
        scores = tinylift.infer_audio(str(fixtures / f"{label}.wav"))
        assert len(scores) == 6
        assert tinylift.decide_keyword(scores) == floor


def test_model_budgets(fixtures):
    for which in ("person", "kws"):
        info = tinylift.reference_model(which)
        assert info["flash_bytes"] <= 256000
        assert info["arena_bytes"] <= tinylift.ARENA_BYTES
    info = tinylift.inspect_model(str(fixtures / "reference_kws.tmlf"))
    assert info["output_shape"] == [1, 6]


def test_threshold():
    assert tinylift.score_to_percent(23) == 59
    assert not tinylift.decide_person(22)
    assert tinylift.decide_person(23)


def test_requantize_and_crc():
    assert tinylift.requantize(0, 1 << 30, 0, -5) == -5
    assert tinylift.requantize(2**31 - 1, 1 << 30, 0, 0) == 127
    mantissa, shift = tinylift.quantize_multiplier(0.25)
    assert mantissa == 1 << 30 and shift == 1
    assert tinylift.crc8(b"123456789") == 0xF4


def test_happy_scenario(fixtures):
    result = tinylift.run_scenario(str(fixtures / "happy_three.scn"))
    assert result["passed"]
    assert [(d["floor"], d["t_ms"]) for d in result["dispatches"]] == [(3, 1770)]
    assert result["transcript"] == tinylift.run_scenario(str(fixtures / "happy_three.scn"))["transcript"]


def test_silence_timeout(fixtures):
    result = tinylift.run_scenario(str(fixtures / "silence_timeout.scn"))
    assert result["passed"]
    unit, start, end, dispatched = result["listens"][0]
    assert end - start == 5000 and not dispatched


def test_golden_round_trip(fixtures):
    ok, text = tinylift.verify_golden(str(fixtures / "golden"))
    assert ok, text
    assert tinylift.parse_scores_csv("a,b\n1,-2\n") == [1, -2]


def test_errors_map_to_python(fixtures, tmp_path):
    bad = tmp_path / "bad.wav"
    bad.write_bytes(b"not a wav file at all, definitely not")
    with pytest.raises(tinylift.WavError):
        tinylift.features(str(bad))
    with pytest.raises(tinylift.ScenarioError):
        tinylift.run_scenario(str(tmp_path / "missing.scn"))
    with pytest.raises(tinylift.GoldenError):
        tinylift.parse_scores_csv("")
