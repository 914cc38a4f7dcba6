#!/usr/bin/env python3
# Copyright 2026 The TIAM Toolkit Authors
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
"""Regenerates berlin_kay_palette.json from Munsell focal chips.

Procedure: Munsell notation -> xyY (Munsell renotation, illuminant C) -> XYZ
-> Bradford adaptation to the D65 white implied by the sRGB matrix used by the
core (0.9505, 1.0, 1.0890) -> CIELAB. When a color has several focal chips
they are averaged in Lab.

Requires colour-science (tested with 0.4.6). Brown and orange are deliberately
absent: their focal chips sit too close to red and black in Lab.
"""

import json
import sys
import warnings

import colour
import numpy as np

# Focal chips of the American English basic color terms, transcribed from the
# Berlin & Kay stimulus array (grid cell in parentheses).
FOCAL_CHIPS = {
    "white": ["N9.5"],                   # A0
    "black": ["N2"],                     # J0
    "red": ["5R 4/14"],                  # G2
    "green": ["2.5G 5/10"],              # F17
    "blue": ["10B 5/10", "2.5PB 5/10"],  # F28, F29
    "purple": ["5P 4/12"],               # G34
    "pink": ["5RP 7/8"],                 # D38
    "yellow": ["2.5Y 8/16"],             # C9
}
ATTRIBUTES = ["red", "green", "blue", "purple", "pink", "yellow"]

SRGB_TO_XYZ = np.array([[0.4124, 0.3576, 0.1805],
                        [0.2126, 0.7152, 0.0722],
                        [0.0193, 0.1192, 0.9505]])


def chip_to_lab(chip, white_xyz):
    xyy = colour.munsell_colour_to_xyY(chip)
    xyz = colour.xyY_to_XYZ(xyy)
    illuminant_c = colour.CCS_ILLUMINANTS["CIE 1931 2 Degree Standard Observer"]["C"]
    adapted = colour.adaptation.chromatic_adaptation_VonKries(
        xyz, colour.xy_to_XYZ(illuminant_c), white_xyz, transform="Bradford")
    return colour.XYZ_to_Lab(adapted, colour.XYZ_to_xy(white_xyz))


def main():
    warnings.filterwarnings("ignore")
    white = SRGB_TO_XYZ.sum(axis=1)
    entries = []
    for name, chips in FOCAL_CHIPS.items():
        lab = np.mean([chip_to_lab(c, white) for c in chips], axis=0)
        entries.append({
            "name": name,
            "L": round(float(lab[0]), 4),
            "a": round(float(lab[1]), 4),
            "b": round(float(lab[2]), 4),
            "munsell": chips,
            "provenance": "Berlin-Kay English focal chip(s) " + ", ".join(chips)
                          + "; Munsell renotation (illuminant C) -> Bradford -> D65 Lab"
                          + ("; averaged in Lab" if len(chips) > 1 else ""),
        })
    doc = {
        "schema_id": "tiam.palette/1",
        "illuminant": "D65",
        "observer": "2",
        "white_xyz": [float(v) for v in white],
        "generator": "data/palette/derive_palette.py (colour-science "
                     + colour.__version__ + ")",
        "attribute_names": ATTRIBUTES,
        "entries": entries,
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
