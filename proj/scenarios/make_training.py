# Copyright 2026 The stlcomm Authors
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

"""Writes the demo channel measurements: log-distance path loss plus a
smooth shadowing field and small noise, from a fixed seed."""
import csv
import math
import random

rng = random.Random(7)
L0, N_L = -12.89, 3.0


def shadowing(sx, sy, rx, ry):
    mx, my = (sx + rx) / 2, (sy + ry) / 2
    return 3.0 * math.sin(0.6 * mx) * math.cos(0.5 * my) - 2.0 * math.exp(-((mx - 7) ** 2 + (my - 3) ** 2) / 4)


with open("demo_training.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["sx", "sy", "rx", "ry", "rssi_db"])
    for _ in range(40):
        while True:
            s = (rng.uniform(0, 10), rng.uniform(0, 10))
            r = (rng.uniform(0, 10), rng.uniform(0, 10))
            dist = math.dist(s, r)
            if dist > 0.5:
                break
        rssi = L0 - 10 * N_L * math.log10(dist) + shadowing(*s, *r) + rng.gauss(0, 1.0)
        w.writerow([f"{v:.3f}" for v in (*s, *r)] + [f"{rssi:.3f}"])
