#!/usr/bin/env python3
# Copyright 2026 The LUSA Authors.
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
"""Regenerates the synthetic 64x64 mini-Regina layers (cellsize 50 m).

Land-use codes: 1 open, 2 treed, 3 developed, 4 water, 5 road.
"""

import pathlib
import sys

N = 64
CELLSIZE = 50
XLL, YLL = 520000, 5590000
OPEN, TREED, DEVELOPED, WATER, ROAD = 1, 2, 3, 4, 5


def landuse():
    grid = [[OPEN] * N for _ in range(N)]
    for r in range(N):
        for c in range(N):
            if 2 <= r <= 22 and 18 <= c <= 36:
                grid[r][c] = TREED
            if 44 <= r <= 59 and 46 <= c <= 61:
                grid[r][c] = DEVELOPED
            if r == 40 or c == 44:
                grid[r][c] = ROAD
            # A river strip drifting east one cell every 16 rows.
            start = 8 + r // 16
            if start <= c <= start + 2:
                grid[r][c] = WATER
    return grid


def landfill():
    return [[1 if 4 <= r <= 6 and 54 <= c <= 56 else 0 for c in range(N)]
            for r in range(N)]


def write(path, grid):
    lines = [f"ncols {N}", f"nrows {N}", f"xllcorner {XLL}",
             f"yllcorner {YLL}", f"cellsize {CELLSIZE}", "NODATA_value -9999"]
    lines += [" ".join(str(v) for v in row) for row in grid]
    path.write_text("\n".join(lines) + "\n")


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/scenarios/layers")
    out.mkdir(parents=True, exist_ok=True)
    lu = landuse()
    write(out / "landuse.asc", lu)
    for name, code in (("water", WATER), ("roads", ROAD), ("developed", DEVELOPED)):
        write(out / f"{name}.asc", [[1 if v == code else 0 for v in row] for row in lu])
    write(out / "landfill.asc", landfill())


if __name__ == "__main__":
    main()
