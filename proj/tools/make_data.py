#!/usr/bin/env python3
"""Regenerates the map and scenario files in data/.

empty-32-32.map is the standard open 32x32 grid. The benchmark's
random-32-32-20.map and official scenarios are not redistributed here, so
seeded stand-ins with the same dimensions and free-cell count are written
instead.
"""
import random
import sys
from collections import deque
from pathlib import Path


def write_map(path, rows):
    with open(path, "w") as f:
        f.write(f"type octile\nheight {len(rows)}\nwidth {len(rows[0])}\nmap\n")
        for r in rows:
            f.write(r + "\n")


def bfs(rows, src):
    h, w = len(rows), len(rows[0])
    dist = {src: 0}
    q = deque([src])
    while q:
        r, c = q.popleft()
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            nr, nc = r + dr, c + dc
            if 0 <= nr < h and 0 <= nc < w and rows[nr][nc] == "." and (nr, nc) not in dist:
                dist[(nr, nc)] = dist[(r, c)] + 1
                q.append((nr, nc))
    return dist


def random_map(width, height, blocked, seed):
    rng = random.Random(seed)
    while True:
        cells = [(r, c) for r in range(height) for c in range(width)]
        walls = set(rng.sample(cells, blocked))
        rows = ["".join("@" if (r, c) in walls else "." for c in range(width)) for r in range(height)]
        free = [p for p in cells if p not in walls]
        if len(bfs(rows, free[0])) == len(free):
            return rows


def write_scen(path, map_name, rows, count, seed):
    rng = random.Random(seed)
    h, w = len(rows), len(rows[0])
    free = [(r, c) for r in range(h) for c in range(w) if rows[r][c] == "."]
    starts = rng.sample(free, count)
    goals = rng.sample(free, count)
    with open(path, "w") as f:
        f.write("version 1\n")
        for i, (s, g) in enumerate(zip(starts, goals)):
            d = bfs(rows, g)[s]
            f.write(f"{i // 10}\t{map_name}\t{w}\t{h}\t{s[1]}\t{s[0]}\t{g[1]}\t{g[0]}\t{d}\n")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data")
    out.mkdir(parents=True, exist_ok=True)
    empty = ["." * 32] * 32
    write_map(out / "empty-32-32.map", empty)
    write_scen(out / "empty-32-32-random-1.scen", "empty-32-32.map", empty, 240, 1)
    rnd = random_map(32, 32, 205, 20)
    write_map(out / "random-32-32-20.map", rnd)
    write_scen(out / "random-32-32-20-random-1.scen", "random-32-32-20.map", rnd, 200, 2)


if __name__ == "__main__":
    main()
