"""Regenerate the bundled sample instance under src/tourcast/data/sample.

Approximate driving miles between fifteen US cities, with a small
direction-dependent perturbation that never crosses a 500-mile bucket (so the
day matrix stays symmetric). Venue statuses are drawn from a seeded RNG; the
cells used by the two reference tours in tests/fixtures are forced open.
Boston and New York carry two venues each.

    python scripts/make_sample.py
"""

import csv
import configparser
import random
from pathlib import Path

CITIES = [
    "Miami", "Tampa", "Atlanta", "New Orleans", "Houston", "Grand Prairie", "Los Angeles",
    "San Francisco", "Seattle", "Chicago", "Detroit", "Washington DC", "Philadelphia",
    "New York", "Boston",
]

# upper triangle, row i lists miles to cities i+1..15
UPPER = [
    [280, 662, 865, 1187, 1300, 2733, 3050, 3300, 1380, 1390, 1055, 1195, 1280, 1505],
    [455, 665, 985, 1100, 2520, 2830, 3100, 1165, 1180, 935, 1075, 1160, 1375],
    [470, 790, 790, 2175, 2475, 2640, 715, 730, 640, 780, 870, 1075],
    [350, 510, 1900, 2270, 2600, 925, 1060, 1090, 1230, 1310, 1530],
    [245, 1550, 1930, 2350, 1085, 1270, 1410, 1550, 1630, 1850],
    [1420, 1720, 2110, 940, 1180, 1340, 1480, 1570, 1780],
    [380, 1135, 2015, 2280, 2660, 2720, 2790, 2990],
    [810, 2130, 2390, 2820, 2900, 2900, 3100],
    [2065, 2310, 2760, 2850, 2860, 3050],
    [282, 700, 760, 790, 985],
    [525, 575, 615, 710],
    [140, 225, 440],
    [95, 310],
    [215],
]

REFERENCE_TOURS = [
    [0, 0, 0, 0, 0, 1, 0, 2, 0, 0, 3, 0, 4, 0, 5, 6, 0, 0, 0, 0, 7, 8, 0, 9, 0, 0, 0, 0, 10, 11, 0, 12, 13,
     14, 15, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 2, 3, 4, 0, 5, 0, 6, 0, 0, 0, 7, 8, 0, 9, 0, 0, 0, 0, 10, 0, 11, 0, 12, 13,
     14, 0, 0, 0, 0, 15, 0, 0],
]

N_DAYS = 42
SEED = 20131014
P_OPEN, P_RELATIVE = 0.62, 0.13
LIMIT = 500


def mile_matrix(rng):
    m = len(CITIES)
    mile = [[0] * m for _ in range(m)]
    for i, row in enumerate(UPPER):
        for off, d in enumerate(row):
            j = i + 1 + off
            bucket = d // LIMIT
            lo, hi = bucket * LIMIT, bucket * LIMIT + LIMIT - 1
            mile[i][j] = min(hi, max(lo, d + rng.randint(-12, 12)))
            mile[j][i] = min(hi, max(lo, d + rng.randint(-12, 12)))
    return mile


def status(rng, code):
    if code == 1:
        return rng.choice(["o", "o", "o", "o/h", "1h", "2h", "3h"])
    if code == 0:
        return rng.choice(["4h", "5h", "6h", "8h"])
    return rng.choice(["c", "c", "", "p"])


def main():
    rng = random.Random(SEED)
    mile = mile_matrix(rng)
    forced = {(d, k - 1) for tour in REFERENCE_TOURS for d, k in enumerate(tour) if k}
    venues = []
    for c in CITIES:
        if c in ("Boston", "New York"):
            venues += [(f"{c} Hall", c), (f"{c} Arena", c)]
        else:
            venues.append((f"{c} Theatre", c))
    rows = []
    for d in range(N_DAYS):
        row = []
        for ci, c in enumerate(CITIES):
            u = rng.random()
            code = 1 if u < P_OPEN else 0 if u < P_OPEN + P_RELATIVE else -1
            if (d, ci) in forced:
                code = 1
            n_venues = sum(1 for _, vc in venues if vc == c)
            if n_venues == 1:
                row.append(status(rng, code))
            else:
                # merged code must come out as `code`
                if code == 1:
                    cells = [status(rng, 1), status(rng, rng.choice([1, 0, -1]))]
                    rng.shuffle(cells)
                elif code == 0:
                    cells = [status(rng, 0), status(rng, rng.choice([0, -1]))]
                    rng.shuffle(cells)
                else:
                    cells = [status(rng, -1), status(rng, -1)]
                row += cells
        rows.append(row)

    out = Path(__file__).resolve().parents[1] / "src" / "tourcast" / "data" / "sample"
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "availability.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([v for v, _ in venues])
        w.writerow([c for _, c in venues])
        w.writerows(rows)
    with open(out / "miles.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([""] + CITIES)
        for c, r in zip(CITIES, mile):
            w.writerow([c] + r)
    cfg = configparser.ConfigParser()
    cfg["calendar"] = {"days": str(N_DAYS), "start_weekday": "mon", "travel_limit": str(LIMIT),
                       "waitlist_cutoff": "3", "start_date": "2013-10-14"}
    with open(out / "instance.ini", "w", encoding="utf-8") as fh:
        cfg.write(fh)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
