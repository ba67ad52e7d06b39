#!/usr/bin/env python3
"""Regenerates the CSV fixtures under tests/fixtures."""

import datetime as dt
import math
import pathlib

HERE = pathlib.Path(__file__).resolve().parent
LEVELS = ["baseline", "ramp_up", "surge", "surge_plus", "maximum", "crisis"]


def day(start, k):
    return (start + dt.timedelta(days=k)).isoformat()


def write(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as f:
        f.write(header + "\n")
        for r in rows:
            f.write(",".join(str(x) for x in r) + "\n")


def fmt(x):
    return repr(float(x)) if x != int(x) else str(int(x))


TOY3_A = [3, 3, 4, 4, 5, 5, 5, 5, 5, 5, 4, 4, 3, 3]


def toy3():
    out = HERE / "toy3"
    start = dt.date(2021, 12, 15)
    beds = {"A": [6, 8, 12], "B": [10, 14, 20], "C": [8, 10, 14]}
    rate = {"A": 3, "B": 2, "C": 2}
    write(out / "capacity.csv", "hospital_id,level_name,beds",
          [(h, LEVELS[l], b) for h, bl in beds.items() for l, b in enumerate(bl)])
    pmf = [0.0, 0.4, 0.3, 0.2, 0.1]
    write(out / "los.csv", "hospital_id,population,days,probability",
          [(h, "all", d, p) for h in beds for d, p in enumerate(pmf)])
    rows = []
    for h in beds:
        for k in range(-7, 0):
            rows.append((h, day(start, k), "all", "actual", rate[h]))
        for t in range(14):
            v = TOY3_A[t] if h == "A" else rate[h]
            rows.append((h, day(start, t), "all", "moderate", v))
    write(out / "admissions.csv", "hospital_id,date,population,scenario,count", rows)


def regional():
    out = HERE / "regional"
    start = dt.date(2021, 12, 15)
    beds = {"BMC": 420, "HCGH": 225, "JHH": 1091, "SH": 230, "SMH": 245}
    steps = [1.0, 1.05, 1.1, 1.15, 1.2, 1.3]
    write(out / "capacity.csv", "hospital_id,level_name,beds",
          [(h, LEVELS[l], round(b * s)) for h, b in beds.items() for l, s in enumerate(steps)])
    pmf = [0.0] + [0.2 * 0.8 ** (k - 1) for k in range(1, 21)]
    total = sum(pmf)
    pmf = [round(p / total, 6) for p in pmf]
    pmf[1] = round(pmf[1] + 1.0 - sum(pmf), 6)
    write(out / "los.csv", "hospital_id,population,days,probability",
          [(h, "all", d, fmt(p)) for h in beds for d, p in enumerate(pmf) if p > 0])
    mean = sum(k * p for k, p in enumerate(pmf))
    adm, cen = [], []
    wave = {"BMC": 0.25, "HCGH": 0.05, "JHH": 0.05, "SH": 0.05, "SMH": 0.05}
    scale = {"optimistic": 0.9, "moderate": 1.0, "pessimistic": 1.15}
    for h, b in beds.items():
        base = 0.9 * b / mean
        for k in range(-14, 0):
            adm.append((h, day(start, k), "all", "actual", round(base)))
            cen.append((h, day(start, k), "all", round(base * mean)))
        for name, s in scale.items():
            for t in range(60):
                phase = math.sin(math.pi * t / 59) ** 2
                adm.append((h, day(start, t), "all", name, round(base * s * (1 + wave[h] * 4 * phase))))
    write(out / "admissions.csv", "hospital_id,date,population,scenario,count", adm)
    write(out / "census.csv", "hospital_id,date,population,count", cen)


if __name__ == "__main__":
    toy3()
    regional()
