"""Regenerates ttest_oracle.json with 50-digit arithmetic.

Inputs are drawn with a fixed seed and stored as shortest round-trip
decimal strings; mpmath converts each double exactly before computing.
"""
import json
import random

import mpmath as mp

mp.mp.dps = 50


def paired(x, y):
    d = [mp.mpf(a) - mp.mpf(b) for a, b in zip(x, y)]
    n = len(d)
    m = mp.fsum(d) / n
    sd = mp.sqrt(mp.fsum((v - m) ** 2 for v in d) / (n - 1))
    t = m / (sd / mp.sqrt(n))
    df = n - 1
    p = mp.betainc(mp.mpf(df) / 2, mp.mpf(1) / 2, 0, df / (df + t * t), regularized=True)
    return {"t": float(t), "df": df, "p": float(p), "d_z": float(m / sd)}


def case(rng, n, shift, noise):
    x = [round(rng.gauss(5.0, 2.0), 6) for _ in range(n)]
    y = [round(v - shift + rng.gauss(0.0, noise), 6) for v in x]
    return {"x": x, "y": y, **paired(x, y)}


rng = random.Random(20241018)
cases = []
for k in range(20):
    n = [3, 4, 5, 8, 12, 20, 30, 50, 75, 100][k % 10]
    shift = [0.0, 0.05, 0.2, 0.5, 1.0][k % 5]
    cases.append(case(rng, n, shift, 0.4 + 0.1 * (k % 3)))
df107 = case(rng, 108, 0.1, 0.5)
with open("ttest_oracle.json", "w") as f:
    json.dump({"cases": cases, "n108": df107}, f, indent=1)
    f.write("\n")
