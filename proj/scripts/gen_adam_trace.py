#!/usr/bin/env python3
"""Generate the scalar Adam reference trace (tests/data/adam_trace.csv).

Minimizes f(x) = 0.5 * (x - 3)^2 from x0 = 0 with Adam (bias-corrected,
no weight decay) at 50-digit precision, so the frozen values are exact to
far beyond the 1e-10 comparison tolerance.
"""

from pathlib import Path

import mpmath as mp

mp.mp.dps = 50

LR = mp.mpf("0.001")
BETA1 = mp.mpf("0.9")
BETA2 = mp.mpf("0.98")
EPS = mp.mpf("1e-7")
TARGET = mp.mpf(3)
STEPS = 100

OUT = Path(__file__).resolve().parents[1] / "tests/data/adam_trace.csv"


def main():
    x = mp.mpf(0)
    m = mp.mpf(0)
    v = mp.mpf(0)
    rows = ["step,x"]
    for t in range(1, STEPS + 1):
        g = x - TARGET                       # d/dx 0.5*(x-target)^2
        m = BETA1 * m + (1 - BETA1) * g
        v = BETA2 * v + (1 - BETA2) * g * g
        mhat = m / (1 - BETA1 ** t)
        vhat = v / (1 - BETA2 ** t)
        x = x - LR * mhat / (mp.sqrt(vhat) + EPS)
        rows.append(f"{t},{mp.nstr(x, 20)}")
    OUT.write_text("\n".join(rows) + "\n")
    print(f"wrote {STEPS} steps, final x = {mp.nstr(x, 20)}")


if __name__ == "__main__":
    main()
