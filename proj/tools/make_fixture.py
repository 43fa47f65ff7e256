"""Regenerate tests/fixtures/random_tuples.json (seeded, deterministic)."""

import argparse
import json
import math

import numpy as np


def make_tuples(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        sp, sm = rng.uniform(0.0, 2.0 * math.pi, size=2)
        a2 = rng.uniform(0.0, 1.0)
        p1, p2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
        a, b = math.sqrt(a2), math.sqrt(1.0 - a2)
        out.append({
            "sigma_plus": float(sp),
            "sigma_minus": float(sm),
            "alpha_re": a * math.cos(p1),
            "alpha_im": a * math.sin(p1),
            "beta_re": b * math.cos(p2),
            "beta_im": b * math.sin(p2),
        })
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20240611)
    ap.add_argument("--out", default="tests/fixtures/random_tuples.json")
    args = ap.parse_args()
    with open(args.out, "w") as f:
        json.dump(make_tuples(args.count, args.seed), f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
