"""Searches for the committed triangle-classifier fixture.

Finds a 3-2-2 relu network whose first hidden neuron has incoming weights
(1.02, -0.76, -1.04), plus six triangle-edge test points, such that
  * the network misclassifies exactly points 1-4 and classifies 5-6 correctly,
  * the last-layer relu is the bug: swapping it for softmax fixes points 1-4,
  * MUSE and Metallaxis-SBI over the demo mutant profile both rank layer 2 first.
Scoring is re-derived here with numpy, independently of the C++ engine.

Usage: python3 make_triangle_fixture.py OUT_DIR
"""

import json
import sys

import numpy as np

N1_WEIGHTS = [1.02, -0.76, -1.04]


def act(kind, z):
    if kind == "relu":
        return np.maximum(z, 0.0)
    e = np.exp(z - z.max())
    return e / e.sum()


def forward(layers, x):
    for w, b, a in layers:
        x = act(a, x @ w + b)
    return x


def label(y):
    if np.isnan(y).any():
        return -1
    return int(np.argmax(y))


def demo_mutants(layers):
    out = []
    for li, (w, b, a) in enumerate(layers):
        for n in range(w.shape[1]):
            w2 = w.copy(); w2[:, n] /= 2
            out.append((li, [(w2, b, a) if k == li else layers[k] for k in range(len(layers))]))
            b2 = b.copy(); b2[n] /= 2
            out.append((li, [(w, b2, a) if k == li else layers[k] for k in range(len(layers))]))
            swapped = "relu" if a == "softmax" else "softmax"
            out.append((li, [(w, b, swapped) if k == li else layers[k] for k in range(len(layers))]))
    return out


def scores(layers, xs, ys):
    orig = [label(forward(layers, x)) for x in xs]
    passing = [o == y for o, y in zip(orig, ys)]
    tf = passing.count(False)
    tp = passing.count(True)
    rows = []
    for li, m in demo_mutants(layers):
        out = [label(forward(m, x)) for x in xs]
        t1 = [(o == y) != (p) for o, y, p in zip(out, ys, passing)]
        t2 = [o != oo for o, oo in zip(out, orig)]
        rows.append((li, t1, t2))
    f2p = sum(1 for j in range(len(xs)) if not passing[j] and any(r[1][j] for r in rows))
    p2f = sum(1 for j in range(len(xs)) if passing[j] and any(r[1][j] for r in rows))
    alpha = 0.0 if p2f == 0 or tf == 0 else (f2p / tf) * (tp / p2f)
    muse = [0.0, 0.0]
    sbi = [0.0, 0.0]
    counts = [0, 0]
    for li, t1, t2 in rows:
        nf = sum(1 for j in range(len(xs)) if t1[j] and not passing[j])
        np_ = sum(1 for j in range(len(xs)) if t1[j] and passing[j])
        muse[li] += nf / tf - alpha * (np_ / tp)
        counts[li] += 1
        nf2 = sum(1 for j in range(len(xs)) if t2[j] and not passing[j])
        np2 = sum(1 for j in range(len(xs)) if t2[j] and passing[j])
        if nf2 + np2:
            sbi[li] = max(sbi[li], nf2 / (nf2 + np2))
    muse = [s / c for s, c in zip(muse, counts)]
    return passing, muse, sbi


def is_triangle(e):
    a, b, c = e
    return a + b > c and a + c > b and b + c > a


def main(out_dir):
    rng = np.random.default_rng(20230101)
    for attempt in range(200000):
        w1 = np.round(rng.uniform(-1.5, 1.5, size=(3, 2)), 2)
        w1[:, 0] = N1_WEIGHTS
        b1 = np.round(rng.uniform(-1, 1, size=2), 2)
        w2 = np.round(rng.uniform(-1.5, 1.5, size=(2, 2)), 2)
        b2 = np.round(rng.uniform(-1, 1, size=2), 2)
        layers = [(w1, b1, "relu"), (w2, b2, "relu")]
        xs, ys = [], []
        # Points 1-4 must fail, 5-6 must pass.
        for want_pass in [False] * 4 + [True] * 2:
            for _ in range(200):
                e = np.round(rng.uniform(0.5, 3.0, size=3), 2)
                y = 0 if is_triangle(e) else 1
                ok = label(forward(layers, e)) == y
                fixed = label(forward([layers[0], (w2, b2, "softmax")], e)) == y
                if ok == want_pass and (want_pass or fixed):
                    xs.append(e); ys.append(y)
                    break
            else:
                break
        if len(xs) != 6 or len(set(ys)) < 2:
            continue
        passing, muse, sbi = scores(layers, xs, ys)
        if passing != [False] * 4 + [True] * 2:
            continue
        if muse[1] > muse[0] and sbi[1] > sbi[0]:
            write(out_dir, layers, xs, ys)
            print(f"attempt {attempt}: muse={muse} sbi={sbi}")
            return
    raise SystemExit("no fixture found")


def write(out_dir, layers, xs, ys):
    model = {
        "format_version": 1,
        "input_shape": [3],
        "layers": [
            {"kind": "dense", "units": 2, "activation": a, "weights": w.tolist(), "bias": b.tolist()}
            for w, b, a in layers
        ],
    }
    data = {
        "format_version": 1,
        "task": "classification",
        "num_classes": 2,
        "points": [{"input": x.tolist(), "expected": y} for x, y in zip(xs, ys)],
    }
    with open(f"{out_dir}/triangle_model.json", "w") as f:
        json.dump(model, f, indent=2)
        f.write("\n")
    with open(f"{out_dir}/triangle_data.json", "w") as f:
        json.dump(data, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1])
