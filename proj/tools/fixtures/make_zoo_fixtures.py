"""Writes small random models covering every supported layer kind, plus a
random classification dataset for each. Deterministic for a fixed seed.

Usage: python3 make_zoo_fixtures.py OUT_DIR
"""

import json
import sys

import numpy as np

rng = np.random.default_rng(7)


def r(*shape, scale=0.5):
    return np.round(rng.uniform(-scale, scale, size=shape), 3).tolist()


def gate(features, units):
    return {"kernel": r(features, units), "recurrent_kernel": r(units, units), "bias": r(units)}


def image_model():
    return {
        "format_version": 1,
        "input_shape": [6, 6, 2],
        "layers": [
            {"kind": "conv2d", "filters": 3, "kernel_size": [3, 3], "strides": [1, 1], "padding": "valid",
             "activation": "relu", "weights": r(3, 3, 2, 3), "bias": r(3)},
            {"kind": "batchnorm", "epsilon": 0.001, "gamma": r(3, scale=1.5), "beta": r(3),
             "moving_mean": r(3), "moving_variance": np.round(rng.uniform(0.5, 2.0, 3), 3).tolist()},
            {"kind": "maxpool2d", "pool_size": [2, 2], "strides": [2, 2]},
            {"kind": "flatten"},
            {"kind": "dropout", "rate": 0.25},
            {"kind": "dense", "units": 3, "activation": "softmax", "weights": r(12, 3), "bias": r(3)},
        ],
    }


def sequence_model():
    return {
        "format_version": 1,
        "input_shape": [8, 2],
        "layers": [
            {"kind": "conv1d", "filters": 3, "kernel_size": [3], "strides": [1], "padding": "same",
             "activation": "tanh", "weights": r(3, 2, 3), "bias": r(3)},
            {"kind": "maxpool1d", "pool_size": [2], "strides": [2]},
            {"kind": "simplernn", "units": 4, "activation": "tanh", "kernel": r(3, 4),
             "recurrent_kernel": r(4, 4), "bias": r(4)},
            {"kind": "dense", "units": 2, "activation": "softmax", "weights": r(4, 2), "bias": r(2)},
        ],
    }


def lstm_model():
    return {
        "format_version": 1,
        "input_shape": [5, 3],
        "layers": [
            {"kind": "lstm", "units": 3, "activation": "tanh", "recurrent_activation": "sigmoid",
             "gates": {g: gate(3, 3) for g in ("input", "forget", "cell", "output")}},
            {"kind": "dense", "units": 2, "activation": "softmax", "weights": r(3, 2), "bias": r(2)},
        ],
    }


def dataset(shape, classes, n):
    return {
        "format_version": 1,
        "task": "classification",
        "num_classes": classes,
        "points": [{"input": np.round(rng.uniform(-1, 1, size=shape), 3).tolist(),
                    "expected": int(rng.integers(0, classes))} for _ in range(n)],
    }


def dump(path, obj):
    with open(path, "w") as f:
        json.dump(obj, f, indent=1)
        f.write("\n")


def main(out):
    dump(f"{out}/image_model.json", image_model())
    dump(f"{out}/image_data.json", dataset((6, 6, 2), 3, 10))
    dump(f"{out}/sequence_model.json", sequence_model())
    dump(f"{out}/sequence_data.json", dataset((8, 2), 2, 10))
    dump(f"{out}/lstm_model.json", lstm_model())
    dump(f"{out}/lstm_data.json", dataset((5, 3), 2, 10))


if __name__ == "__main__":
    main(sys.argv[1])
