"""Compare the compiled kernel backend against the pure-NumPy fallback.

Times the three hot kernels on Fashion-MNIST-shaped batches plus one full
training iteration, for both backends, and prints a small table. Run:

    python3 benchmarks/bench_kernels.py [--batch 256] [--repeats 30]
"""

import argparse
import time

import numpy as np

from metapll.data import PartialDataset, ValidationSet, generate_uniform
from metapll.kernels import get_backend
from metapll.model import PROB_FLOOR, init_params
from metapll.mogd import ConfidenceMatrix, TrainConfig, TrainState, init_confidences, mogd_iteration


def _time(fn, repeats):
    fn()  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(backend, m, d, c, repeats):
    rng = np.random.default_rng(0)
    X = rng.random((m, d))
    W = rng.normal(scale=0.01, size=(d, c))
    b = np.zeros(c)
    mask = rng.random((m, c)) < 0.4
    mask[np.arange(m), rng.integers(0, c, m)] = True
    conf = mask / mask.sum(axis=1, keepdims=True)
    P = backend.softmax_forward_linear(X, W, b)
    gW = rng.normal(scale=0.01, size=(d, c))
    gb = rng.normal(scale=0.01, size=c)
    return {
        "softmax_forward": _time(lambda: backend.softmax_forward_linear(X, W, b), repeats),
        "grad_from_probs": _time(
            lambda: backend.grad_from_probs_linear(X, P, conf, PROB_FLOOR), repeats
        ),
        "conf_scores": _time(
            lambda: backend.conf_scores_linear(X, P, gW, gb, PROB_FLOOR), repeats
        ),
    }


def bench_iteration(backend_name, m, d, c, repeats):
    import metapll.kernels as kernels

    prev = kernels.get_backend()
    # route the mogd module through one specific backend for the measurement
    chosen = get_backend(backend_name)
    for name in ("softmax_forward_linear", "grad_from_probs_linear", "conf_scores_linear",
                 "forward_hidden", "grad_from_probs_hidden", "conf_scores_hidden"):
        setattr(kernels, name, getattr(chosen, name))
    try:
        rng = np.random.default_rng(1)
        n = 4 * m
        X = rng.random((n, d))
        y = rng.integers(0, c, n)
        cands = generate_uniform(y, c, 0.3, seed=0)
        ds = PartialDataset(X, cands, c, y)
        model = init_params("linear", d, c)
        state = TrainState(ds, model, init_confidences(cands))
        val = ValidationSet(rng.random((128, d)), rng.integers(0, c, 128))
        cfg = TrainConfig(alpha=0.1, beta=1.0, batch_size=m, val_size=128)
        idx = np.arange(m)

        def step():
            mogd_iteration(state, idx, val, cfg, validate=False)

        return _time(step, repeats)
    finally:
        for name in ("softmax_forward_linear", "grad_from_probs_linear", "conf_scores_linear",
                     "forward_hidden", "grad_from_probs_hidden", "conf_scores_hidden"):
            setattr(kernels, name, getattr(prev, name))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--batch", type=int, default=256)
    ap.add_argument("--dim", type=int, default=784)
    ap.add_argument("--classes", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=30)
    args = ap.parse_args()

    backends = ["numpy"]
    try:
        get_backend("cython")
        backends.append("cython")
    except ImportError:
        print("compiled backend unavailable; timing the numpy fallback only")

    results = {}
    for name in backends:
        rows = bench_kernels(get_backend(name), args.batch, args.dim, args.classes,
                             args.repeats)
        rows["full_iteration"] = bench_iteration(name, args.batch, args.dim,
                                                 args.classes, args.repeats)
        results[name] = rows

    ops = ["softmax_forward", "grad_from_probs", "conf_scores", "full_iteration"]
    width = max(len(op) for op in ops)
    header = f"{'op':<{width}}  " + "  ".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>8}"
    print(f"batch={args.batch} dim={args.dim} classes={args.classes} "
          f"(best of {args.repeats}, milliseconds)")
    print(header)
    for op in ops:
        line = f"{op:<{width}}  " + "  ".join(
            f"{results[b][op] * 1e3:>12.3f}" for b in backends)
        if len(backends) == 2:
            line += f"  {results['numpy'][op] / results['cython'][op]:>7.2f}x"
        print(line)


if __name__ == "__main__":
    main()
