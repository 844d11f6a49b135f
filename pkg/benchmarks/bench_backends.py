"""Compare the compiled and pure-Python kernels on generation and triangle counting.

    python benchmarks/bench_backends.py [--sizes 1e4,1e5] [--repeat 3]

Both backends consume identical random draws, so each size also checks that
the two produce the same graph.
"""
import argparse
import time

import numpy as np

from pagen import _backend
from pagen.analytics import count_triangles
from pagen.generator import GenerationConfig, generate
from pagen.model import ThreeParamSpec, three_param_to_table

CONFIGS = {
    "alpha=0.2": ThreeParamSpec(2, 0.2, 0.0),
    "beta=0.4": ThreeParamSpec(2, 0.0, 0.4),
}


def best_of(repeat, fn):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1e4,1e5")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    sizes = [int(float(s)) for s in args.sizes.split(",")]

    backends = _backend.available()
    if "cython" not in backends:
        print("compiled kernels not built; only the python backend is timed")

    print(f"{'config':<10} {'n':>9} {'task':<10} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for label, spec in CONFIGS.items():
        table = three_param_to_table(spec)
        for n in sizes:
            cfg = GenerationConfig(n, table, master_seed=1)
            gen, tri, graphs = {}, {}, {}
            for name, k in backends.items():
                gen[name], (graphs[name], _) = best_of(args.repeat, lambda: generate(cfg, kernels=k))
                tri[name], _ = best_of(args.repeat, lambda: count_triangles(graphs[name], kernels=k))
            if len(graphs) == 2:
                a, b = graphs.values()
                assert np.array_equal(a.heads, b.heads), "backends diverged"
            for task, times in (("generate", gen), ("triangles", tri)):
                cells = " ".join(f"{times[b] * 1e3:>8.1f}ms" for b in backends)
                speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else ""
                print(f"{label:<10} {n:>9} {task:<10} {cells} {speed}")


if __name__ == "__main__":
    main()
