"""Compare the compiled and pure-Python kernels on sweeps and single-model queries.

    python benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import statistics
import time

from depthlogic import kernel
from depthlogic.axiom_lab import SCHEMAS, ModelBounds, check_schema_validity
from depthlogic.formula import parse
from depthlogic.muddy import Constant, lower_bound, muddy_model
from depthlogic.semantics import Semantics


def timed(fn, repeat):
    runs = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - t)
    return statistics.median(runs)


def workloads(backend):
    schema = SCHEMAS["negative_introspection"]
    muddy = muddy_model(4, 4, Constant((3, 2, 1, 0))).model
    chain = parse("<~K[3]m3><~K[2]m2><~K[1]m1> K[0]m0")
    return {
        "schema sweep, 3 worlds": lambda: check_schema_validity(schema, ModelBounds(3), Semantics.DPAL,
                                                                backend=backend),
        "schema sweep, 4 worlds": lambda: check_schema_validity(schema, ModelBounds(4, max_depth=2),
                                                                Semantics.DPAL, backend=backend),
        "muddy(4,4) chain, dpal": lambda: kernel.truth_set(muddy, chain, Semantics.DPAL, backend=backend),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"]
    try:
        kernel.backend_module("compiled")
        backends.insert(0, "compiled")
    except ImportError:
        print("compiled kernel not built; timing the python backend only")
    results = {b: {name: timed(fn, args.repeat) for name, fn in workloads(b).items()} for b in backends}
    names = list(results[backends[0]])
    print(f"{'workload':<26}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name in names:
        row = f"{name:<26}" + "".join(f"{results[b][name]:>11.4f}s" for b in backends)
        if len(backends) > 1:
            row += f"{results['python'][name] / results['compiled'][name]:>11.1f}x"
        print(row)
    t = time.perf_counter()
    lower_bound(3, 3)
    print(f"lower bound sweep n=3 k=3 ({kernel.BACKEND}): {time.perf_counter() - t:.2f}s")


if __name__ == "__main__":
    main()
