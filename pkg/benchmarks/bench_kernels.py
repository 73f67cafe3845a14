"""Compare the compiled kernels with the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times the step kernel and matching on SR(R1) terms directly for both
backends, then an end-to-end reachability search run once per backend in a
subprocess (backend selection happens at import).
"""

import argparse
import os
import subprocess
import sys
import timeit

from ctrslab import _kernels_py, fixtures
from ctrslab.syntax import parse_term
from ctrslab.transforms import guarded_bar, sr_transform

try:
    from ctrslab import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

END_TO_END = """
import time
from ctrslab import fixtures, kernels
from ctrslab.engine import EngineCaps, trs_reachable
from ctrslab.syntax import parse_term
from ctrslab.transforms import guarded_bar, sr_transform
R = fixtures.load("r1")
ctx = sr_transform(R)
t = guarded_bar(parse_term("qsort(cons(s(0), cons(0, nil)))", signature=R), ctx)
start = time.perf_counter()
g = trs_reachable(ctx.target, t, EngineCaps(max_steps=40, max_nodes=20000))
print(kernels.BACKEND, len(g), "%.3f" % (time.perf_counter() - start))
"""


def workload():
    R = fixtures.load("r1")
    ctx = sr_transform(R)
    seed = guarded_bar(parse_term("qsort(cons(s(s(0)), cons(0, cons(s(0), nil))))", signature=R), ctx)
    index = ctx.target.step_index
    lhss = [r.lhs for r in ctx.target.rules]
    return seed, index, lhss


def bench(mod, seed, index, lhss, repeat):
    terms = [seed]
    for _ in range(3):
        terms = [u for t in terms for _, _, u in mod.one_step(t, index)][:200] or terms

    def steps():
        for t in terms:
            mod.one_step(t, index)

    def matching():
        for t in terms:
            for _, s in mod.positions(t):
                for lhs in lhss:
                    mod.match(lhs, s)

    return {
        "one_step": min(timeit.repeat(steps, number=1, repeat=repeat)),
        "match": min(timeit.repeat(matching, number=1, repeat=repeat)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    seed, index, lhss = workload()
    backends = [("python", _kernels_py)]
    if _kernels_c is not None:
        backends.append(("cython", _kernels_c))
    else:
        print("compiled kernels not available; only the fallback is timed")
    results = {name: bench(mod, seed, index, lhss, args.repeat) for name, mod in backends}
    print("%-10s %12s %12s" % ("backend", "one_step s", "match s"))
    for name, r in results.items():
        print("%-10s %12.4f %12.4f" % (name, r["one_step"], r["match"]))
    if "cython" in results:
        for key in ("one_step", "match"):
            print("speedup %-8s %.2fx" % (key, results["python"][key] / results["cython"][key]))
    print("\nend-to-end search (backend, nodes, seconds):")
    for pure in ("1", "0"):
        env = dict(os.environ, CTRSLAB_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True)
        print("  " + (out.stdout.strip() or out.stderr.strip()))


if __name__ == "__main__":
    main()
