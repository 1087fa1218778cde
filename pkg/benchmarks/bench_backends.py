"""Compare the gmpy2 and pure-Python rational backends on the projector.

The backend is fixed at import time, so each one runs in its own
interpreter with ``KATZFLAT_RATIONAL`` set.  Results must be identical
across backends; only the wall time should differ.

    python benchmarks/bench_backends.py [--problems 5]
"""

import argparse
import json
import os
import subprocess
import sys
import time

SHAPES = [(1, 2, 6), (2, 2, 5), (3, 3, 4)]


def worker(problems):
    import random

    from katzflat import BACKEND, flat_basis, project
    from katzflat.oracle import generate_problem, random_vector

    rows = []
    for shape in SHAPES:
        corpus = [generate_problem(*shape, seed) for seed in range(problems)]
        vectors = [random_vector(p.connection, random.Random(p.seed)) for p in corpus]
        start = time.perf_counter()
        frames = [flat_basis(p.connection) for p in corpus]
        projected = [project(p.connection, m) for p, m in zip(corpus, vectors)]
        elapsed = time.perf_counter() - start
        digest = [f.matrix().format() for f in frames] + [v.format() for v in projected]
        rows.append({"shape": shape, "seconds": elapsed, "digest": hash(json.dumps(digest))})
    print(json.dumps({"backend": BACKEND, "rows": rows}))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--problems", type=int, default=5)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.worker:
        worker(args.problems)
        return 0

    results = {}
    for backend in ("gmpy2", "fraction"):
        env = dict(os.environ, KATZFLAT_RATIONAL=backend, PYTHONHASHSEED="0")
        proc = subprocess.run(
            [sys.executable, __file__, "--worker", "--problems", str(args.problems)],
            env=env, capture_output=True, text=True,
        )
        if proc.returncode != 0:
            print(f"{backend}: unavailable ({proc.stderr.strip().splitlines()[-1]})")
            continue
        results[backend] = json.loads(proc.stdout)

    print(f"{'shape':>12} " + " ".join(f"{b:>10}" for b in results) + "   speedup  same")
    for k, shape in enumerate(SHAPES):
        times = [results[b]["rows"][k]["seconds"] for b in results]
        digests = {results[b]["rows"][k]["digest"] for b in results}
        speedup = times[-1] / times[0] if len(times) == 2 else float("nan")
        cells = " ".join(f"{t:9.3f}s" for t in times)
        print(f"{str(tuple(shape)):>12} {cells}   {speedup:6.1f}x  {len(digests) == 1}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
