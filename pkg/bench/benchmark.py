"""Compare the compiled and pure-Python kernel backends.

Kernel timings call both implementations directly on the same inputs. The
end-to-end timing runs one sweep cell in a subprocess per backend, using
FEMTOREUSE_PURE_PYTHON=1 to force the fallback.

    python bench/benchmark.py [--fap-count 2000] [--repeat 5] [--trials 300]
"""

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from femtoreuse import _pykernels

try:
    from femtoreuse import _ckernels
except ImportError:
    _ckernels = None


def csr_neighbors(xy, threshold):
    ii, jj = _pykernels.pairs_within(xy[:, 0], xy[:, 1], threshold)
    n = len(xy)
    nbrs = [[] for _ in range(n)]
    for i, j in zip(ii.tolist(), jj.tolist()):
        d = float(np.hypot(*(xy[i] - xy[j])))
        nbrs[i].append((j, d))
        nbrs[j].append((i, d))
    ptr = np.zeros(n + 1, dtype=np.int64)
    nbr, dist = [], []
    for i, lst in enumerate(nbrs):
        lst.sort()
        ptr[i + 1] = ptr[i] + len(lst)
        nbr += [j for j, _ in lst]
        dist += [d for _, d in lst]
    return ptr, np.asarray(nbr, dtype=np.int64), np.asarray(dist)


def time_kernels(impl, xy, csr, repeat):
    ptr, nbr, dist = csr
    n = len(xy)
    foes = [[int(v) for v in np.random.default_rng(k).integers(0, 6, k % 4)] for k in range(2000)]
    timings = {
        "pairs_within": lambda: impl.pairs_within(xy[:, 0], xy[:, 1], 60.0),
        "choose_edge x2000": lambda: [impl.choose_edge(f) for f in foes],
        "run_dynamic": lambda: impl.run_dynamic(ptr, nbr, dist, np.full(n, 10.0), 60.0, 10.0,
                                                0.8, 4.0, 4),
    }
    return {name: min(timeit.repeat(fn, number=1, repeat=repeat)) for name, fn in timings.items()}


def time_sweep_cell(pure, trials):
    env = dict(os.environ)
    if pure:
        env["FEMTOREUSE_PURE_PYTHON"] = "1"
    else:
        env.pop("FEMTOREUSE_PURE_PYTHON", None)
    code = (
        "import time; from femtoreuse import kernels; from femtoreuse.config import ScenarioConfig;"
        "from femtoreuse.sweep import run_cell;"
        f"cfg = ScenarioConfig(trials={trials});"
        "t = time.perf_counter(); run_cell(cfg, 2000); "
        "print(kernels.BACKEND, time.perf_counter() - t)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    return out[0], float(out[1])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--fap-count", type=int, default=2000)
    p.add_argument("--side", type=float, default=1000.0, help="square side in metres")
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--trials", type=int, default=300, help="trials for the end-to-end cell")
    args = p.parse_args(argv)

    rng = np.random.default_rng(0)
    xy = rng.uniform(0, args.side, size=(args.fap_count, 2))
    csr = csr_neighbors(xy, 60.0)

    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled extension not built; timing the Python backend only")

    results = {name: time_kernels(impl, xy, csr, args.repeat) for name, impl in backends}
    print(f"kernels, {args.fap_count} FAPs on a {args.side:g} m square (best of {args.repeat})")
    print(f"{'kernel':<20}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    for kernel in results["python"]:
        row = [results[name][kernel] for name, _ in backends]
        speed = f"{row[0] / row[1]:>9.1f}x" if len(row) > 1 else ""
        print(f"{kernel:<20}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row) + speed)

    print(f"\nend-to-end sweep cell (count 2000, {args.trials} trials, all schemes)")
    cells = [time_sweep_cell(True, args.trials)]
    if _ckernels is not None:
        cells.append(time_sweep_cell(False, args.trials))
    for backend, secs in cells:
        print(f"  {backend:<8} {secs:8.2f} s")
    if len(cells) == 2:
        print(f"  speedup  {cells[0][1] / cells[1][1]:8.1f}x")


if __name__ == "__main__":
    t0 = time.perf_counter()
    main()
    print(f"\ntotal {time.perf_counter() - t0:.1f} s")
