"""Compare the numba and numpy ``product_keys`` kernels, then time an
end-to-end C-bracket batch under each backend.

    python3 benchmarks/bench_kernels.py [--repeat N]

The end-to-end timing runs in subprocesses because the backend is fixed at
import time by ``SUPERDOUBLE_NO_NUMBA``.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from superdouble import kernels

E2E = """
import time
from superdouble import dft, kernels, sampling
gen = sampling.rng(0)
pairs = [(sampling.double_section(gen, 3, 2), sampling.double_section(gen, 3, 2)) for _ in range(10)]
dft.c_bracket(*pairs[0])
t0 = time.perf_counter()
for s, t in pairs:
    dft.c_bracket(s, t)
print(kernels.backend(), time.perf_counter() - t0)
"""


def keys(gen, n, n_even, n_odd):
    return (gen.integers(0, 3, size=(n, n_even)).astype(np.int64),
            gen.integers(0, 1 << n_odd, size=n).astype(np.int64))


def kernel_table(repeat):
    gen = np.random.default_rng(0)
    print(f"{'terms':>12} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for na, nb, n_even, n_odd in ((8, 8, 6, 6), (64, 64, 12, 6), (256, 256, 12, 12), (1024, 512, 12, 12)):
        ea, ma = keys(gen, na, n_even, n_odd)
        eb, mb = keys(gen, nb, n_even, n_odd)
        kernels.product_keys_numba(ea, ma, eb, mb, n_odd)  # compile
        t_np = min(timeit.repeat(lambda: kernels.product_keys_numpy(ea, ma, eb, mb, n_odd),
                                 number=5, repeat=repeat)) / 5
        t_nb = min(timeit.repeat(lambda: kernels.product_keys_numba(ea, ma, eb, mb, n_odd),
                                 number=5, repeat=repeat)) / 5
        print(f"{f'{na}x{nb}':>12} {t_np * 1e3:10.3f} {t_nb * 1e3:10.3f} {t_np / t_nb:8.1f}")


def end_to_end():
    for flag in ("0", "1"):
        env = dict(os.environ, SUPERDOUBLE_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True, text=True, check=True)
        name, secs = out.stdout.split()
        print(f"c_bracket x10 (d=3) [{name}]: {float(secs):.3f}s")


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if kernels.numba is None:
        sys.exit("numba is not installed; nothing to compare")
    kernel_table(args.repeat)
    end_to_end()
