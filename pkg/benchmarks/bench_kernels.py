"""Time the pure-Python and compiled kernels side by side.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from gelspec import data_path, kernels, load_poset
from gelspec.spectrum import kernel_graph


def cases():
    rng = np.random.default_rng(0)
    g = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    h16 = (g + g.conj().T) / 2
    yield "jacobi dim 16", lambda k: k.jacobi_hermitian(h16, 1e-14, 100 * 16 * 16)

    m4 = kernel_graph(load_poset(data_path("m4_chain.json")))
    yield "opens m4_chain (61)", lambda k: k.enumerate_opens(m4.nchars, m4.in_ptr, m4.in_edges, m4.src, m4.pre, 10**6)

    for name in ("mermin_peres", "cabello18", "ten_m4"):
        g = kernel_graph(load_poset(data_path(f"{name}.json")))
        yield f"sections {name}", lambda k, g=g: k.search_sections(g.nchars, g.out_ptr, g.out_edges, g.dst, g.pre, 16, -1)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available()
    header = f"{'case':<26}" + "".join(f"{b.BACKEND:>14}" for b in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for label, fn in cases():
        times = [min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)) for b in backends]
        row = f"{label:<26}" + "".join(f"{t * 1e3:>12.3f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[-1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
