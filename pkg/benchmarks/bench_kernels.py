"""Benchmark the compiled kernel lane against the numpy fallback.

Times each hot kernel on representative inputs plus one end-to-end solve,
printing per-backend timings and the speedup. Usage:

    python benchmarks/bench_kernels.py [--size 256] [--repeats 5]
"""

import argparse
import time

import numpy as np

from depthtv import kernels
from depthtv.prior import CannyParams, build_prior
from depthtv.simulate import AcquisitionSpec, generate_scene, random_scene_spec, sample_lidar
from depthtv.solver import SolverConfig, solve
from depthtv.weights import build_weights


def _time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases(size):
    rng = np.random.default_rng(0)
    x = np.ascontiguousarray(rng.standard_normal((size, size)))
    yr = np.ascontiguousarray(rng.standard_normal((size, size)))
    yc = np.ascontiguousarray(rng.standard_normal((size, size)))
    v = rng.standard_normal(2 * size * size)

    mask = rng.random((size, size)) < 0.0625
    mask[0, 0] = True
    cols_idx, rows_idx = np.nonzero(mask.T)
    sample_v = rng.uniform(1.0, 20.0, rows_idx.size)

    mag = np.abs(rng.standard_normal((size, size)))
    dbin = rng.integers(0, 4, (size, size)).astype(np.uint8)
    weak = (mag > 0.8).astype(np.uint8)
    strong = (mag > 2.0).astype(np.uint8)

    coarse = rng.uniform(1.0, 20.0, (size, size))
    edge = (rng.random((size, size)) < 0.05).astype(np.uint8)

    return {
        "first_diff": lambda impl: impl.first_diff(x),
        "first_diff_adjoint": lambda impl: impl.first_diff_adjoint(yr, yc),
        "second_diff": lambda impl: impl.second_diff(x),
        "second_diff_adjoint": lambda impl: impl.second_diff_adjoint(yr, yc),
        "soft_threshold": lambda impl: impl.soft_threshold(v, 0.3),
        "nearest_fill": lambda impl: impl.nearest_fill(
            size, size, rows_idx.astype(np.int64), cols_idx.astype(np.int64), sample_v
        ),
        "canny_nms": lambda impl: impl.canny_nms(mag, dbin),
        "hysteresis": lambda impl: impl.hysteresis(strong, weak),
        "median_jumps": lambda impl: impl.median_jumps(edge, coarse, 5, 0.05),
    }


def bench_kernels(size, repeats):
    cases = kernel_cases(size)
    names = kernels.available_backends()
    print(f"\nkernels on {size}x{size} grids (best of {repeats}):")
    print(f"{'kernel':<22}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for case, runner in cases.items():
        times = {}
        for name in names:
            impl = kernels.get_backend(name)
            runner(impl)  # warm up
            times[name] = _time(lambda: runner(impl), repeats)
        row = f"{case:<22}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in names)
        if "native" in times and "numpy" in times:
            row += f"{times['numpy'] / times['native']:>9.1f}x"
        print(row)


def bench_solve(size, repeats, iters=200):
    spec = random_scene_spec(size, size, seed=1)
    truth, intensity = generate_scene(spec)
    samples = sample_lidar(truth, AcquisitionSpec(sampling_rate=0.0625, seed=1))
    prior = build_prior(samples, intensity, CannyParams(), 5)
    w = build_weights(prior)
    cfg = SolverConfig(max_iters=iters, tol_primal=1e-300, tol_dual=1e-300)

    print(f"\nend-to-end solve, {size}x{size}, {iters} iterations (best of {repeats}):")
    times = {}
    for name in kernels.available_backends():
        kernels.set_backend(name)
        try:
            times[name] = _time(lambda: solve(samples, prior, w, cfg), repeats)
        finally:
            kernels.set_backend(name)
        print(f"  {name:<8} {times[name]:.3f}s  ({times[name] / iters * 1e3:.2f} ms/iter)")
    if "native" in times and "numpy" in times:
        print(f"  speedup  {times['numpy'] / times['native']:.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--solve-size", type=int, default=128)
    args = parser.parse_args()
    print(f"available backends: {kernels.available_backends()}")
    if "native" not in kernels.available_backends():
        print("note: compiled backend not built; timing the numpy lane only")
    bench_kernels(args.size, args.repeats)
    default = kernels.backend_name()
    try:
        bench_solve(args.solve_size, max(2, args.repeats // 2))
    finally:
        kernels.set_backend(default)


if __name__ == "__main__":
    main()
