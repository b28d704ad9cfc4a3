"""Recompute the frozen oracle optima used by the acceptance gate.

Runs the dense-matrix Huber-smoothed accelerated-gradient oracle on every
seeded instance and prints the dict to paste into test_acceptance.py.

    python tests/regen_oracle_values.py
"""

import time

from oracles import (
    acceptance_instances,
    dense_first_diff,
    dense_objective,
    dense_second_diff,
    random_instance,
    smoothed_fista,
)


def main():
    print("ORACLE_OBJECTIVES = {")
    total = 0.0
    for name, seed, rows, cols, beta, gamma in acceptance_instances():
        mask, values, uhat, w1, w2, beta, gamma = random_instance(seed, rows, cols, beta, gamma)
        mask_vec = mask.flatten(order="F").astype(float)
        b_vec = (values * mask).flatten(order="F")
        hmat = dense_second_diff(rows, cols)
        dmat = dense_first_diff(rows, cols)
        t0 = time.perf_counter()
        x_star = smoothed_fista(b_vec, mask_vec, b_vec, hmat, dmat, uhat, w1, w2, beta, gamma)
        dt = time.perf_counter() - t0
        total += dt
        f_star = dense_objective(x_star, mask_vec, b_vec, hmat, dmat, uhat, w1, w2, beta, gamma)
        print(f'    "{name}": {f_star!r},  # {rows}x{cols} beta={beta} gamma={gamma} ({dt:.1f}s)')
    print("}")
    print(f"# total oracle time: {total:.1f}s")


if __name__ == "__main__":
    main()
