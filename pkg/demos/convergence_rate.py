"""The iteration converges linearly: error drops by a fixed factor per step.

With a little noise added the minimizer is a well-conditioned interior
point and the distance of iterate k to the final iterate decays
geometrically.  The log of that distance against k is then close to a
straight line, whose slope gives the contraction factor.
"""

import numpy as np
import scipy.stats

from subrec.experiments import convergence_run


def main():
    result, _, rows = convergence_run(
        ambient_dim=10,
        subspace_dim=5,
        n_inliers=120,
        n_outliers=100,
        noise=0.01,
        seed=0,
    )
    total = result.iterations
    print("run:", total, "iterations,", result.termination.value)

    ks = np.array([k for k, diff, _ in rows if diff > 0.0])
    logs = np.log([diff for _, diff, _ in rows if diff > 0.0])
    for k in (1, total // 4, total // 2, 3 * total // 4):
        print(f"  k={k:3d}  ||sigma_k - sigma_K|| = {np.exp(logs[ks == k][0]):.3e}")

    # fit over the middle of the run, away from the transient head and
    # the floor at the tail
    lo, hi = int(0.2 * total), int(0.8 * total)
    window = (ks >= lo) & (ks <= hi)
    fit = scipy.stats.linregress(ks[window], logs[window])
    print()
    print(f"fit over k in [{lo}, {hi}]:")
    print("  slope            :", fit.slope)
    print("  contraction/step :", np.exp(fit.slope))
    print("  R^2              :", fit.rvalue**2)


if __name__ == "__main__":
    main()
