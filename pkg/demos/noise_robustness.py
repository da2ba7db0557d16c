"""Recovery error under noise, swept over the perturbation size.

Exact recovery needs exact inliers; once every point is jittered the
recovered subspace is off by an error that tracks the noise level.
The sweep prints the error/noise ratio so the rough proportionality is
visible directly.
"""

from subrec.experiments import noise_sweep


def main():
    levels = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1]
    rows = noise_sweep(
        ambient_dim=10,
        subspace_dim=5,
        n_inliers=120,
        n_outliers=100,
        noise_levels=levels,
        trials=10,
        seed=0,
    )
    print(f"{'noise':>8}  {'mean error':>12}  {'std':>10}  {'error/noise':>11}")
    for eps, mean, std in rows:
        print(f"{eps:8.0e}  {mean:12.3e}  {std:10.3e}  {mean / eps:11.2f}")
    print()
    print("the ratio drifts upward as the noise starts disturbing which")
    print("points the estimator effectively treats as inliers")


if __name__ == "__main__":
    main()
