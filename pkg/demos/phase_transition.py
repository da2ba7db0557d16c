"""Exact recovery switches on abruptly at the inlier-fraction threshold.

Sweeping the inlier count with everything else held fixed shows a sharp
transition: below it the mean recovery error is order one, above it the
error is numerically zero.  The threshold sits where the inlier
fraction crosses d/D (here 5/10 against 100 outliers, so 100 inliers).
"""

from subrec.experiments import exact_recovery_sweep


def main():
    counts = list(range(80, 121, 5))
    print("sweeping n_inliers over", counts, "(D=10, d=5, 100 outliers)")
    rows = exact_recovery_sweep(
        ambient_dim=10,
        subspace_dim=5,
        n_outliers=100,
        inlier_counts=counts,
        trials=10,
        seed=0,
    )
    print()
    print(f"{'n_inliers':>9}  {'fraction':>8}  {'mean error':>12}  {'std':>10}")
    for n, mean, std, _ in rows:
        frac = n / (n + 100)
        marker = "  <- threshold" if n == 100 else ""
        print(f"{n:9d}  {frac:8.3f}  {mean:12.3e}  {std:10.3e}{marker}")
    print()
    recovered = [n for n, mean, _, _ in rows if mean < 1e-6]
    print("exact recovery from n_inliers =", min(recovered), "upward")


if __name__ == "__main__":
    main()
