"""Ground-truth diagnostics available when the generating model is known.

Three checks that back the test statistics' asymptotic theory:

1. the deterministic eigenvalue locations t_k track the mean empirical
   eigenvalues better than the population eigenvalues d_k do;
2. the plug-in covariance estimates converge to the exact covariances
   (scaled spectral-norm error shrinks as n grows);
3. the first-order eigenvector expansion holds with order-1/sqrt(n)
   remainder.
"""

import numpy as np

import netpairtest as npt
from netpairtest.oracle import with_tk


def eigenvalue_locations():
    print("deterministic eigenvalue locations (model 1, n=400, theta=0.9,")
    print("self-loop regime so the noise matrix has exactly zero mean)")
    params = npt.model1_params(400, 80, 0.2, 0.9)
    gt = with_tk(npt.ground_truth(params, self_loops=True),
                 moment_samples=60, seed=0)
    rng = np.random.default_rng(1)
    vals = [npt.top_eigenpairs(
        npt.sample_adjacency(gt.h, rng, self_loops=True), 3).values
        for _ in range(30)]
    mean_emp = np.mean(vals, axis=0)
    print(f"{'k':>3} {'d_k':>10} {'t_k':>10} {'mean emp':>10} "
          f"{'|emp/t-1|':>10} {'|emp/d-1|':>10}")
    for k in range(3):
        print(f"{k + 1:>3} {gt.d[k]:>10.3f} {gt.t[k]:>10.3f} "
              f"{mean_emp[k]:>10.3f} {abs(mean_emp[k] / gt.t[k] - 1):>10.5f} "
              f"{abs(mean_emp[k] / gt.d[k] - 1):>10.5f}")


def covariance_consistency():
    print("\nplug-in covariance consistency (model 1, theta=0.9, "
          "10 replications per size)")
    print(f"{'n':>6}  scaled error n^2 theta ||Sigma1_hat - Sigma1||")
    for n in (300, 600, 1200):
        n0 = n // 5
        params = npt.model1_params(n, n0, 0.2, 0.9)
        gt = npt.ground_truth(params)
        i, j = 3 * n0, 3 * n0 + 1
        errs = []
        ss = np.random.SeedSequence(entropy=0, spawn_key=(n,))
        for rep in ss.spawn(10):
            x = npt.sample_adjacency(gt.h, np.random.default_rng(rep))
            spec = npt.top_eigenpairs(x, 3)
            w0 = npt.residual_matrix(x, spec, 3)
            rr = npt.refined_residual(
                x, spec, npt.refine_eigenvalues(spec, w0, 3), 3)
            s_hat = npt.estimate_sigma1(spec, rr, i, j, 3).matrix
            s_true = npt.true_sigma1(gt, i, j).matrix
            errs.append(n**2 * 0.9 * np.linalg.norm(s_hat - s_true, 2))
        print(f"{n:>6}  {np.mean(errs):.3f}")


def expansion_check():
    print("\nfirst-order eigenvector expansion (model 1, n=300): scaled "
          "remainder sqrt(n) |t_k (vhat_k(i) - v_k(i)) - (W v_k)(i)|")
    params = npt.model1_params(300, 60, 0.2, 0.9)
    gt = with_tk(npt.ground_truth(params), moment_samples=40, seed=2)
    rng = np.random.default_rng(3)
    samples = [npt.sample_adjacency(gt.h, rng) for _ in range(25)]
    for k in range(2):
        out = npt.expansion_residual(gt, samples, k=k, i=10)
        print(f"  k={k + 1}: median {out['median']:.3f}, "
              f"95th percentile {out['p95']:.3f}")


def main():
    eigenvalue_locations()
    covariance_consistency()
    expansion_check()


if __name__ == "__main__":
    main()
