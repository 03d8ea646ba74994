"""Simulate critical values for the Johansen tests, unrestricted-constant case.

Null: k independent driftless random walks (k = number of common trends
n - r). Statistics computed exactly as in svarlingam.cointegration with
lag = 1 (no difference lags). Discretization T = 1000.
"""
import numpy as np

T = 1000
REPS = 50_000
QS = (90.0, 95.0, 99.0)

def one_rep(rng, k):
    y = np.cumsum(rng.standard_normal((T, k)), axis=0)
    dy = np.diff(y, axis=0)
    z0 = dy - dy.mean(axis=0)
    z1 = y[:-1] - y[:-1].mean(axis=0)
    t_eff = z0.shape[0]
    s00 = z0.T @ z0 / t_eff
    s11 = z1.T @ z1 / t_eff
    s01 = z0.T @ z1 / t_eff
    chol = np.linalg.cholesky(s11)
    ci = np.linalg.inv(chol)
    m = ci @ s01.T @ np.linalg.inv(s00) @ s01 @ ci.T
    ev = np.linalg.eigvalsh((m + m.T) / 2)[::-1]
    ev = np.clip(ev, 0, 1 - 1e-15)
    lt = np.log(1 - ev)
    trace0 = -t_eff * lt.sum()
    maxeig0 = -t_eff * lt[0]
    return trace0, maxeig0

def main():
    for k in range(1, 13):
        rng = np.random.default_rng([20240101, k])
        tr = np.empty(REPS); me = np.empty(REPS)
        for r in range(REPS):
            tr[r], me[r] = one_rep(rng, k)
        tq = np.percentile(tr, QS)
        mq = np.percentile(me, QS)
        print(f"k={k:2d} trace ({tq[0]:.4f}, {tq[1]:.4f}, {tq[2]:.4f})  maxeig ({mq[0]:.4f}, {mq[1]:.4f}, {mq[2]:.4f})", flush=True)

if __name__ == "__main__":
    main()
