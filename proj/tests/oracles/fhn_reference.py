"""Term-by-term evaluation of the FitzHugh-Nagumo exponential-ansatz cost,
plus a dense-grid search for the minimizing rate. Frozen into tests."""
from mpmath import mp, mpf
import numpy as np

mp.dps = 30


def cost(eps, gamma, vb, a, alpha):
    eps, gamma, vb, a, alpha = map(mpf, (eps, gamma, vb, a, alpha))
    return (eps * a**2 / 2 - a**4 / (4 * alpha) + (vb + 1) * a**3 / (3 * alpha)
            - vb * a**2 / (2 * alpha) + a**2 / (2 * alpha * (alpha + gamma)))


print("J(1,10)", mp.nstr(cost("0.01", "0.5", "0.4", 1, 10), 17))
alphas = np.logspace(0, np.log10(500), 200001)
a = 1.38
j = (0.005 * a * a - a**4 / (4 * alphas) + 1.4 * a**3 / (3 * alphas)
     - 0.4 * a * a / (2 * alphas) + a * a / (2 * alphas * (alphas + 0.5)))
k = int(np.argmin(j))
print("alpha*(1.38)", alphas[k], "S_r", j[k])
