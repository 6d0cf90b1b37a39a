"""Reference spectra for the oracle tests.

quartic_levels.json: eigenvalues E_n of -psi'' + x^4 psi (hbar = 1) from a
harmonic-oscillator basis diagonalization. For other hbar the spectrum is
hbar^(4/3) E_n.

jump_levels.json: eigenvalues of -hbar^2 psi'' + v psi with v = x^2 (x < 0),
0.5 + x^2 (x > 0). On each side the decaying solution is a parabolic cylinder
function, so the levels are roots of a Wronskian-matching condition at x = 0,
solved in mpmath.
"""

import json
from pathlib import Path

import mpmath as mp
import numpy as np
from scipy.linalg import eig_banded

OUT = Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "fixtures"


def quartic_levels(count=200, basis=1400, omega=12.0):
    # a = (omega x + i p / omega ... ) ladder with x = (a + a^+) / sqrt(2 omega)
    n = np.arange(basis + 4, dtype=float)
    # x matrix elements <k|x|k+1> = sqrt((k+1) / (2 omega))
    x = np.zeros((basis + 4, basis + 4))
    off = np.sqrt((n[:-1] + 1) / (2 * omega))
    x[np.arange(basis + 3), np.arange(1, basis + 4)] = off
    x[np.arange(1, basis + 4), np.arange(basis + 3)] = off
    x2 = x @ x
    x4 = (x2 @ x2)[:basis, :basis]
    # p^2 = omega (2N + 1) - omega^2 x^2
    p2 = np.diag(omega * (2 * n[:basis] + 1)) - omega**2 * x2[:basis, :basis]
    h = p2 + x4
    bands = np.zeros((5, basis))
    for d in range(5):
        bands[4 - d, d:] = np.diag(h, d)
    w = eig_banded(bands, eigvals_only=True, select="i", select_range=(0, count - 1))
    return [float(v) for v in w]


def jump_levels(hbar, lo, hi):
    mp.mp.dps = 40
    hbar = mp.mpf(hbar)

    def g(lam):
        nu_p = (lam - mp.mpf("0.5")) / (2 * hbar) - mp.mpf("0.5")
        nu_m = lam / (2 * hbar) - mp.mpf("0.5")
        # D_nu(0) ~ 2^(nu/2) / Gamma((1-nu)/2), D_nu'(0) ~ -2^((nu+1)/2) / Gamma(-nu/2);
        # log-derivative matching of D_nu+(s x) and D_nu-(-s x) at x = 0.
        return mp.rgamma(-nu_p / 2) * mp.rgamma((1 - nu_m) / 2) + mp.rgamma(-nu_m / 2) * mp.rgamma((1 - nu_p) / 2)

    roots = []
    steps = int(40 * (hi - lo) / float(hbar))
    grid = [mp.mpf(lo) + (mp.mpf(hi) - lo) * k / steps for k in range(steps + 1)]
    vals = [g(t) for t in grid]
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa == 0:
            roots.append(a)
        elif fa * fb < 0:
            for _ in range(140):
                m = (a + b) / 2
                fm = g(m)
                if fa * fm <= 0:
                    b = m
                else:
                    a, fa = m, fm
            roots.append((a + b) / 2)
    return [float(r) for r in roots]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    q = quartic_levels()
    (OUT / "quartic_levels.json").write_text(json.dumps({"hbar": 1.0, "levels": q}, indent=1) + "\n")
    jump = {str(h): jump_levels(h, 1.0, 2.0) for h in (0.05, 0.025, 0.0125)}
    (OUT / "jump_levels.json").write_text(json.dumps({"window": [1.0, 2.0], "levels": jump}, indent=1) + "\n")


if __name__ == "__main__":
    main()
