"""Static figures for command-line reports.

Figures are written as SVG with a fixed hash salt and no date stamp, so the
same data always produce byte-identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_RC = {"svg.hashsalt": "lepbec", "svg.fonttype": "path", "figure.figsize": (5.0, 4.0), "font.size": 9}


def _save(fig, path) -> str:
    fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
    return str(path)


def heatmap(field, k1, k2, path, title: str = "", label: str = "density") -> str:
    """Colour map of ``field[i, j]`` at ``(k1[i], k2[j])``."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        k1, k2 = np.asarray(k1), np.asarray(k2)
        im = ax.imshow(np.asarray(field).T, origin="lower", extent=(k1[0], k1[-1], k2[0], k2[-1]),
                       cmap="viridis", aspect="equal", interpolation="nearest")
        fig.colorbar(im, ax=ax, label=label)
        ax.set_xlabel("$k_1$")
        ax.set_ylabel("$k_2$")
        if title:
            ax.set_title(title)
        return _save(fig, path)


def sweep_figure(rows, path) -> str:
    """Chemical potential and ground-mode density against the box size."""
    L = np.array([r["L"] for r in rows])
    mu = np.array([r["mu"] for r in rows])
    ceil = np.array([r["mu_ceiling"] for r in rows])
    cond = np.array([r["condensate_estimate"] for r in rows])
    rc = rows[0]["rho_c"]
    with plt.rc_context(_RC):
        fig, (a1, a2) = plt.subplots(2, 1, sharex=True, figsize=(5.0, 6.0))
        a1.semilogx(L, mu, "o-", label=r"$\mu(L)$")
        a1.semilogx(L, ceil, "--", color="grey", label=r"$\tilde\beta(\varepsilon_0)$")
        a1.axhline(0.0, color="k", lw=0.5)
        a1.set_ylabel("chemical potential")
        a1.legend()
        a2.semilogx(L, cond / rc, "s-")
        a2.set_xlabel("box side $L$")
        a2.set_ylabel(r"ground-mode density / $\rho_c$")
        return _save(fig, path)


def profile_figure(radii, values, path, title: str = "") -> str:
    """Local density against the distance from the origin."""
    radii, values = np.asarray(radii, float), np.asarray(values, float)
    order = np.argsort(radii, kind="stable")
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(radii[order], values[order], "o-")
        ax.set_xlabel("$|x|$")
        ax.set_ylabel(r"$\rho(x)$")
        if title:
            ax.set_title(title)
        return _save(fig, path)
