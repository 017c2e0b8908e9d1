"""Figure rendering for the ray tables: one PNG per quantity family."""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_ray_figures(out_dir: str, space: str, header: list[str],
                       rows: list[list[float]]) -> list[str]:
    """Render the ray-table columns to PNG files next to the CSV output."""
    cols = {name: [row[i] for row in rows] for i, name in enumerate(header)}
    s = cols["s"]
    written = []

    def save(fig, stem):
        path = os.path.join(out_dir, f"{space}_{stem}.png")
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    for key, style in (("rho_J", "-"), ("rho_I", "--"), ("rho_can", ":")):
        ax.plot(s, cols[key], style, label=key)
    ax.set_xlabel("ray parameter s")
    ax.set_ylabel("potential value")
    ax.set_title(f"{space}: invariant potentials along a cell ray")
    ax.legend()
    save(fig, "potentials")

    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(s, cols["metric_min_eig"], "-")
    ax.set_xlabel("ray parameter s")
    ax.set_ylabel("smallest metric eigenvalue")
    ax.set_title(f"{space}: metric floor toward the cell boundary")
    save(fig, "metric_min_eig")

    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(s, cols["a3"], "-")
    ax.set_xlabel("ray parameter s")
    ax.set_ylabel("a3")
    ax.set_title(f"{space}: leading anti-linear entry along the ray")
    save(fig, "a3")

    return written
