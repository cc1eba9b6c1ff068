"""Static figures of sampled spectra.

Figures are written as SVG with a fixed hash salt and no timestamp so that
identical inputs give byte-identical files.
"""

from __future__ import annotations

import io
import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import ValidationError  # noqa: E402
from .spectra import COLUMNS, Peak, Spectrum  # noqa: E402

__all__ = ["STYLE", "LABELS", "plot_series", "render_plot", "atomic_write"]

STYLE = {
    "svg.hashsalt": "tripodcavity",
    "svg.fonttype": "path",
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.2,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "legend.frameon": False,
}

LABELS = {
    "chi_re": r"Re[$\chi$]",
    "chi_im": r"Im[$\chi$]",
    "phase": r"$\Phi$ (rad)",
    "kappa": r"$\kappa$",
    "transmission": "S",
}

LINESTYLES = {"chi_re": "-", "chi_im": "--"}


def atomic_write(path: str | Path, data: bytes) -> None:
    """Write ``data`` to ``path`` via a temporary file and an atomic rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def plot_series(s: Spectrum, columns, normalize_peak: bool = False) -> dict[str, np.ndarray]:
    """Ordinates to draw for each requested column.

    With ``normalize_peak`` the transmission column is divided by its maximum.
    """
    if len(s) == 0:
        raise ValidationError("spectrum", "is empty")
    columns = list(columns)
    if not columns:
        raise ValidationError("columns", "at least one column is required")
    out = {}
    for name in columns:
        if name not in COLUMNS or name == "delta_p":
            raise ValidationError("columns", f"unknown column {name!r}")
        y = np.asarray(s.column(name), dtype=float)
        if normalize_peak and name == "transmission":
            y = y / np.max(y)
        out[name] = y
    return out


def render_plot(
    s: Spectrum,
    columns,
    path: str | Path,
    normalize_peak: bool = False,
    peaks: list[Peak] = (),
    title: str | None = None,
) -> Path:
    """Draw the selected columns against delta_p and save an SVG to ``path``."""
    series = plot_series(s, columns, normalize_peak)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 3.8))
        for name, y in series.items():
            label = LABELS[name]
            if normalize_peak and name == "transmission":
                label = r"S / S$_{max}$"
            ax.plot(s.delta_p, y, LINESTYLES.get(name, "-"), label=label)
        if peaks and "transmission" in series:
            scale = 1.0 / np.max(s.transmission) if normalize_peak else 1.0
            ax.plot([pk.position for pk in peaks], [pk.height * scale for pk in peaks], "v", ms=4,
                    label="peaks")
        if {"chi_re", "chi_im"} & set(series):
            ax.axhline(0.0, color="0.6", lw=0.5)
        ax.set_xlabel(r"$\Delta_p$ / $\gamma_{01}$")
        ax.set_xlim(s.delta_p[0], s.delta_p[-1])
        if title:
            ax.set_title(title)
        ax.legend(loc="best")
        fig.tight_layout()
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    atomic_write(path, buf.getvalue())
    return Path(path)
