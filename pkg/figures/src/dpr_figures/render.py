"""Two-panel figure renderers for dpr-bounds sweep CSVs.

Every layout pairs an intensity panel with a rate panel (log-scale rate
axis for distance sweeps, linear for visibility sweeps).  All numbers
come from the CSVs; nothing is recomputed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .csvdata import SweepData, load_many, merge  # noqa: E402

FIGURE_IDS = ("fig1_bsa", "fig2_all_Q0", "fig3_rates_vs_dist",
              "fig4_cow2pa", "fig5_cowm1", "fig6_cowm2_and_dps")

PROTOCOL_ORDER = ("cow", "cowm1", "cowm2", "dps")


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    inputs: tuple
    output: str
    raster: bool = False

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure_id!r}; "
                             f"choose from {FIGURE_IDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


@dataclass
class PanelInfo:
    series: int = 0
    references: int = 0
    x_range: tuple = (0.0, 0.0)
    y_range: tuple = (0.0, 0.0)


@dataclass
class RenderInfo:
    figure_id: str
    output: str
    panels: dict = field(default_factory=dict)

    @property
    def series_counts(self) -> dict:
        return {name: p.series for name, p in self.panels.items()}


def _proto_sort(value: str) -> tuple:
    try:
        return (PROTOCOL_ORDER.index(value), value)
    except ValueError:
        return (len(PROTOCOL_ORDER), value)


def _finish_panel(ax, xlabel, ylabel, info: PanelInfo):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    if info.series + info.references:
        ax.legend(fontsize=8)
    info.x_range = tuple(round(v, 12) for v in ax.get_xlim())
    info.y_range = tuple(round(v, 12) for v in ax.get_ylim())


def _save(fig, spec: FigureSpec):
    kwargs = {}
    if spec.raster:
        kwargs = dict(format="png", dpi=150)
    elif "." not in spec.output.rsplit("/", 1)[-1]:
        kwargs = dict(format="pdf")
    if not spec.raster and spec.output.endswith(".pdf"):
        kwargs.setdefault("metadata", {"CreationDate": None})
    fig.savefig(spec.output, **kwargs)
    plt.close(fig)


def _series_by(data: SweepData, rows, key_fn, labels):
    groups = {}
    for row in rows:
        groups.setdefault(key_fn(row), []).append(row)
    return [(label, groups[label]) for label in labels if label in groups]


def _render_distance_layout(spec, data, rows, group_key, group_labels,
                            mu_column, with_asymptotes=False):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.2))
    left, right = PanelInfo(), PanelInfo()
    for label, series in _series_by(data, rows, group_key, group_labels):
        series = sorted(series, key=lambda r: float(r["distance_km"]))
        d = data.floats(series, "distance_km")
        ax1.plot(d, data.floats(series, mu_column), label=str(label))
        left.series += 1
        pos = [r for r in series if float(r["rate"]) > 0.0]
        ax2.semilogy(data.floats(pos, "distance_km"),
                     data.floats(pos, "rate"), label=str(label))
        right.series += 1
        if with_asymptotes:
            ax1.plot(d, data.floats(series, "mu_asym"), "--", color="gray",
                     linewidth=0.9)
            ax2.semilogy(d, data.floats(series, "rate_asym"), "--",
                         color="gray", linewidth=0.9)
            left.references += 1
            right.references += 1
    _finish_panel(ax1, "distance [km]", "optimal mean photon number", left)
    _finish_panel(ax2, "distance [km]", "secret key rate per time slot", right)
    _save(fig, spec)
    return {"mu": left, "rate": right}


def _render_visibility_layout(spec, data, groups, y_column="r0"):
    """groups: list of (label, rows)."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.2))
    left, right = PanelInfo(), PanelInfo()
    for label, series in groups:
        series = sorted(series, key=lambda r: float(r["V"]))
        v = data.floats(series, "V")
        ax1.plot(v, data.floats(series, "mu_opt"), label=str(label))
        ax2.plot(v, data.floats(series, y_column), label=str(label))
        left.series += 1
        right.series += 1
    _finish_panel(ax1, "visibility V", "optimal mean photon number", left)
    _finish_panel(ax2, "visibility V", "rate prefactor r0", right)
    _save(fig, spec)
    return {"mu": left, "r0": right}


def render(spec: FigureSpec) -> RenderInfo:
    """Render one figure; returns panel/series metadata for verification."""
    data = merge(load_many(spec.inputs))
    fid = spec.figure_id

    if fid == "fig1_bsa":
        data.require_columns(["distance_km", "protocol", "mu_opt", "rate",
                              "mu_asym", "rate_asym"])
        protocols = sorted(data.distinct("protocol"), key=_proto_sort)
        panels = _render_distance_layout(
            spec, data, data.rows, lambda r: r["protocol"], protocols,
            "mu_opt", with_asymptotes=True)
    elif fid == "fig3_rates_vs_dist":
        data.require_columns(["distance_km", "protocol", "attack", "mu",
                              "rate"])
        keys = sorted({(r["protocol"], r["attack"]) for r in data.rows},
                      key=lambda k: (_proto_sort(k[0]), k[1]))
        panels = _render_distance_layout(
            spec, data, data.rows, lambda r: (r["protocol"], r["attack"]),
            keys, "mu")
    elif fid == "fig2_all_Q0":
        data.require_columns(["protocol", "V", "Q", "mu_opt", "r0"])
        rows = [r for r in data.rows
                if r["protocol"] == "dps" or float(r["Q"]) == 0.0]
        protocols = sorted({r["protocol"] for r in rows}, key=_proto_sort)
        groups = _series_by(data, rows, lambda r: r["protocol"], protocols)
        if not groups:
            raise ValueError(f"{fid}: empty selection, nothing to plot")
        panels = _render_visibility_layout(spec, data, groups)
    elif fid in ("fig4_cow2pa", "fig5_cowm1"):
        proto = "cow" if fid == "fig4_cow2pa" else "cowm1"
        data.require_columns(["protocol", "V", "Q", "mu_opt", "r0"])
        rows = data.select(protocol=proto)
        qs = sorted(data.distinct("Q", rows), key=float)
        groups = [(f"Q={q}", [r for r in rows if r["Q"] == q]) for q in qs]
        if not groups:
            raise ValueError(f"{fid}: empty selection, nothing to plot")
        panels = _render_visibility_layout(spec, data, groups)
    elif fid == "fig6_cowm2_and_dps":
        data.require_columns(["protocol", "V", "Q", "mu_opt", "r0"])
        m2 = data.select(protocol="cowm2")
        groups = [(f"cowm2 Q={q}", [r for r in m2 if r["Q"] == q])
                  for q in sorted(data.distinct("Q", m2), key=float)]
        dps_rows = data.select(protocol="dps")
        groups.extend((f"dps {att}",
                       [r for r in dps_rows if r["attack"] == att])
                      for att in sorted(data.distinct("attack", dps_rows)))
        if not groups:
            raise ValueError(f"{fid}: empty selection, nothing to plot")
        panels = _render_visibility_layout(spec, data, groups)
    else:  # pragma: no cover - guarded by FigureSpec
        raise ValueError(fid)

    if not any(p.series for p in panels.values()):
        raise ValueError(f"{fid}: empty selection, nothing to plot")
    return RenderInfo(figure_id=fid, output=spec.output, panels=panels)
