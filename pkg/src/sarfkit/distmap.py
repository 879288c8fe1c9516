"""Distribution-map rendering: every module drawn as a colored, lettered cell
keyed by its computed cluster, laid out inside its reference group's rectangle."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .clustering import Decomposition
from .errors import DomainError

#: Twenty distinguishable fills; clusters beyond that cycle (letters disambiguate).
PALETTE = (
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c",
    "#98df8a", "#d62728", "#ff9896", "#9467bd", "#c5b0d5",
    "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f",
    "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
)

_CELL = 18
_PAD = 4
_GAP = 12
_LABEL_H = 14
_MARGIN = 10
_LEGEND_H = 16


def cluster_letter(index: int) -> str:
    """A, B, ..., Z, AA, AB, ... for zero-based cluster indices."""
    index += 1
    out = []
    while index:
        index, rem = divmod(index - 1, 26)
        out.append(chr(ord("A") + rem))
    return "".join(reversed(out))


@dataclass(frozen=True)
class DistributionMapSpec:
    """Computed clusters (colors/letters) drawn inside reference groups (boxes).

    Letters and colors are assigned to computed clusters in sorted-name order,
    groups are laid out as rows sorted by name, and cells within a group sort
    by module identifier, so rendering is deterministic.
    """

    computed: Decomposition
    reference: Decomposition

    def __post_init__(self) -> None:
        if self.computed.universe != self.reference.universe:
            raise DomainError("computed and reference decompositions cover different universes")

    def codes(self) -> dict[str, tuple[str, str]]:
        """computed cluster name -> (letter, fill color)."""
        return {
            name: (cluster_letter(i), PALETTE[i % len(PALETTE)])
            for i, name in enumerate(sorted(self.computed.clusters))
        }

    def module_codes(self) -> dict[str, tuple[str, str]]:
        codes = self.codes()
        return {
            module: codes[name]
            for name, block in self.computed.clusters.items()
            for module in block
        }


def render_text(spec: DistributionMapSpec) -> str:
    """One line per reference group: the group name and its members' letter codes."""
    per_module = spec.module_codes()
    lines = []
    for group in sorted(spec.reference.clusters):
        letters = " ".join(per_module[m][0] for m in sorted(spec.reference.clusters[group]))
        lines.append(f"{group}\t{letters}")
    return "".join(line + "\n" for line in lines)


def render_svg(spec: DistributionMapSpec) -> str:
    """Deterministic SVG: one rectangle per reference group, one lettered cell per module."""
    per_module = spec.module_codes()
    groups = sorted(spec.reference.clusters)
    width = 2 * _MARGIN + max(
        (2 * _PAD + _CELL * len(spec.reference.clusters[g]) for g in groups),
        default=0,
    )
    codes = spec.codes()
    legend_entries = sorted(spec.computed.clusters)
    legend_top = _MARGIN + len(groups) * (_LABEL_H + _CELL + 2 * _PAD + _GAP)
    height = legend_top + len(legend_entries) * _LEGEND_H + _MARGIN

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="10">',
    ]
    y = _MARGIN
    for group in groups:
        members = sorted(spec.reference.clusters[group])
        box_w = 2 * _PAD + _CELL * len(members)
        parts.append(f"<g class={quoteattr('group')} id={quoteattr('group-' + group)}>")
        parts.append(
            f'<text class="group-label" x="{_MARGIN}" y="{y + _LABEL_H - 4}">'
            f"{escape(group)}</text>"
        )
        box_y = y + _LABEL_H
        parts.append(
            f'<rect class="group-box" x="{_MARGIN}" y="{box_y}" width="{box_w}" '
            f'height="{_CELL + 2 * _PAD}" fill="none" stroke="#333333"/>'
        )
        for i, module in enumerate(members):
            letter, fill = per_module[module]
            cx = _MARGIN + _PAD + i * _CELL
            cy = box_y + _PAD
            parts.append(
                f'<rect class="cell" x="{cx}" y="{cy}" width="{_CELL - 2}" '
                f'height="{_CELL - 2}" fill={quoteattr(fill)} stroke="#555555">'
                f"<title>{escape(module)}</title></rect>"
            )
            parts.append(
                f'<text class="cell-label" x="{cx + (_CELL - 2) // 2}" '
                f'y="{cy + _CELL - 6}" text-anchor="middle">{escape(letter)}</text>'
            )
        parts.append("</g>")
        y = box_y + _CELL + 2 * _PAD + _GAP
    for i, name in enumerate(legend_entries):
        letter, fill = codes[name]
        ly = legend_top + i * _LEGEND_H
        parts.append(
            f'<rect class="legend-swatch" x="{_MARGIN}" y="{ly}" width="12" height="12" '
            f'fill={quoteattr(fill)} stroke="#555555"/>'
        )
        parts.append(
            f'<text class="legend-label" x="{_MARGIN + 18}" y="{ly + 10}">'
            f"{escape(letter)} = {escape(name)}</text>"
        )
    parts.append("</svg>")
    return "".join(part + "\n" for part in parts)
