"""Plain-text, TSV, and JSON rendering of metric reports."""

from __future__ import annotations

import json
from typing import Sequence

from .metrics import MetricReport

_HEADERS = {
    "mojofm": "MoJoFM",
    "mojosim": "MoJoSim",
    "mojo": "MoJo",
    "mno": "mno",
    "ned": "NED",
    "n": "N",
    "k": "K",
    "k_a": "K_a",
    "n_maxops": "N_maxops",
}

_PERCENT_KEYS = {"mojofm", "mojosim"}


def _text_value(key: str, value) -> str:
    if key in _PERCENT_KEYS:
        return f"{value:.1f}"
    if key == "ned":
        return f"{value:.3f}"
    return str(value)


def _table(keys: Sequence[str], row: dict) -> str:
    headers = [_HEADERS.get(k, k) for k in keys]
    cells = [_text_value(k, row[k]) for k in keys]
    widths = [max(len(h), len(c)) for h, c in zip(headers, cells)]
    head = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    body = "  ".join(c.ljust(w) for c, w in zip(cells, widths))
    return f"{head.rstrip()}\n{body.rstrip()}\n"


def render_metric_report(report: MetricReport, fmt: str = "json") -> str:
    payload = report.to_json_dict()
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    keys = list(report.values)
    for key in ("k", "k_a", "n"):
        if key in payload:
            keys.append(key)
    if fmt == "tsv":
        head = "\t".join(keys)
        body = "\t".join(str(payload[k]) for k in keys)
        return f"{head}\n{body}\n"
    if fmt == "text":
        return _table(keys, payload)
    raise ValueError(f"unknown report format {fmt!r}")


def render_stability_report(
    transitions: Sequence[dict], mean_value: float, fmt: str = "json"
) -> str:
    if fmt == "json":
        payload = {"transitions": list(transitions), "average": mean_value}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "tsv":
        lines = ["from\tto\tshared\tmojosim"]
        for t in transitions:
            lines.append(f"{t['from']}\t{t['to']}\t{t['shared']}\t{t['mojosim']}")
        lines.append(f"average\t\t\t{mean_value}")
        return "".join(line + "\n" for line in lines)
    if fmt == "text":
        rows = [(f"{t['from']} -> {t['to']}", f"{t['mojosim']:.1f}") for t in transitions]
        rows.append(("Average", f"{mean_value:.1f}"))
        label_w = max(len("Transition"), max(len(r[0]) for r in rows))
        lines = [f"{'Transition'.ljust(label_w)}  MoJoSim"]
        for label, value in rows:
            lines.append(f"{label.ljust(label_w)}  {value}")
        return "".join(line + "\n" for line in lines)
    raise ValueError(f"unknown report format {fmt!r}")


def render_occupancy_report(
    value: float, largest: str, modules: int, packages: int, fmt: str = "json"
) -> str:
    exceeded = value > 40.0
    if fmt == "json":
        payload = {
            "occupancy": value,
            "largest_package": largest,
            "modules": modules,
            "packages": packages,
            "exceeds_guideline": exceeded,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "tsv":
        return (
            "occupancy\tlargest_package\tmodules\tpackages\n"
            f"{value}\t{largest}\t{modules}\t{packages}\n"
        )
    if fmt == "text":
        return (
            f"Occupancy  {value:.1f}\n"
            f"Largest package {largest!r} holds {value:.1f}% of {modules} modules "
            f"({packages} packages).\n"
        )
    raise ValueError(f"unknown report format {fmt!r}")
