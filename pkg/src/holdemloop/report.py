"""Report rendering: text tables plus CSV and figure files.

Every CLI report path writes the canonical document, a delimited CSV,
and a rendered matplotlib figure side by side under the report
directory.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .bench import BenchReport, ReplayCheck
from .perception_eval import ALL_COLUMNS, RunReport
from .reference import GROUP_ORDER
from .tabletop import canonical_dumps

PERCEPTION_TABLE_ORDER = ("overall", "LS", "TO", "BI", "CC", "CB", "RCI", "OCI", "SO", "avg")


def _ensure_dir(path: str | Path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_doc(out: Path, name: str, doc: dict) -> None:
    (out / name).write_text(canonical_dumps(doc, pretty=True), encoding="utf-8")


def bench_table(report: BenchReport) -> str:
    """Text table: outcome counts plus SPSR/TCR, groups included."""
    lines = ["scope            SP  DC  TF  DF    N   SPSR   TCR"]
    rows = [("overall", report.overall)] + [
        (g, report.groups[g]) for g in GROUP_ORDER if g in report.groups
    ]
    for name, pair in rows:
        c = pair.counts
        lines.append(
            f"{name:<15} {c['SP']:>3} {c['DC']:>3} {c['TF']:>3} {c['DF']:>3} "
            f"{pair.n:>4}  {pair.spsr_str:>5}  {pair.tcr_str:>5}"
        )
    return "\n".join(lines)


def write_bench_report(report: BenchReport, out_dir: str | Path) -> Path:
    out = _ensure_dir(out_dir)
    _write_doc(out, "report.json", report.to_doc())

    with (out / "report.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["scope", "SP", "DC", "TF", "DF", "N", "SPSR", "TCR"])
        rows = [("overall", report.overall)] + sorted(report.groups.items())
        for name, pair in rows:
            c = pair.counts
            writer.writerow(
                [name, c["SP"], c["DC"], c["TF"], c["DF"], pair.n, pair.spsr_str, pair.tcr_str]
            )

    labels = [g for g in GROUP_ORDER if g in report.groups] + ["overall"]
    pairs = [report.groups[g] for g in GROUP_ORDER if g in report.groups] + [report.overall]
    fig, ax = plt.subplots(figsize=(7, 4))
    x = range(len(labels))
    ax.bar([i - 0.2 for i in x], [float(p.spsr_str) for p in pairs], width=0.4, label="SPSR")
    ax.bar([i + 0.2 for i in x], [float(p.tcr_str) for p in pairs], width=0.4, label="TCR")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel("rate (%)")
    ax.set_ylim(0, 100)
    ax.legend()
    ax.set_title("primitive bench rates")
    fig.tight_layout()
    fig.savefig(out / "report.png", dpi=120)
    plt.close(fig)
    return out


def perception_table(report: RunReport) -> str:
    """Text table in the evaluator's column order."""
    doc = report.to_doc()
    values = {"overall": doc["overall"], "avg": doc["avg"]}
    for col, body in doc["columns"].items():
        values[col] = body["accuracy"]
    header = "  ".join(f"{c:>7}" for c in PERCEPTION_TABLE_ORDER)
    row = "  ".join(f"{values[c] or '-':>7}" for c in PERCEPTION_TABLE_ORDER)
    return header + "\n" + row


def write_perception_report(report: RunReport, out_dir: str | Path) -> Path:
    out = _ensure_dir(out_dir)
    _write_doc(out, "report.json", report.to_doc())
    doc = report.to_doc()

    with (out / "report.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["column", "correct", "applicable", "accuracy"])
        writer.writerow(
            ["overall", report.overall.correct, report.overall.applicable, doc["overall"]]
        )
        for col in ALL_COLUMNS[1:]:
            body = doc["columns"][col]
            writer.writerow([col, body["correct"], body["applicable"], body["accuracy"]])
        writer.writerow(["avg", "", "", doc["avg"]])

    columns = [c for c in PERCEPTION_TABLE_ORDER if c not in ("overall", "avg")]
    heights = [
        float(doc["columns"][c]["accuracy"]) if doc["columns"][c]["accuracy"] else 0.0
        for c in columns
    ]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(columns, heights)
    ax.axhline(float(doc["overall"]), linestyle="--", label=f"overall {doc['overall']}")
    ax.axhline(float(doc["avg"]), linestyle=":", label=f"avg {doc['avg']}")
    ax.set_ylabel("accuracy (%)")
    ax.set_ylim(0, 100)
    ax.legend()
    ax.set_title("perception column accuracy")
    fig.tight_layout()
    fig.savefig(out / "report.png", dpi=120)
    plt.close(fig)
    return out


def replay_table(check: ReplayCheck) -> str:
    lines = [f"trajectory ({check.trajectory})"]
    computed = check.computed.to_doc()
    lines.append("counter   computed  published  note")
    for key in ("states", "ap", "dpp", "wa", "hl", "rc", "lap", "ldp"):
        note = "MISMATCH (reported, not forced)" if key in check.mismatches else ""
        lines.append(
            f"{key:<9} {str(computed[key]):>8}  {str(check.published[key]):>9}  {note}"
        )
    return "\n".join(lines)


def write_replay_report(check: ReplayCheck, out_dir: str | Path) -> Path:
    out = _ensure_dir(out_dir)
    _write_doc(out, "report.json", check.to_doc())
    computed = check.computed.to_doc()

    with (out / "report.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["counter", "computed", "published", "mismatch"])
        for key in ("states", "ap", "dpp", "wa", "hl", "rc", "lap", "ldp"):
            writer.writerow(
                [key, computed[key], check.published[key], key in check.mismatches]
            )

    numeric = ("states", "ap", "dpp", "wa", "hl", "rc")
    fig, ax = plt.subplots(figsize=(7, 4))
    x = range(len(numeric))
    ax.bar([i - 0.2 for i in x], [computed[k] for k in numeric], width=0.4, label="computed")
    ax.bar([i + 0.2 for i in x], [check.published[k] for k in numeric], width=0.4, label="published")
    ax.set_xticks(list(x))
    ax.set_xticklabels([k.upper() for k in numeric])
    ax.legend()
    ax.set_title(f"trajectory ({check.trajectory}) counters")
    fig.tight_layout()
    fig.savefig(out / "report.png", dpi=120)
    plt.close(fig)
    return out
