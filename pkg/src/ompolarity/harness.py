"""File-level detection, corpus evaluation and diagnostic dumps."""
from __future__ import annotations

import json
import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .baselines import pc_detect, rps_detect
from .errors import PolarityError
from .moments import MomentSpec, compute_oscillating_moment
from .ompd import OMPDConfig, detect_polarity_ompd
from .pitch import analyze_pitch
from .signal_core import Polarity
from .wave_io import read_wav

log = logging.getLogger(__name__)

METHODS = ("ompd", "pc", "rps")


@dataclass(frozen=True)
class GroupRow:
    group: str
    ok: int
    ko: int

    @property
    def accuracy_pct(self) -> float:
        return round(100.0 * self.ok / (self.ok + self.ko), 2)


@dataclass(frozen=True)
class CorpusReport:
    rows: tuple
    method: str
    config: dict = field(default_factory=dict)

    @property
    def total(self) -> GroupRow:
        return GroupRow(
            "TOTAL", sum(r.ok for r in self.rows), sum(r.ko for r in self.rows)
        )


def detect_file(path, method: str = "ompd", config: OMPDConfig | None = None) -> dict:
    """Run one detector on one WAV file."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    config = config or OMPDConfig()
    signal = read_wav(path)
    if method == "ompd":
        result, _ = detect_polarity_ompd(signal, config)
    elif method == "pc":
        result = pc_detect(signal, config.hop_s, config.f0_min, config.f0_max)
    else:
        result = rps_detect(signal, config.hop_s, config.f0_min, config.f0_max)
    return {
        "path": str(path),
        "label": result.label.value,
        "confidence": result.confidence,
        "n_frames": result.n_frames,
    }


def parse_manifest(manifest_path) -> list[tuple[Path, Polarity, str]]:
    """Parse "path,polarity[,group]" lines; paths resolve against the manifest."""
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    entries = []
    for lineno, line in enumerate(
        manifest_path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) not in (2, 3):
            raise ValueError(f"{manifest_path}:{lineno}: expected path,polarity[,group]")
        path = base / parts[0]
        try:
            polarity = Polarity(parts[1].lower())
        except ValueError:
            raise ValueError(
                f"{manifest_path}:{lineno}: polarity must be positive or negative"
            ) from None
        group = parts[2] if len(parts) == 3 else path.parent.name
        entries.append((path, polarity, group))
    if not entries:
        raise ValueError(f"{manifest_path}: empty manifest")
    return entries


def _eval_one(args) -> tuple[str, bool, str]:
    path, expected, group, method, config = args
    try:
        outcome = detect_file(path, method, config)
        ok = outcome["label"] == expected.value
        return group, ok, ""
    except (PolarityError, FileNotFoundError, ValueError) as exc:
        return group, False, f"{path}: {exc}"


def config_snapshot(method: str, config: OMPDConfig) -> dict:
    return {
        "method": method,
        "shift_low": config.shift_low,
        "shift_high": config.shift_high,
        "hop_s": config.hop_s,
        "f0_min": config.f0_min,
        "f0_max": config.f0_max,
        "odd_spec": [config.odd_spec.p1, config.odd_spec.p2],
        "even_spec": [config.even_spec.p1, config.even_spec.p2],
    }


def eval_corpus(
    manifest_path,
    method: str = "ompd",
    config: OMPDConfig | None = None,
    jobs: int = 1,
    strict: bool = False,
) -> CorpusReport:
    """Per-group OK/KO/accuracy over a labeled corpus.

    Failed files count as KO with a logged warning unless strict, in which
    case the first failure raises. The report is independent of jobs.
    """
    config = config or OMPDConfig()
    entries = parse_manifest(manifest_path)
    tasks = [(path, pol, group, method, config) for path, pol, group in entries]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_eval_one, tasks, chunksize=4))
    else:
        outcomes = [_eval_one(t) for t in tasks]

    counts: dict[str, list[int]] = {}
    for group, ok, error in outcomes:
        if error:
            if strict:
                raise PolarityError(error)
            log.warning("counted as KO: %s", error)
        counts.setdefault(group, [0, 0])[0 if ok else 1] += 1
    rows = tuple(
        GroupRow(group, ok, ko) for group, (ok, ko) in sorted(counts.items())
    )
    return CorpusReport(rows, method, config_snapshot(method, config))


def format_report_text(report: CorpusReport) -> str:
    """Aligned text table: group, OK, KO, Acc(%) plus a TOTAL row."""
    rows = list(report.rows) + [report.total]
    width = max(len("Group"), max(len(r.group) for r in rows))
    lines = [f"{'Group':<{width}}  {'OK':>6}  {'KO':>6}  {'Acc(%)':>7}"]
    for row in rows:
        lines.append(
            f"{row.group:<{width}}  {row.ok:>6}  {row.ko:>6}  {row.accuracy_pct:>7.2f}"
        )
    return "\n".join(lines)


def report_json_lines(report: CorpusReport) -> str:
    """One JSON record per row, then a total record and a config record."""
    records = [
        {"group": r.group, "ok": r.ok, "ko": r.ko, "accuracy_pct": r.accuracy_pct}
        for r in report.rows
    ]
    total = report.total
    records.append(
        {
            "group": "TOTAL",
            "ok": total.ok,
            "ko": total.ko,
            "accuracy_pct": total.accuracy_pct,
        }
    )
    records.append({"config": report.config})
    return "\n".join(json.dumps(r, sort_keys=True) for r in records)


def dump_diagnostics(
    path,
    out_dir,
    config: OMPDConfig | None = None,
    extra_orders: tuple = (),
) -> dict:
    """Write moments.csv (dense traces) and shifts.csv (frame votes).

    extra_orders adds (p1, p2) columns beyond the detector's own pair,
    e.g. ((2, 1), (3, 1), (4, 1)) to inspect the higher statistical orders.
    """
    config = config or OMPDConfig()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    signal = read_wav(path)
    sr = signal.sample_rate_hz
    info = analyze_pitch(signal, config.f0_min, config.f0_max)

    specs = [config.odd_spec, config.even_spec] + [
        MomentSpec(p1, p2) for p1, p2 in extra_orders
    ]
    traces = [compute_oscillating_moment(signal, s, info.t0_mean_s) for s in specs]
    moments_path = out_dir / "moments.csv"
    with moments_path.open("w", encoding="utf-8") as fh:
        header = ",".join(f"y_{s.p1}_{s.p2}" for s in specs)
        fh.write(f"time_s,{header}\n")
        for i in range(len(signal)):
            cols = ",".join(f"{tr.values[i]:.9g}" for tr in traces)
            fh.write(f"{i / sr:.6f},{cols}\n")

    _, decisions = detect_polarity_ompd(signal, config)
    shifts_path = out_dir / "shifts.csv"
    with shifts_path.open("w", encoding="utf-8") as fh:
        fh.write("time_s,phase_shift,vote\n")
        for d in decisions:
            fh.write(f"{d.time_s:.6f},{d.phase_shift:.6f},{d.vote.value}\n")
    return {"moments": moments_path, "shifts": shifts_path}
