"""Size comparison of LZA_S against LZ78 and external general-purpose compressors."""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import shlex
import shutil
import subprocess
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from fsazip import lz78, lza
from fsazip.automaton import Automaton, fingerprint, parse_text, serialize_text
from fsazip.generators import CLASSES, GenSpec

log = logging.getLogger(__name__)

DEFAULT_TOOLS = {
    "gzip": "gzip -c -n",
    "bzip2": "bzip2 -c",
    "xz": "xz -c",
}
DEFAULT_METHODS = ("lza_s", "lz78", "gzip", "lza_s+gzip")
CSV_COLUMNS = ("input_id", "class", "n", "m", "method", "bytes", "ms", "seed")

METHOD_TITLES = {
    "lza_s": "LZA_S",
    "lza": "LZA (full)",
    "lz78": "compress (LZ78)",
    "lza_s+gzip": "LZA_S+gzip",
}


class BenchError(RuntimeError):
    pass


class ToolUnavailable(BenchError):
    pass


def external_tools() -> dict[str, str]:
    """Tool id -> command line. ``FSAZIP_EXTERNAL_TOOLS`` replaces the defaults.

    The variable holds ``id=command`` entries separated by ``;``, e.g.
    ``gzip=gzip -9 -c -n;zstd=zstd -c``. A bare id uses the default command
    for that id, or the id itself.
    """
    env = os.environ.get("FSAZIP_EXTERNAL_TOOLS")
    if not env:
        return dict(DEFAULT_TOOLS)
    tools = {}
    for entry in env.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        tid, sep, cmd = entry.partition("=")
        tid = tid.strip()
        tools[tid] = cmd.strip() if sep else DEFAULT_TOOLS.get(tid, tid)
    return tools


def tool_version(command: str) -> str:
    argv = shlex.split(command)
    if not argv or shutil.which(argv[0]) is None:
        return "unavailable"
    try:
        out = subprocess.run(
            [argv[0], "--version"], capture_output=True, timeout=10, text=True
        )
    except (OSError, subprocess.TimeoutExpired):
        return "unknown"
    text = (out.stdout or out.stderr).strip()
    return text.splitlines()[0] if text else "unknown"


def run_external(command: str, data: bytes) -> bytes:
    argv = shlex.split(command)
    if not argv or shutil.which(argv[0]) is None:
        raise ToolUnavailable(f"{argv[0] if argv else command!r} not found on PATH")
    proc = subprocess.run(argv, input=data, capture_output=True)
    if proc.returncode != 0:
        raise BenchError(
            f"{command!r} exited {proc.returncode}: {proc.stderr.decode(errors='replace').strip()}"
        )
    return proc.stdout


def serialize_adjacency(a: Automaton) -> bytes:
    """Bytes handed to the baseline compressors: the canonical text form."""
    return serialize_text(a).encode("utf-8")


def baseline_lz78_size(a: Automaton) -> int:
    return len(lz78.compress_bytes(serialize_adjacency(a)))


def baseline_external_size(a: Automaton, tool: str, tools: dict[str, str] | None = None) -> int:
    tools = external_tools() if tools is None else tools
    if tool not in tools:
        raise ToolUnavailable(f"no command configured for {tool!r}")
    return len(run_external(tools[tool], serialize_adjacency(a)))


def lza_artifact(a: Automaton, mode: str) -> bytes:
    """Compress and verify the roundtrip before the size may be reported."""
    blob = lza.encode(a, mode).to_bytes()
    back = lza.decode(blob)
    if mode == lza.FULL:
        ok = back == a
    else:
        ok = fingerprint(back) == fingerprint(a) and lza.encode(back, mode).to_bytes() == blob
    if not ok:
        raise BenchError(f"{mode} roundtrip check failed")
    return blob


def entropy_bytes(n: int, p: float) -> float:
    """n^2 h(p) / 8: size an ideal coder for G(n, p) would need."""
    if p <= 0 or p >= 1:
        return 0.0
    h = -p * math.log2(p) - (1 - p) * math.log2(1 - p)
    return n * n * h / 8


def derive_seed(base_seed: int, class_index: int, run: int) -> int:
    ss = np.random.SeedSequence([base_seed, class_index, run])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class BenchRow:
    input_id: str
    kind: str
    n: int
    m: int
    method: str
    bytes: int | None
    ms: float
    seed: int | None
    note: str = ""


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def cell_values(self) -> dict[tuple[str, str], list[int | None]]:
        cells = defaultdict(list)
        for r in self.rows:
            cells[(r.kind, r.method)].append(r.bytes)
        return cells

    def means(self) -> dict[tuple[str, str], float | None]:
        """Mean bytes per (class, method); None if any run of the cell failed."""
        out = {}
        for key, vals in self.cell_values().items():
            out[key] = None if any(v is None for v in vals) else float(np.mean(vals))
        return out

    def mean(self, kind: str, method: str) -> float | None:
        return self.means().get((kind, method))

    def kinds(self) -> list[str]:
        seen = []
        for r in self.rows:
            if r.kind not in seen:
                seen.append(r.kind)
        return seen

    def methods(self) -> list[str]:
        seen = []
        for r in self.rows:
            if r.method not in seen:
                seen.append(r.method)
        return seen

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(
                [
                    r.input_id,
                    r.kind,
                    r.n,
                    r.m,
                    r.method,
                    "n/a" if r.bytes is None else r.bytes,
                    f"{r.ms:.1f}",
                    "" if r.seed is None else r.seed,
                ]
            )
        return buf.getvalue()

    def to_markdown(self) -> str:
        """Table 1 layout: one row per class, mean bytes per method."""
        means = self.means()
        methods = self.methods()
        head = ["Class", "n", "runs"] + [METHOD_TITLES.get(m, m) for m in methods]
        extra_numbering = "lza_s" in methods
        if extra_numbering:
            head.append("LZA_S + numbering")
        head.append("n^2 h(p)/8")
        lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        cells = self.cell_values()
        for kind in self.kinds():
            rows = [r for r in self.rows if r.kind == kind]
            n = rows[0].n
            runs = len(cells[(kind, methods[0])])
            vals = []
            for m in methods:
                v = means.get((kind, m))
                vals.append("n/a" if v is None else f"{v:.0f}")
            if extra_numbering:
                v = means.get((kind, "lza_s"))
                # original numbering costs at most n*log2(n) bits
                vals.append("n/a" if v is None else f"{v + n * math.log2(max(n, 2)) / 8:.0f}")
            p = self.metadata.get("p")
            vals.append(f"{entropy_bytes(n, p):.0f}" if kind == "G1" and p else "")
            lines.append("| " + " | ".join([kind, str(n), str(runs)] + vals) + " |")
        meta = ", ".join(f"{k}={v}" for k, v in self.metadata.items() if k != "tools")
        lines.append("")
        lines.append(f"Metadata: {meta}")
        for tid, ver in self.metadata.get("tools", {}).items():
            lines.append(f"- {tid}: {ver}")
        return "\n".join(lines) + "\n"


def _measure(a: Automaton, method: str, tools: dict[str, str]) -> tuple[int | None, str]:
    try:
        if method == "lza_s":
            return len(lza_artifact(a, lza.STRUCTURE)), ""
        if method == "lza":
            return len(lza_artifact(a, lza.FULL)), ""
        if method == "lz78":
            return baseline_lz78_size(a), ""
        if method.startswith("lza_s+"):
            blob = lza_artifact(a, lza.STRUCTURE)
            tool = method.split("+", 1)[1]
            if tool not in tools:
                raise ToolUnavailable(f"no command configured for {tool!r}")
            return len(run_external(tools[tool], blob)), ""
        return baseline_external_size(a, method, tools), ""
    except ToolUnavailable as e:
        return None, f"skipped: {e}"
    except Exception as e:  # a failing cell must not abort the sweep
        log.warning("method %s failed: %s", method, e)
        return None, f"error: {e}"


def _run_cell(job) -> list[BenchRow]:
    input_id, kind, source, seed, methods, tools = job
    if isinstance(source, GenSpec):
        a = source.build()
    else:
        a = parse_text(Path(source).read_text(), strip_weights=True, dedupe=True)
    rows = []
    for method in methods:
        t0 = time.perf_counter()
        size, note = _measure(a, method, tools)
        ms = (time.perf_counter() - t0) * 1000
        rows.append(BenchRow(input_id, kind, a.n, a.m, method, size, ms, seed, note))
    return rows


def run_bench(
    inputs,
    runs: int = 20,
    methods=DEFAULT_METHODS,
    base_seed: int = 0,
    workers: int = 1,
) -> BenchReport:
    """Compress every input with every method.

    ``inputs`` mixes :class:`GenSpec` templates (their seed is replaced by a
    per-run seed derived from ``base_seed``) and paths to text-format files
    (compressed once each).
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    methods = list(methods)
    tools = external_tools()
    jobs = []
    for item in inputs:
        if isinstance(item, GenSpec):
            cidx = CLASSES.index(item.kind)
            for run in range(runs):
                seed = derive_seed(base_seed, cidx, run)
                spec = GenSpec(item.kind, item.n, item.p, item.m, seed)
                jobs.append((f"{item.kind}-n{item.n}-r{run}", item.kind, spec, seed, methods, tools))
        else:
            path = Path(item)
            jobs.append((path.name, "file", str(path), None, methods, tools))

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, jobs))
    else:
        results = [_run_cell(j) for j in jobs]

    report = BenchReport([row for rows in results for row in rows])
    used = {m.split("+", 1)[-1] for m in methods} & set(tools)
    p_vals = {item.p for item in inputs if isinstance(item, GenSpec)}
    report.metadata = {
        "runs": runs,
        "base_seed": base_seed,
        "methods": ",".join(methods),
        "p": p_vals.pop() if len(p_vals) == 1 else None,
        "tools": {t: tool_version(tools[t]) for t in sorted(used)},
    }
    return report


def redundancy_trend(
    sizes=(250, 500, 1000, 2000), p: float = 0.01, runs: int = 10, base_seed: int = 0
) -> list[dict]:
    """Mean LZA_S excess over n^2 h(p), per edge slot, on G(n, p)."""
    out = []
    for n in sizes:
        bits = []
        for run in range(runs):
            a = GenSpec("G1", n, p, 1, derive_seed(base_seed, n, run)).build()
            bits.append(8 * len(lza.encode(a, lza.STRUCTURE).to_bytes()))
        mean_bits = float(np.mean(bits))
        ent = 8 * entropy_bytes(n, p)
        out.append(
            {
                "n": n,
                "mean_bits": mean_bits,
                "entropy_bits": ent,
                "redundancy": (mean_bits - ent) / (n * n),
            }
        )
    return out
