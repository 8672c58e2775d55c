"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 enumeration cap exceeded,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import asympt, degseq, exact, mc
from .confmodel import dump_multigraph, project, sample_configuration
from .errors import CapExceededError, InputError, InvariantError
from .exact import DEFAULT_CAP

DEFAULT_SAMPLES = 100_000
DEFAULT_CONFIDENCE = 0.95
DEFAULT_SEED = 0

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4

_rational = {
    "type": "object",
    "properties": {"num": {"type": "string"}, "den": {"type": "string"}},
    "required": ["num", "den"],
}
_estimate = {
    "type": "object",
    "required": ["p_hat", "ci_low", "ci_high", "confidence", "samples", "successes", "seed"],
    "properties": {
        "p_hat": {"type": "number", "minimum": 0, "maximum": 1},
        "ci_low": {"type": "number"},
        "ci_high": {"type": "number"},
        "samples": {"type": "integer", "minimum": 1},
        "successes": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer"},
    },
}
_meta = {
    "type": "object",
    "required": ["command", "seed", "defaults"],
}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["meta", "degrees", "stats", "asymptotic"],
    "properties": {
        "meta": _meta,
        "degrees": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "stats": {
            "type": "object",
            "required": ["n", "N", "sum_d2", "sum_dd1", "sum_d2d1sq", "max_d",
                         "lambda_big", "lambda_exact", "density_ratio"],
            "properties": {"lambda_exact": _rational},
        },
        "asymptotic": {
            "type": "object",
            "required": ["label", "t2a_value", "t2b_value", "poisson_value", "upper_bound_j1",
                         "lower_bound_j2", "lambda_big", "density_ratio", "correction_term",
                         "dichotomy", "stats"],
        },
        "exact": {
            "type": "object",
            "required": ["total_configurations", "simple_configurations", "p_simple",
                         "y_distribution", "ytilde_distribution", "e_ytilde"],
            "properties": {
                "p_simple": _rational,
                "e_ytilde": _rational,
                "y_distribution": {"type": "object", "additionalProperties": _rational},
                "ytilde_distribution": {"type": "object", "additionalProperties": _rational},
            },
        },
        "monte_carlo": _estimate,
        "multigraph_dump": {"type": "array", "items": {"type": "string"}},
    },
}

CONVERGENCE_COLUMNS = ["n", "p_hat", "ci_low", "ci_high", "poisson_value", "t2a_value", "gap", "error"]
DICHOTOMY_COLUMNS = ["hub_degree", "n", "N", "ratio", "p_hat", "ci_low", "ci_high", "t2a_value",
                     "upper_bound_j1", "error"]


def _table_schema(columns):
    return {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["meta", "columns", "rows"],
        "properties": {
            "meta": _meta,
            "columns": {"const": columns},
            "rows": {
                "type": "array",
                "items": {"type": "object", "required": columns,
                          "properties": {c: {} for c in columns}, "additionalProperties": False},
            },
        },
    }


CONVERGENCE_SCHEMA = _table_schema(CONVERGENCE_COLUMNS)
DICHOTOMY_SCHEMA = _table_schema(DICHOTOMY_COLUMNS)


@dataclass
class RunConfig:
    command: str
    degrees_file: str | None = None
    regular: tuple[int, int] | None = None
    literal: str | None = None
    samples: int | None = None
    seed: int = DEFAULT_SEED
    workers: int = 1
    exact: bool = False
    cap: int = DEFAULT_CAP
    confidence: float = DEFAULT_CONFIDENCE
    fmt: str = "json"
    out: str | None = None
    dump: bool = False
    degree: int | None = None
    sizes: list[int] = field(default_factory=list)
    hubs: list[int] = field(default_factory=list)
    edges: int = 100

    def degree_sequence(self) -> degseq.DegreeSequence:
        sources = [s for s in (self.degrees_file, self.regular, self.literal) if s is not None]
        if len(sources) != 1:
            raise InputError("give exactly one of --degrees, --regular, --literal")
        if self.degrees_file is not None:
            return degseq.from_file(self.degrees_file)
        if self.regular is not None:
            return degseq.regular(*self.regular)
        return degseq.literal(self.literal)

    def meta(self) -> dict:
        return {
            "command": self.command,
            "seed": self.seed,
            "workers": self.workers,
            "samples": self.samples,
            "defaults": {"samples": DEFAULT_SAMPLES, "confidence": DEFAULT_CONFIDENCE,
                         "seed": DEFAULT_SEED, "cap": DEFAULT_CAP},
        }


def cmd_report(cfg: RunConfig) -> dict:
    ds = cfg.degree_sequence()
    rep = asympt.report(ds)
    doc = {
        "meta": cfg.meta(),
        "degrees": list(ds.degrees),
        "stats": rep.stats.to_dict(),
        "asymptotic": rep.to_dict(),
    }
    if cfg.exact or ds.edges <= cfg.cap:
        doc["exact"] = exact.exact_p_simple(ds, cfg.cap).to_dict()
    if cfg.samples is not None:
        est = mc.estimate_p_simple(ds, cfg.samples, cfg.seed, cfg.workers, cfg.confidence)
        doc["monte_carlo"] = est.to_dict()
    if cfg.dump:
        mg = project(ds, sample_configuration(ds, np.random.default_rng(cfg.seed)))
        doc["multigraph_dump"] = dump_multigraph(mg).splitlines()
    return doc


def _estimate_row(ds, cfg):
    samples = cfg.samples or DEFAULT_SAMPLES
    return mc.estimate_p_simple(ds, samples, cfg.seed, cfg.workers, cfg.confidence)


def cmd_convergence_table(cfg: RunConfig) -> tuple[dict, bool]:
    """Rows (n, estimate, interval, Poisson value, t2a value, gap) for regular(n, d)."""
    if cfg.degree is None or not cfg.sizes:
        raise InputError("convergence needs --d and a non-empty --sizes list")
    rows, failed = [], False
    for n in cfg.sizes:
        row = dict.fromkeys(CONVERGENCE_COLUMNS)
        row["n"] = n
        try:
            ds = degseq.regular(n, cfg.degree)
            est = _estimate_row(ds, cfg)
            poisson = asympt.p_simple_poisson(ds)
            row.update(p_hat=est.p_hat, ci_low=est.ci_low, ci_high=est.ci_high,
                       poisson_value=poisson, t2a_value=asympt.p_simple_t2a(ds),
                       gap=est.p_hat - poisson)
        except InputError as exc:
            row["error"] = str(exc)
            failed = True
        rows.append(row)
    return {"meta": cfg.meta(), "columns": CONVERGENCE_COLUMNS, "rows": rows}, failed


def cmd_dichotomy_demo(cfg: RunConfig) -> tuple[dict, bool]:
    """Rows for a hub of growing degree padded with degree-1 vertices."""
    if not cfg.hubs:
        raise InputError("dichotomy needs a non-empty --hubs list")
    rows, failed = [], False
    for k in cfg.hubs:
        row = dict.fromkeys(DICHOTOMY_COLUMNS)
        row["hub_degree"] = k
        try:
            ds = degseq.hub(k, cfg.edges)
            est = _estimate_row(ds, cfg)
            row.update(n=ds.n, N=ds.edges, ratio=asympt.dichotomy_diagnostic(ds)[0],
                       p_hat=est.p_hat, ci_low=est.ci_low, ci_high=est.ci_high,
                       t2a_value=asympt.p_simple_t2a(ds), upper_bound_j1=asympt.bounds(ds)[0])
        except InputError as exc:
            row["error"] = str(exc)
            failed = True
        rows.append(row)
    return {"meta": cfg.meta(), "columns": DICHOTOMY_COLUMNS, "rows": rows}, failed


def _flatten(doc, prefix=""):
    for key, value in doc.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            if set(value) == {"num", "den"}:
                yield name, f"{value['num']}/{value['den']}"
            else:
                yield from _flatten(value, name + ".")
        elif isinstance(value, list):
            yield name, " ".join(map(str, value)) if name == "degrees" else "; ".join(map(str, value))
        else:
            yield name, value


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    if "rows" in doc:
        if fmt == "csv":
            writer = csv.DictWriter(buf, fieldnames=doc["columns"], lineterminator="\n")
            writer.writeheader()
            writer.writerows({k: "" if v is None else v for k, v in r.items()} for r in doc["rows"])
        else:
            cols = doc["columns"]
            cells = [[_fmt_cell(r[c]) for c in cols] for r in doc["rows"]]
            widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
            buf.write("  ".join(c.rjust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
            for row in cells:
                buf.write("  ".join(x.rjust(w) for x, w in zip(row, widths)).rstrip() + "\n")
        return buf.getvalue()
    # the asymptotic block repeats the stats already shown at top level
    pairs = [(k, v) for k, v in _flatten(doc)
             if not k.startswith(("meta.", "asymptotic.stats."))]
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["field", "value"])
        writer.writerows(pairs)
    else:
        width = max(len(k) for k, _ in pairs)
        for k, v in pairs:
            buf.write(f"{k.ljust(width)}  {_fmt_cell(v)}\n")
    return buf.getvalue()


def _fmt_cell(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmsimple",
        description="Probability that a configuration-model multigraph is simple.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=None,
                        help=f"Monte Carlo samples (tables default to {DEFAULT_SAMPLES})")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (default %(default)s)")
    common.add_argument("--workers", type=int, default=1, help="sampling threads (default %(default)s)")
    common.add_argument("--confidence", type=float, default=DEFAULT_CONFIDENCE,
                        help="Wilson interval confidence (default %(default)s)")
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default="json")
    common.add_argument("--out", help="write output here instead of stdout")

    rep = sub.add_parser("report", parents=[common], help="statistics, formulas, exact and MC values")
    src = rep.add_mutually_exclusive_group(required=True)
    src.add_argument("--degrees", dest="degrees_file", metavar="FILE")
    src.add_argument("--regular", nargs=2, type=int, metavar=("N", "D"))
    src.add_argument("--literal", metavar="D1,D2,...")
    rep.add_argument("--exact", action="store_true", help="require exact enumeration")
    rep.add_argument("--cap", type=int, default=exact.DEFAULT_CAP,
                     help="largest edge count N to enumerate (default %(default)s)")
    rep.add_argument("--dump", action="store_true", help="include one sampled multigraph")

    conv = sub.add_parser("convergence", parents=[common], help="MC versus formula for regular(n, d)")
    conv.add_argument("--d", dest="degree", type=int, required=True)
    conv.add_argument("--sizes", type=_int_list, required=True, help="e.g. 10,100,1000")

    dich = sub.add_parser("dichotomy", parents=[common], help="hub family with growing hub degree")
    dich.add_argument("--hubs", type=_int_list, required=True, help="hub degrees, e.g. 2,8,32")
    dich.add_argument("--edges", type=int, default=100, help="edge count N (default %(default)s)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    if fields.get("regular") is not None:
        fields["regular"] = tuple(fields["regular"])
    cfg = RunConfig(**fields)
    try:
        if cfg.command == "report":
            doc, failed = cmd_report(cfg), False
        elif cfg.command == "convergence":
            doc, failed = cmd_convergence_table(cfg)
        else:
            doc, failed = cmd_dichotomy_demo(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    text = render(doc, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_INPUT if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
