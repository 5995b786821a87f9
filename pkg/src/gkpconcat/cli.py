"""Command-line runner: ``gkpconcat {run,analytic,squeeze,qudit,report}``.

Every subcommand writes CSV (or a text report) to ``--out`` or stdout.  A
flat ``key=value`` file passed with ``--config`` supplies defaults; flags on
the command line take precedence.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import io
import itertools
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .codes import build_from_id, parse_code_id, report
from .montecarlo import analytic_estimate, estimate, squeeze_study
from .decoder import prepare
from .quditgkp import QuditParams, qudit_round_batch, variance_study

RUN_COLUMNS = ("code", "scheme", "sigma", "samples", "p_emp", "stderr", "seed", "method")
SQUEEZE_COLUMNS = ("code", "scheme", "sigma", "alpha", "samples", "p_emp", "stderr", "ratio", "seed")
QUDIT_SWEEP_COLUMNS = (
    "a1", "c1", "a2", "c2", "syndrome_x", "syndrome_z", "residual_x", "residual_x_half",
    "residual_z", "z_excess", "recovered",
)
MAX_SWEEP_D = 32


class ConfigError(ValueError):
    """Bad flag or config-file value."""


def fmt(v) -> str:
    """CSV rendering: 6 significant digits for floats, plain text otherwise."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6g}"
    return str(v)


def parse_sigma(text: str) -> list[float]:
    """``start:stop:step`` (stop included) or a comma list of values."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"sigma range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if not step > 0:
            raise ConfigError("sigma step must be positive")
        if stop < start:
            raise ConfigError("sigma range stop is below start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [round(start + i * step, 12) for i in range(count)]
    else:
        values = [float(v) for v in text.split(",") if v.strip()]
    if not values or any(not v > 0 for v in values):
        raise ConfigError(f"sigma values must be positive, got {text!r}")
    return values


def parse_list(text: str) -> list[str]:
    return [t.strip() for t in str(text).split(",") if t.strip()]


def parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def parse_alpha(text) -> float | None:
    if text is None or str(text).strip().lower() in ("", "none", "default"):
        return None
    return float(text)


def read_config(path: str) -> dict[str, str]:
    """Parse a flat ``key=value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


@dataclass
class RunConfig:
    """Resolved settings for ``run`` / ``analytic`` / ``squeeze``."""

    codes: list[str] = field(default_factory=lambda: ["rep3"])
    schemes: list[str] = field(default_factory=lambda: ["III"])
    sigmas: list[float] = field(default_factory=lambda: [0.2])
    samples: int = 1_000_000
    seed: int = 0
    alpha_aux: float | None = None
    alpha_logical: float = 2.0
    method: str = "montecarlo"
    reduce_generators: bool = False
    out: str = "-"
    workers: int | None = None
    rel_stderr: float | None = None
    alphas: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0, 4.0])

    def validate(self) -> None:
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        if self.method not in ("montecarlo", "analytic"):
            raise ConfigError(f"method must be montecarlo or analytic, got {self.method!r}")
        for cid in self.codes:
            parse_code_id(cid)
        for s in self.schemes:
            if s not in ("I", "II", "III"):
                raise ConfigError(f"unknown scheme {s!r}")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be positive")


_CONVERTERS = {
    "code": ("codes", parse_list),
    "scheme": ("schemes", lambda t: [s.upper() for s in parse_list(t)]),
    "sigma": ("sigmas", parse_sigma),
    "samples": ("samples", lambda t: int(float(t))),
    "seed": ("seed", int),
    "alpha_aux": ("alpha_aux", parse_alpha),
    "alpha_logical": ("alpha_logical", float),
    "method": ("method", lambda t: str(t).strip().lower()),
    "reduce_generators": ("reduce_generators", parse_bool),
    "out": ("out", str),
    "workers": ("workers", int),
    "rel_stderr": ("rel_stderr", float),
    "alpha": ("alphas", lambda t: [float(a) for a in parse_list(t)]),
}


def resolve_config(args: argparse.Namespace) -> tuple[RunConfig, dict[str, str]]:
    """Merge config-file keys and flags (flags win).  Returns the config and the raw settings used."""
    raw: dict[str, str] = {}
    if getattr(args, "config", None):
        raw.update(read_config(args.config))
    for key in _CONVERTERS:
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    unknown = sorted(set(raw) - set(_CONVERTERS))
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    cfg = RunConfig()
    for key, value in raw.items():
        attr, conv = _CONVERTERS[key]
        try:
            setattr(cfg, attr, conv(value))
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None
    cfg.validate()
    return cfg, {k: str(v) for k, v in sorted(raw.items())}


def metadata_line(command: str, seed, settings: dict[str, str]) -> str:
    stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    body = " ".join(f"{k}={v.replace(' ', '')}" for k, v in settings.items())
    return f"# gkpconcat {__version__} command={command} seed={seed} timestamp={stamp} {body}".rstrip()


def write_output(path: str, text: str) -> None:
    if path in ("-", ""):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from None


def _csv(header, rows, meta: str | None) -> str:
    buf = io.StringIO()
    if meta:
        buf.write(meta + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _estimate_row(e) -> tuple:
    return (e.code, e.scheme, e.sigma, e.samples, e.p_emp, e.stderr, e.seed, e.method)


def cmd_run(args: argparse.Namespace, method: str | None = None) -> int:
    cfg, settings = resolve_config(args)
    if method is not None:
        cfg.method = method
        settings["method"] = method
    rows, failures = [], []
    cells = itertools.product(cfg.codes, cfg.schemes, cfg.sigmas)
    plans = {}
    for i, (cid, scheme, sigma) in enumerate(cells):
        try:
            if cfg.method == "analytic":
                est = analytic_estimate(cid, scheme, sigma)
            else:
                if (cid, scheme) not in plans:
                    code = build_from_id(
                        cid, scheme, aux_alpha=cfg.alpha_aux, logical_alpha=cfg.alpha_logical,
                        reduce_generators=cfg.reduce_generators,
                    )
                    plans[(cid, scheme)] = (code, prepare(code))
                code, plan = plans[(cid, scheme)]
                est = estimate(code, sigma, cfg.samples, cfg.seed, cfg.workers, cfg.rel_stderr, cell=i, plan=plan)
            rows.append(_estimate_row(est))
        except Exception as exc:  # noqa: BLE001 - reported per cell
            failures.append(f"{cid} scheme {scheme} sigma {sigma:g}: {exc}")
    write_output(cfg.out, _csv(RUN_COLUMNS, rows, metadata_line(args.command, cfg.seed, settings)))
    for msg in failures:
        print(f"error: {msg}", file=sys.stderr)
    return 1 if failures else 0


def cmd_squeeze(args: argparse.Namespace) -> int:
    cfg, settings = resolve_config(args)
    rows, failures = [], []
    for cid, scheme, sigma in itertools.product(cfg.codes, cfg.schemes, cfg.sigmas):
        try:
            for alpha, est, ratio in squeeze_study(cid, scheme, cfg.alphas, sigma, cfg.samples, cfg.seed, cfg.workers):
                rows.append((cid, scheme, sigma, alpha, est.samples, est.p_emp, est.stderr, ratio, cfg.seed))
        except Exception as exc:  # noqa: BLE001 - reported per cell
            failures.append(f"{cid} scheme {scheme} sigma {sigma:g}: {exc}")
    write_output(cfg.out, _csv(SQUEEZE_COLUMNS, rows, metadata_line("squeeze", cfg.seed, settings)))
    for msg in failures:
        print(f"error: {msg}", file=sys.stderr)
    return 1 if failures else 0


def cmd_qudit(args: argparse.Namespace) -> int:
    params = QuditParams(args.d, args.r)
    settings = {"d": str(args.d), "r": str(args.r)}
    if args.sample is None:
        if args.d > MAX_SWEEP_D:
            raise ConfigError(f"exhaustive sweep is limited to d <= {MAX_SWEEP_D}; use --sample")
        grid = np.array(list(itertools.product(range(args.d), repeat=4)), dtype=np.int64)
        a1, c1, a2, c2 = grid.T
        out = qudit_round_batch(params, a1, c1, a2, c2)
        rows = zip(a1, c1, a2, c2, *(out[k] for k in QUDIT_SWEEP_COLUMNS[4:]))
        text = _csv(QUDIT_SWEEP_COLUMNS, rows, metadata_line("qudit", "", settings))
        rec = out["recovered"]
        print(
            f"{rec.sum()} of {rec.size} errors in window; "
            f"nonzero Z excess among them: {np.count_nonzero(out['z_excess'][rec])}",
            file=sys.stderr,
        )
    else:
        settings.update(sample=str(args.sample), sd=str(args.sd), seed=str(args.seed))
        stats = variance_study(params, args.sd, args.sample, np.random.default_rng(args.seed))
        text = _csv(tuple(stats), [tuple(stats.values())], metadata_line("qudit", args.seed, settings))
    write_output(args.out, text)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    code = build_from_id(
        args.code, args.scheme.upper(), aux_alpha=parse_alpha(args.alpha_aux),
        logical_alpha=2.0 if args.alpha_logical is None else float(args.alpha_logical),
    )
    write_output(args.out, report(code))
    return 0


def _add_run_flags(p: argparse.ArgumentParser, squeeze: bool = False) -> None:
    p.add_argument("--config", help="flat key=value file; flags override its keys")
    p.add_argument("--code", help="comma list of code ids (rep3, rep5, rep7, 513, steane, shor, unbiased-gkp-rep:n)")
    p.add_argument("--scheme", help="comma list of schemes I, II, III")
    p.add_argument("--sigma", help="start:stop:step (inclusive) or comma list")
    p.add_argument("--samples", help="Monte Carlo samples per cell")
    p.add_argument("--seed", help="root seed")
    p.add_argument("--alpha-aux", dest="alpha_aux", help="auxiliary lattice alpha")
    p.add_argument("--alpha-logical", dest="alpha_logical", help="logical lattice alpha")
    p.add_argument("--method", help="montecarlo or analytic")
    p.add_argument(
        "--reduce-generators", dest="reduce_generators", action="store_const", const="true",
        help="shorten scheme III generator rows before decoding",
    )
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.add_argument("--workers", help="thread count (default: GKPCONCAT_WORKERS or CPU count)")
    p.add_argument("--rel-stderr", dest="rel_stderr", help="stop once stderr / p_emp reaches this value")
    if squeeze:
        p.add_argument("--alpha", help="comma list of squeeze parameters")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gkpconcat", description="Concatenated GKP code simulations")
    parser.add_argument("--version", action="version", version=f"gkpconcat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_flags(sub.add_parser("run", help="Monte Carlo (or analytic) logical error rates"))
    _add_run_flags(sub.add_parser("analytic", help="analytic 3-repetition rates"))
    _add_run_flags(sub.add_parser("squeeze", help="rate ratios on squeezed lattices"), squeeze=True)
    q = sub.add_parser("qudit", help="qudit GKP-repetition demo")
    q.add_argument("--d", type=int, required=True, help="qudit dimension")
    q.add_argument("--r", type=int, required=True, help="ancilla spacing")
    mode = q.add_mutually_exclusive_group()
    mode.add_argument("--sweep", action="store_true", help="exhaustive table over all exponents (default)")
    mode.add_argument("--sample", type=int, help="draw this many random errors")
    q.add_argument("--sd", type=float, default=5.0, help="exponent spread for --sample")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out", default="-")
    r = sub.add_parser("report", help="text dump of a code instance")
    r.add_argument("--code", required=True)
    r.add_argument("--scheme", default="III")
    r.add_argument("--alpha-aux", dest="alpha_aux")
    r.add_argument("--alpha-logical", dest="alpha_logical")
    r.add_argument("--out", default="-")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "analytic":
            return cmd_run(args, method="analytic")
        if args.command == "squeeze":
            return cmd_squeeze(args)
        if args.command == "qudit":
            return cmd_qudit(args)
        return cmd_report(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
