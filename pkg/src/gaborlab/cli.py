"""Command-line driver: ``gaborlab {build,frame-check,norm,diverge,accept}``.

Parameters come from flags, optionally seeded from a flat ``key = value``
config file (flags win).  Every run writes a ``manifest.txt`` in the same
format next to its outputs, so ``--config manifest.txt`` repeats the run.
Exit codes: 0 success, 1 failed acceptance, 2 validation error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

from . import acceptance, gabor, modnorm, serialize, srlab
from .errors import GaborLabError, NumericalFailure, ValidationError
from .tfcore import Grid, box, gaussian_piece

BUILD_KINDS = ("box", "triangle", "sr-block", "gp", "h", "counterexample", "parseval", "gaussian")
META_KEYS = {"command", "timestamp", "outputs"}

# name -> (type, default); None defaults mean "required by the kinds that use it"
PARAMS = {
    "atom": (str, None),
    "h": (str, None),
    "alpha": (float, 1.0),
    "beta": (float, 1.0),
    "p": (float, None),
    "q": (float, None),
    "L": (int, 1),
    "blocks": (int, None),
    "a": (float, 0.0),
    "b": (float, 1.0),
    "height": (float, 1.0),
    "n": (int, None),
    "K": (int, None),
    "epsilon": (float, None),
    "delta": (float, 0.0),
    "sigma": (float, 1.0),
    "method": (str, "box"),
    "dilation": (float, 1.0),
    "scale": (float, 1.0),
    "resolution": (int, gabor.PERIOD_RESOLUTION),
    "filter": (str, None),
    "kind": (str, None),
}


@dataclass
class RunConfig:
    command: str
    params: dict
    seed: int = 0
    out: Path = Path(".")
    outputs: list = field(default_factory=list)

    def need(self, name: str):
        value = self.params.get(name)
        if value is None:
            raise ValidationError(f"{self.command} needs --{name}")
        return value

    def write(self, name: str, text: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / name
        path.write_text(text)
        self.outputs.append(name)
        return path

    def write_manifest(self) -> Path:
        lines = [f"command = {self.command}"]
        lines += [f"{k} = {v}" for k, v in sorted(self.params.items()) if v is not None]
        lines.append(f"seed = {self.seed}")
        for pkg in ("artifact", "numpy", "scipy"):
            try:
                lines.append(f"version.{pkg} = {metadata.version(pkg)}")
            except metadata.PackageNotFoundError:
                lines.append(f"version.{pkg} = unknown")
        lines.append(f"version.python = {platform.python_version()}")
        lines.append(f"outputs = {','.join(self.outputs)}")
        lines.append(f"timestamp = {datetime.now(timezone.utc).isoformat(timespec='seconds')}")
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / "manifest.txt"
        path.write_text("\n".join(lines) + "\n")
        return path


def read_config(path) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in META_KEYS or key.startswith("version."):
            continue
        if key != "seed" and key not in PARAMS:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(name: str, value):
    kind = int if name == "seed" else PARAMS[name][0]
    try:
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"--{name}: cannot read {value!r} as {kind.__name__}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaborlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "build": "Construct an atom and save it as JSON",
        "frame-check": "Painless frame bounds of an atom",
        "norm": "Modulation-space norm estimate of an atom",
        "diverge": "Block-wise divergence profile of an atom",
        "accept": "Run the acceptance criteria",
    }
    for name, help_ in specs.items():
        sp = sub.add_parser(name, help=help_)
        if name == "build":
            sp.add_argument("kind", nargs="?", choices=BUILD_KINDS)
        for key in PARAMS:
            if key == "kind":
                continue
            sp.add_argument(f"--{key}", default=None)
        sp.add_argument("--seed", default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--config", default=None)
    return parser


def resolve(args: argparse.Namespace) -> RunConfig:
    raw = read_config(args.config) if args.config else {}
    params = {}
    for key, (_, default) in PARAMS.items():
        flag = getattr(args, key, None)
        value = flag if flag is not None else raw.get(key)
        params[key] = _coerce(key, value) if value is not None else default
    seed = args.seed if args.seed is not None else raw.get("seed", 0)
    return RunConfig(args.command, params, _coerce("seed", seed), Path(args.out or "."))


def _load(cfg: RunConfig, key: str = "atom"):
    path = cfg.need(key)
    try:
        return serialize.load_atom(path)
    except OSError as exc:
        raise ValidationError(f"cannot read atom file {path}: {exc}") from exc


def cmd_build(cfg: RunConfig) -> int:
    P = cfg.params
    kind = P["kind"]
    if kind not in BUILD_KINDS:
        raise ValidationError(f"build needs a kind from {', '.join(BUILD_KINDS)}")
    if kind == "box":
        atom = box(P["a"], P["b"], P["height"])
    elif kind == "triangle":
        atom = gabor.triangle()
    elif kind == "sr-block":
        atom = srlab.block_poly(cfg.need("n"))
    elif kind == "gp":
        atom = srlab.gp_atom(cfg.need("p"), cfg.need("blocks"))
    elif kind == "h":
        atom = srlab.h_atom(
            cfg.need("p"), cfg.need("q"), P["a"], P["b"], P["L"], cfg.need("epsilon"), cfg.need("blocks")
        )
    elif kind == "counterexample":
        atom = srlab.counterexample_atom(cfg.need("q"), cfg.need("K"), P["blocks"] or 10)
    elif kind == "gaussian":
        atom = gaussian_piece(P["sigma"])
    else:
        atom = srlab.parseval_atom(P["beta"], _load(cfg, "h"), P["delta"])
    path = cfg.write(f"{kind}.atom.json", serialize.dumps(atom))
    print(path)
    return 0


def cmd_frame_check(cfg: RunConfig) -> int:
    system = gabor.GaborSystem(_load(cfg), cfg.params["alpha"], cfg.params["beta"])
    report = gabor.painless_check(system, cfg.params["resolution"])
    grid = Grid(0.0, system.alpha / cfg.params["resolution"], cfg.params["resolution"])
    D = gabor.periodization(system, grid)
    rows = ["x,periodization"] + [f"{x!r},{d.real!r}" for x, d in zip(D.points(), D.samples)]
    cfg.write("periodization.csv", "\n".join(rows) + "\n")
    print(f"A={report.A:.12g} B={report.B:.12g} frame={str(report.is_frame).lower()}")
    return 0


def cmd_norm(cfg: RunConfig) -> int:
    P = cfg.params
    atom = _load(cfg)
    p = cfg.need("p")
    if P["method"] == "box":
        value = modnorm.box_equiv_norm(atom, p, P["alpha"], P["beta"])
        q, window = p, f"box(alpha={P['alpha']},beta={P['beta']})"
    elif P["method"] == "stft":
        q = P["q"] if P["q"] is not None else p
        value = modnorm.mpq_norm_stft(atom, p, q, modnorm.GaussianWindow(P["sigma"]))
        window = f"gaussian(sigma={P['sigma']})"
    else:
        raise ValidationError(f"unknown method {P['method']!r}; use box or stft")
    atom_id = Path(P["atom"]).name
    cfg.write("norm.csv", modnorm.norm_report_csv([(atom_id, P["method"], p, q, window, value)]))
    print(f"{value:.12g}")
    return 0


def cmd_diverge(cfg: RunConfig) -> int:
    P = cfg.params
    prof = srlab.divergence_profile(
        _load(cfg), cfg.need("p"), P["L"], cfg.need("blocks"), q=P["q"], dilation=P["dilation"], scale=P["scale"]
    )
    cfg.write("divergence.csv", prof.to_csv())
    print(f"partial_sum={prof.partial_sum[-1]:.12g} slope={prof.slope():.12g}")
    return 0


def cmd_accept(cfg: RunConfig) -> int:
    results = acceptance.run(cfg.params["filter"])
    for r in results:
        print(r.line(), file=sys.stderr)
    summary = {
        "passed": all(r.passed for r in results),
        "count": len(results),
        "failed": [r.number for r in results if not r.passed],
        "criteria": [
            {"number": r.number, "name": r.name, "modules": list(r.modules), "passed": r.passed, "detail": r.detail}
            for r in results
        ],
    }
    text = json.dumps(summary, indent=2)
    cfg.write("acceptance.json", text + "\n")
    print(text)
    return 0 if summary["passed"] else 1


COMMANDS = {
    "build": cmd_build,
    "frame-check": cmd_frame_check,
    "norm": cmd_norm,
    "diverge": cmd_diverge,
    "accept": cmd_accept,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        if args.command == "build" and args.kind is not None:
            cfg.params["kind"] = args.kind
        code = COMMANDS[args.command](cfg)
        cfg.write_manifest()
        return code
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return exc.exit_code
    except GaborLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
