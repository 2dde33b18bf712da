"""Command line front end: ``grcohom <command> problem.json``.

Exit codes: 0 success, 2 malformed problem, 3 engine error, 4 unsaturated
semigroup where saturation is required, 5 Cech localizations did not
stabilize, 6 plot requested in dimension other than 2.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .errors import EngineError, PlotDimension, SchemaError
from .injective import bass_numbers, injective_resolution
from .irreducible import irreducible_resolution
from .modules import DegreeBox
from .oracle import cech_oracle
from .plot import partition_svg
from .sectors import local_cohomology, sector_partition_injective
from . import serialize as ser

COMMANDS = ("resolve", "localcoh", "sectors", "oracle", "bass", "plot")


def _params(problem, args):
    params = dict(problem.get("params", {}))
    for key in ("box", "field", "stages", "index"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    if args.range is not None:
        try:
            lo, hi = (int(x) for x in args.range.split(".."))
        except ValueError as exc:
            raise SchemaError("--range expects i..j") from exc
        params["range"] = [lo, hi]
    return params


def _indices(params):
    if "range" in params:
        lo, hi = params["range"]
        return list(range(int(lo), int(hi) + 1))
    if "index" in params:
        return [int(params["index"])]
    raise SchemaError("give a cohomological index or range")


def _require(problem, key):
    if key not in problem:
        raise SchemaError(f"problem has no {key!r} section")
    return problem[key]


def _box(params):
    B = params.get("box", 12)
    if not isinstance(B, int) or B <= 0:
        raise SchemaError("box must be a positive integer")
    return DegreeBox(-B, B)


def run(command, problem, params):
    """(payload, semigroup) for one command."""
    Q = ser.parse_semigroup(_require(problem, "semigroup"))
    field = ser.parse_field(params.get("field"))
    box = _box(params)
    if command == "resolve":
        M = ser.parse_module(Q, _require(problem, "module"), field)
        n = int(params.get("stages", 2))
        irr = irreducible_resolution(M, n, box)
        inj = injective_resolution(M, n, box)
        return {
            "irreducible": ser.irreducible_resolution_out(Q, irr, field),
            "injective": ser.injective_resolution_out(Q, inj, field),
        }, Q
    if command == "bass":
        M = ser.parse_module(Q, _require(problem, "module"), field)
        return {"bass": ser.bass_out(Q, bass_numbers(M, int(params.get("stages", 2)), box))}, Q
    if command == "localcoh":
        M = ser.parse_module(Q, _require(problem, "module"), field)
        I = ser.parse_ideal(Q, _require(problem, "ideal"))
        out = []
        for i in _indices(params):
            SP = local_cohomology(M, I, i, box, transitions=bool(params.get("transitions", False)))
            out.append({"index": i, "partition": ser.partition_out(SP, field), "hilbert": ser.hilbert_out(SP)})
        return {"cohomology": out}, Q
    if command == "sectors":
        J = ser.parse_summands(Q, _require(problem, "summands"))
        SP = sector_partition_injective(Q, J, field)
        payload = ser.partition_out(SP, field)
        payload["comparable"] = sorted([s, t] for (s, t) in SP.transitions)
        return payload, Q
    if command == "oracle":
        M = ser.parse_module(Q, _require(problem, "module"), field)
        I = ser.parse_ideal(Q, _require(problem, "ideal"))
        B = int(params.get("oracle_box", 5))
        out = [{"index": i, **ser.oracle_out(Q, cech_oracle(M, I, i, box=DegreeBox(-B, B)))} for i in _indices(params)]
        return {"oracle": out}, Q
    if command == "plot":
        if Q.dim != 2 or Q.rank != 2:
            raise PlotDimension("plots need a two-dimensional semigroup")
        if "summands" in problem:
            SP = sector_partition_injective(Q, ser.parse_summands(Q, problem["summands"]), field, transitions=False)
        else:
            M = ser.parse_module(Q, _require(problem, "module"), field)
            I = ser.parse_ideal(Q, _require(problem, "ideal"))
            SP = local_cohomology(M, I, _indices(params)[0], box)
        return {"svg": partition_svg(SP, int(params.get("plot_box", 5)))}, Q
    raise SchemaError(f"unknown command {command!r}")


def _text(command, payload):
    lines = [f"command: {command}"]
    if command == "resolve":
        for name in ("irreducible", "injective"):
            part = payload[name]
            shift = f" shift {part['shift']}" if "shift" in part else ""
            lines.append(f"{name}:{shift}")
            for j, st in enumerate(part["stages"]):
                lines.append(f"  stage {j}: " + " + ".join(f"({s['face']},{s['degree']})" for s in st))
    elif command == "localcoh":
        for entry in payload["cohomology"]:
            nz = [h for h in entry["hilbert"] if h["dim"]]
            lines.append(f"H^{entry['index']}: {len(entry['hilbert'])} sectors, {len(nz)} nonzero")
            for h in nz:
                lines.append(f"  sector {h['sector']}: dim {h['dim']}, {len(h['regions'])} regions")
    elif command == "sectors":
        for k, s in enumerate(payload["sectors"]):
            lines.append(f"sector {k}: index {s['index']} dim {s['dim']} regions {len(s['regions'])}")
        lines.append(f"comparable pairs: {payload['comparable']}")
    elif command == "oracle":
        for entry in payload["oracle"]:
            nz = {k: v for k, v in entry["dims"].items() if v}
            lines.append(f"H^{entry['index']}: nonzero at {len(nz)} degrees")
            lines.extend(f"  {k}: {v}" for k, v in nz.items())
    elif command == "bass":
        lines.extend(f"mu^{e['j']} at {e['degree']}: {e['multiplicity']}" for e in payload["bass"])
    return "\n".join(lines) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="grcohom", description="Effective local cohomology over affine semigroup rings.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("problem", help="problem file (JSON); - reads standard input")
    p.add_argument("--box", type=int, help="degree box half-width in tau coordinates (default 12)")
    p.add_argument("--field", help="q for the rationals or p:<prime>")
    p.add_argument("--stages", type=int, help="number of resolution stages")
    p.add_argument("--index", type=int, help="cohomological index")
    p.add_argument("--range", help="cohomological index range i..j")
    p.add_argument("--out", help="write the result here instead of standard output")
    p.add_argument("--format", choices=("json", "text", "svg"), default=None)
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in the envelope")
    p.add_argument("--version", action="version", version=f"grcohom {__version__}")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            text = sys.stdin.read() if args.problem == "-" else open(args.problem, encoding="utf-8").read()
            problem = json.loads(text)
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"cannot read problem: {exc}") from exc
        if not isinstance(problem, dict):
            raise SchemaError("problem must be a JSON object")
        if problem.get("schema", ser.SCHEMA_VERSION) != ser.SCHEMA_VERSION:
            raise SchemaError(f"unsupported schema version {problem.get('schema')!r}")
        params = _params(problem, args)
        start = time.perf_counter()
        payload, Q = run(args.command, problem, params)
        elapsed = time.perf_counter() - start
    except SchemaError as exc:
        print(f"SchemaError: {exc}", file=sys.stderr)
        return exc.exit_code
    except EngineError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code

    fmt = args.format or ("svg" if args.command == "plot" else "json")
    if fmt == "svg":
        if "svg" not in payload:
            print("SchemaError: svg output is only available for the plot command", file=sys.stderr)
            return 2
        out = payload["svg"]
    elif fmt == "text":
        out = _text(args.command, payload)
    else:
        echo = dict(problem)
        echo["params"] = params
        envelope = {
            "command": args.command,
            "engine_version": __version__,
            "problem": echo,
            "relattice": Q.relattice_matrix(),
            "payload": payload,
        }
        if args.timing:
            envelope["timing"] = {"seconds": round(elapsed, 6)}
        out = json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
