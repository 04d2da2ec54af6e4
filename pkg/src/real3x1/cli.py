"""Command line front door: iterate, cycles, conjecture, trace, rmap-scan.

Output is JSONL (one record per line, keys sorted) with a summary object as
the final line of record streams, or CSV where a flat table is the natural
shape.  Identical invocations produce byte-identical output, including across
worker counts: the cycle sweep is partitioned into rank ranges that are merged
back in enumeration order.

Exit codes: 0 resolved/completed, 1 usage or domain error, 2 a trajectory hit
an iteration or size cap, 3 counterexample found (a realized cycle that the
two cycle theorems rule out), 4 file I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .cycles import BitSeq, CycleRecord, evaluate, sweep_range
from .errors import DomainError, PreconditionError
from .maps import MAPS, MapSpec, map_from_name, step
from .rationals import floor_of, format_rational, parse_rational
from .remainders import VerdictKind, rmap_orbit_scan, segment_inequality, trace
from .sampling import sample_integers, sample_rationals
from .trajectory import FateKind, detect_period01, iterate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAP = 2
EXIT_COUNTEREXAMPLE = 3
EXIT_IO = 4

_DEFAULT_ESCAPE = str(1 << 64)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures remapped from exit 2 to exit 1.

    Exit 2 is reserved for capped trajectories, so the stock argparse exit
    code would collide with it.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------- config


def _extract_config_path(argv: list[str]) -> tuple[list[str], str | None]:
    out, path, i = [], None, 0
    while i < len(argv):
        a = argv[i]
        if a == "--config":
            if i + 1 >= len(argv):
                raise ValueError("--config needs a path")
            path = argv[i + 1]
            i += 2
        elif a.startswith("--config="):
            path = a.split("=", 1)[1]
            i += 1
        else:
            out.append(a)
            i += 1
    return out, path


def _config_flags(path: str) -> list[str]:
    """key = value lines become long flags; later CLI flags override them."""
    flags = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep or not key.strip():
                raise ValueError(f"config line is not key = value: {raw.strip()!r}")
            key = key.strip().replace("_", "-")
            val = val.strip()
            if val.lower() in ("true", "yes", "on"):
                flags.append(f"--{key}")
            elif val.lower() in ("false", "no", "off"):
                pass
            else:
                flags.extend([f"--{key}", val])
    return flags


# ---------------------------------------------------------------- iterate


def _parse_interval(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"interval wants lo,hi: {text!r}")
    lo, hi = (parse_rational(p) for p in parts)
    if not lo < hi:
        raise ValueError(f"empty interval: {text!r}")
    return lo, hi


def cmd_iterate(args, out) -> int:
    m = map_from_name(args.map)
    starts = [parse_rational(tok) for tok in args.start.split(",") if tok.strip()]
    if not starts:
        raise ValueError("no start values given")
    escape = None if args.escape is None else parse_rational(args.escape)
    region = None if args.trap_region is None else _parse_interval(args.trap_region)
    reports = [
        iterate(
            m,
            x,
            cap=args.cap,
            escape_bound=escape,
            trap_region=region,
            den_bit_cap=args.den_bit_cap,
            keep=args.keep,
        )
        for x in starts
    ]
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["start", "fate", "steps"])
        for rep in reports:
            w.writerow([format_rational(rep.start), rep.fate.label(), rep.steps_used])
    else:
        for rep in reports:
            out.write(_dumps(rep.to_json_dict()) + "\n")
    capped = any(rep.fate.kind is FateKind.CAP_REACHED for rep in reports)
    return EXIT_CAP if capped else EXIT_OK


# ----------------------------------------------------------------- cycles

_CHUNK_RANKS = 1 << 14


def _record_json_dict(rec: CycleRecord, with_verdict: bool) -> dict:
    obj = {
        "l": rec.s.l,
        "rank": rec.s.rank,
        "bits": str(rec.s),
        "d": str(rec.d),
        "phi": str(rec.phi),
        "x0": format_rational(rec.x0),
        "class": rec.cls.value,
        "realized_U": rec.realized_U,
        "realized_Uflip": rec.realized_Uflip,
        "misalign_U": rec.misalign_U,
        "misalign_Uflip": rec.misalign_Uflip,
    }
    if with_verdict:
        obj["verdict"] = trace(rec).verdict.label() if rec.d > 0 else None
    return obj


def _sweep_chunk(task) -> tuple[str, dict]:
    l, lo, hi, emit_lines, with_verdict = task
    lines = []
    agg = {
        "records": 0,
        "class_counts": {},
        "realized_U": [],
        "realized_U_non_integer": [],
        "realized_Uflip": [],
    }
    for rec in sweep_range(l, lo, hi):
        agg["records"] += 1
        cls = rec.cls.value
        agg["class_counts"][cls] = agg["class_counts"].get(cls, 0) + 1
        bits = str(rec.s)
        if rec.realized_U:
            agg["realized_U"].append(bits)
            if rec.x0.denominator != 1:
                agg["realized_U_non_integer"].append(bits)
        if rec.realized_Uflip:
            agg["realized_Uflip"].append(bits)
        if emit_lines:
            lines.append(_dumps(_record_json_dict(rec, with_verdict)))
    text = "\n".join(lines) + "\n" if lines else ""
    return text, agg


def cmd_cycles(args, out) -> int:
    if args.lmax < 1:
        raise ValueError(f"--lmax must be >= 1, got {args.lmax}")
    if not 1 <= args.lmin <= args.lmax:
        raise ValueError(f"--lmin must be in 1..lmax, got {args.lmin}")
    if args.workers < 1:
        raise ValueError(f"--workers must be >= 1, got {args.workers}")

    tasks = []
    for l in range(args.lmin, args.lmax + 1):
        total = 1 << l
        for lo in range(0, total, _CHUNK_RANKS):
            tasks.append(
                (l, lo, min(lo + _CHUNK_RANKS, total), not args.summary_only, args.with_verdict)
            )

    totals = {
        "records": 0,
        "class_counts": {},
        "realized_U": [],
        "realized_U_non_integer": [],
        "realized_Uflip": [],
    }

    def merge(result):
        text, agg = result
        if text:
            out.write(text)
        totals["records"] += agg["records"]
        for cls, k in agg["class_counts"].items():
            totals["class_counts"][cls] = totals["class_counts"].get(cls, 0) + k
        for key in ("realized_U", "realized_U_non_integer", "realized_Uflip"):
            totals[key].extend(agg[key])

    if args.workers == 1:
        for task in tasks:
            merge(_sweep_chunk(task))
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            for result in pool.map(_sweep_chunk, tasks):
                merge(result)

    counterexample = bool(totals["realized_U_non_integer"]) or bool(totals["realized_Uflip"])
    summary = {
        "type": "summary",
        "command": "cycles",
        "lmin": args.lmin,
        "lmax": args.lmax,
        "records": totals["records"],
        "class_counts": totals["class_counts"],
        "realized_U": totals["realized_U"],
        "realized_U_non_integer": totals["realized_U_non_integer"],
        "realized_Uflip": totals["realized_Uflip"],
        "counterexample": counterexample,
    }
    out.write(_dumps(summary) + "\n")
    return EXIT_COUNTEREXAMPLE if counterexample else EXIT_OK


# ------------------------------------------------------------- conjecture

# name -> (map, sample kind, minimum, trap region)
_CONJECTURES: dict[str, tuple[str, str, int, tuple[int, int] | None]] = {
    "RU": ("U", "rational", 1, None),
    "RUprime": ("U", "rational", 1, None),
    "NU": ("U", "integer", 1, None),
    "NUprime": ("U", "integer", 1, None),
    "BU": ("U", "rational", 1, None),
    "RUflip": ("Uflip", "rational", 0, (0, 2)),
    "BUflip": ("Uflip", "rational", 0, None),
    "RV": ("V", "rational", 1, (1, 3)),
    "BV": ("V", "rational", 1, None),
}

_STATEMENTS = {
    "RU": "every U-orbit from x >= 1 tends to the cycle {1, 2}",
    "RUprime": "every U-parity sequence is eventually periodic with period (0, 1)",
    "NU": "every integer U-orbit from n >= 1 reaches the cycle {1, 2}",
    "NUprime": "every integer U-parity sequence is eventually periodic with period (0, 1)",
    "BU": "every U-orbit from x >= 1 is bounded",
    "RUflip": "every flipped orbit from x >= 0 visits [0, 2)",
    "BUflip": "every flipped orbit from x >= 0 is bounded",
    "RV": "every V-orbit from x >= 1 visits [1, 3)",
    "BV": "every V-orbit from x >= 1 is bounded",
    "Q2": "2m + 3/2 gives the only F-orbits that fail to tend to the cycle {1, 4, 2}",
}

_NOT_A_PROOF = (
    "evidence only, not a proof: the conjecture remains open and this run "
    "only reports what happened on the sampled starts"
)

# integer cycles that the cycle theorems permit, per map
_TRIVIAL_CYCLE = {"U": (1, 2), "T": (1, 2), "F": (1, 2, 4), "f": (1, 2, 4)}


def _cycle_values(m: MapSpec, value: Fraction, period: int) -> set[Fraction]:
    vals = {value}
    x = value
    for _ in range(period - 1):
        x, _b = step(m, x)
        vals.add(x)
    return vals


def _classify(name: str, m: MapSpec, rep) -> tuple[str, str | None]:
    """One of supports / counterexample / flagged / unresolved, plus a note."""
    fate = rep.fate
    kind = fate.kind
    wants_01 = name in ("RUprime", "NUprime")
    if kind is FateKind.ENTERED_CYCLE:
        trivial = _TRIVIAL_CYCLE.get(m.name)
        values = _cycle_values(m, fate.value, fate.period)
        if trivial is not None and values == {Fraction(a) for a in trivial}:
            if wants_01 and detect_period01(rep.parity_bits) is None:
                return "flagged", "trivial cycle entered but no (0,1) parity tail seen"
            return "supports", None
        shown = ", ".join(format_rational(v) for v in sorted(values))
        return "counterexample", f"entered a cycle outside the trivial one: {shown}"
    if kind in (FateKind.TENDS_TO_TRIVIAL, FateKind.TENDS_FROM_ABOVE, FateKind.TENDS_FROM_BELOW):
        if wants_01 and detect_period01(rep.parity_bits) is None:
            return "flagged", "tendency certified but no (0,1) parity tail seen"
        return "supports", None
    if kind is FateKind.ENTERED_REGION:
        return "supports", None
    if kind is FateKind.ESCAPED_BOUND:
        return "flagged", "escaped the bound, inconclusive for an open conjecture"
    return "unresolved", None


def _conjecture_summary(args, name, map_name, tally, verdicts, extra=None) -> dict:
    supporting, flagged, unresolved, counterexamples = verdicts
    if counterexamples:
        verdict = f"COUNTEREXAMPLE FOUND among {args.samples} samples"
    else:
        verdict = (
            f"no counterexample among {args.samples} samples "
            f"(cap {args.cap} steps, escape bound {args.escape})"
        )
    obj = {
        "type": "summary",
        "command": "conjecture",
        "name": name,
        "statement": _STATEMENTS[name],
        "map": map_name,
        "samples": args.samples,
        "seed": args.seed,
        "den_bits": args.den_bits,
        "value_bits": args.value_bits,
        "cap": args.cap,
        "escape": args.escape,
        "tally": tally,
        "supporting": supporting,
        "flagged": flagged,
        "unresolved": unresolved,
        "counterexamples": counterexamples,
        "verdict": verdict,
        "note": _NOT_A_PROOF,
    }
    if extra:
        obj.update(extra)
    return obj


def _run_samples(args, name: str, out) -> int:
    map_name, kind, minimum, region = _CONJECTURES[name]
    m = MAPS[map_name]
    rng = random.Random(args.seed)
    if kind == "integer":
        starts = [Fraction(n) for n in sample_integers(rng, args.samples, args.value_bits, minimum=max(minimum, 1))]
    else:
        starts = sample_rationals(
            rng, args.samples, args.den_bits, args.value_bits, Fraction(minimum)
        )
    escape = parse_rational(args.escape)
    trap = None if region is None else (Fraction(region[0]), Fraction(region[1]))

    tally: dict[str, int] = {}
    supporting = flagged = unresolved = 0
    counter_lines = []
    flagged_lines = []
    for x in starts:
        rep = iterate(m, x, cap=args.cap, escape_bound=escape, trap_region=trap, keep=8)
        label = rep.fate.label()
        tally[label] = tally.get(label, 0) + 1
        cls, note = _classify(name, m, rep)
        if cls == "supports":
            supporting += 1
        elif cls == "unresolved":
            unresolved += 1
        elif cls == "flagged":
            flagged += 1
            if len(flagged_lines) < args.flag_limit:
                flagged_lines.append(
                    {
                        "type": "flagged",
                        "start": format_rational(x),
                        "fate": label,
                        "steps": rep.steps_used,
                        "note": note,
                    }
                )
        else:
            counter_lines.append(
                {
                    "type": "counterexample",
                    "start": format_rational(x),
                    "fate": label,
                    "steps": rep.steps_used,
                    "note": note,
                }
            )
    for line in flagged_lines + counter_lines:
        out.write(_dumps(line) + "\n")
    summary = _conjecture_summary(
        args, name, map_name, tally, (supporting, flagged, unresolved, len(counter_lines))
    )
    out.write(_dumps(summary) + "\n")
    return EXIT_COUNTEREXAMPLE if counter_lines else EXIT_OK


def _parse_m_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"--m-range wants lo..hi, got {text!r}")
    a, b = int(lo), int(hi)
    if a < 0 or b < a:
        raise ValueError(f"bad --m-range: {text!r}")
    return a, b


def _run_q2(args, out) -> int:
    """The 2m + 3/2 family must climb forever; other F-starts are sampled."""
    m_lo, m_hi = _parse_m_range(args.m_range)
    F = MAPS["F"]
    family_ok = 0
    counter_lines = []
    for m_val in range(m_lo, m_hi + 1):
        x = Fraction(4 * m_val + 3, 2)
        start = x
        good = True
        for _ in range(args.steps):
            if floor_of(x) % 2 != 1:
                good = False
                break
            y, _b = step(F, x)
            if not y > x:
                good = False
                break
            x = y
        good = good and floor_of(x) % 2 == 1
        if good:
            family_ok += 1
        else:
            counter_lines.append(
                {
                    "type": "counterexample",
                    "start": format_rational(start),
                    "note": f"family orbit broke monotone odd-floor growth within {args.steps} steps",
                }
            )

    rng = random.Random(args.seed)
    starts = sample_rationals(rng, args.samples, args.den_bits, args.value_bits, Fraction(1))
    escape = parse_rational(args.escape)
    tally: dict[str, int] = {}
    supporting = flagged = unresolved = 0
    flagged_lines = []
    for x in starts:
        rep = iterate(F, x, cap=args.cap, escape_bound=escape, keep=8)
        label = rep.fate.label()
        tally[label] = tally.get(label, 0) + 1
        cls, note = _classify("Q2", F, rep)
        if cls == "counterexample":
            # an exact nontrivial F-cycle is not ruled out by the theorems;
            # it is loud Q2 evidence rather than a contract violation
            cls, note = "flagged", note
        if cls == "supports":
            supporting += 1
        elif cls == "unresolved":
            unresolved += 1
        else:
            flagged += 1
            if len(flagged_lines) < args.flag_limit:
                flagged_lines.append(
                    {
                        "type": "flagged",
                        "start": format_rational(x),
                        "fate": label,
                        "steps": rep.steps_used,
                        "note": note,
                    }
                )
    for line in flagged_lines + counter_lines:
        out.write(_dumps(line) + "\n")
    summary = _conjecture_summary(
        args,
        "Q2",
        "F",
        tally,
        (supporting, flagged, unresolved, len(counter_lines)),
        extra={
            "family": {
                "m_lo": m_lo,
                "m_hi": m_hi,
                "steps": args.steps,
                "verified": family_ok,
                "violations": len(counter_lines),
            }
        },
    )
    out.write(_dumps(summary) + "\n")
    return EXIT_COUNTEREXAMPLE if counter_lines else EXIT_OK


def cmd_conjecture(args, out) -> int:
    if args.samples < 1:
        raise ValueError(f"--samples must be >= 1, got {args.samples}")
    if args.name == "Q2":
        return _run_q2(args, out)
    return _run_samples(args, args.name, out)


# ------------------------------------------------------------------ trace


def cmd_trace(args, out) -> int:
    try:
        s = BitSeq.from_string(args.bits)
    except ValueError as exc:
        raise ValueError(f"--bits: {exc}") from exc
    rec = evaluate(s)
    obj = _record_json_dict(rec, with_verdict=False)
    if rec.d > 0:
        plain = trace(rec)
        flipped = trace(rec, flipped=True)
        obj["trace"] = plain.to_json_dict()
        obj["trace_flipped"] = flipped.to_json_dict()
        obj["inequalities"] = (
            segment_inequality(plain).to_json_dict()
            if plain.verdict.kind is VerdictKind.ALIGNED_CLOSED
            else None
        )
        obj["inequalities_flipped"] = (
            segment_inequality(flipped).to_json_dict()
            if flipped.verdict.kind is VerdictKind.ALIGNED_CLOSED
            else None
        )
    else:
        obj["trace"] = None
        obj["trace_flipped"] = None
        obj["trace_error"] = "d = 2^l - 3^n is negative; the remainder ledger needs d > 0"
    out.write(_dumps(obj) + "\n")
    return EXIT_OK


# -------------------------------------------------------------- rmap-scan


def _valid_modulus(d: int) -> bool:
    return d >= 5 and d % 2 == 1 and d % 3 != 0


def cmd_rmap_scan(args, out) -> int:
    if (args.d is None) == (args.d_range is None):
        raise ValueError("give exactly one of --d or --d-range")
    if args.d is not None:
        if not _valid_modulus(args.d):
            raise ValueError(f"--d must be odd, >= 5, and not divisible by 3: {args.d}")
        ds = [args.d]
        lo = hi = args.d
    else:
        lo_s, sep, hi_s = args.d_range.partition("..")
        if not sep:
            raise ValueError(f"--d-range wants lo..hi, got {args.d_range!r}")
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise ValueError(f"bad --d-range: {args.d_range!r}")
        ds = [d for d in range(lo, hi + 1) if _valid_modulus(d)]

    scanned = with_orbits = orbit_total = 0
    for d in ds:
        orbits = rmap_orbit_scan(d, args.max_len)
        scanned += 1
        if orbits:
            with_orbits += 1
            orbit_total += len(orbits)
        out.write(
            _dumps(
                {
                    "type": "rmap",
                    "d": d,
                    "orbit_count": len(orbits),
                    "orbits": [
                        {
                            "states": list(o.states),
                            "length": o.length,
                            "odd_steps": o.odd_steps,
                            "exceeds_pow_bound": o.exceeds_pow_bound,
                        }
                        for o in orbits
                    ],
                }
            )
            + "\n"
        )
    out.write(
        _dumps(
            {
                "type": "summary",
                "command": "rmap-scan",
                "d_lo": lo,
                "d_hi": hi,
                "scanned": scanned,
                "with_orbits": with_orbits,
                "orbit_total": orbit_total,
            }
        )
        + "\n"
    )
    return EXIT_OK


# ------------------------------------------------------------------ wiring


def build_parser() -> _Parser:
    p = _Parser(prog="real3x1", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default="-", help="output path, - for stdout")
        sp.add_argument("--config", help="key = value defaults file; flags win")

    sp = sub.add_parser("iterate", help="run one or more orbits to a fate")
    sp.add_argument("--map", required=True, help='T, f, g, U, Uflip, F, V, or "Phi:a,b,c,d,tau[,min]"')
    sp.add_argument("--start", required=True, help="comma-separated rational start values")
    sp.add_argument("--cap", type=int, default=10**4)
    sp.add_argument("--escape", default=None, help="report escaped_bound beyond |x| > this")
    sp.add_argument("--trap-region", default=None, help="lo,hi: stop when the orbit enters [lo,hi)")
    sp.add_argument("--den-bit-cap", type=int, default=1 << 16)
    sp.add_argument("--keep", type=int, default=1024, help="iterates kept in the report")
    sp.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    common(sp)
    sp.set_defaults(func=cmd_iterate)

    sp = sub.add_parser("cycles", help="exhaustive pseudo-cycle sweep over bit sequences")
    sp.add_argument("--lmax", type=int, required=True)
    sp.add_argument("--lmin", type=int, default=1)
    sp.add_argument("--summary-only", action="store_true", help="skip per-candidate records")
    sp.add_argument("--with-verdict", action="store_true", help="attach the remainder-trace verdict to each record")
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_cycles)

    sp = sub.add_parser("conjecture", help="seeded evidence run for one named conjecture")
    sp.add_argument("name", choices=sorted(list(_CONJECTURES) + ["Q2"]))
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--den-bits", type=int, default=32)
    sp.add_argument("--value-bits", type=int, default=16)
    sp.add_argument("--cap", type=int, default=10**4)
    sp.add_argument("--escape", default=_DEFAULT_ESCAPE)
    sp.add_argument("--m-range", default="0..100", help="Q2 only: family indices lo..hi")
    sp.add_argument("--steps", type=int, default=50, help="Q2 only: steps checked per family orbit")
    sp.add_argument("--flag-limit", type=int, default=20, help="flagged sample lines kept")
    common(sp)
    sp.set_defaults(func=cmd_conjecture)

    sp = sub.add_parser("trace", help="remainder ledger for one bit sequence, both alignments")
    sp.add_argument("--bits", required=True, help="0/1 string, e.g. 11100")
    common(sp)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("rmap-scan", help="closed orbits of the remainder dynamics mod d")
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--d-range", default=None, help="lo..hi, invalid moduli skipped")
    sp.add_argument("--max-len", type=int, default=None, help="orbit length cap, default 4*d")
    common(sp)
    sp.set_defaults(func=cmd_rmap_scan)

    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv, config_path = _extract_config_path(argv)
        if config_path is not None:
            flags = _config_flags(config_path)
            if argv:
                argv = argv[:1] + flags + argv[1:]
            else:
                raise ValueError("--config given without a subcommand")
    except OSError as exc:
        print(f"real3x1: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"real3x1: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    args = parser.parse_args(argv)
    try:
        if args.out == "-":
            return args.func(args, sys.stdout)
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            return args.func(args, fh)
    except OSError as exc:
        print(f"real3x1: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, PreconditionError, ValueError) as exc:
        print(f"real3x1: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
