"""Command line for the property suites and the game, codec and experiment drivers.

Every command prints one JSON document.

Exit codes: 0 success, 1 a property failed (or a verdict did not re-verify),
2 usage error or unreadable input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Callable, TextIO

from . import checks, codec, experiments as ex, games
from .games import BlockMove, GameKind, NatMove, Reply, VecMove
from .fastspan import decompose_rows
from .vecspace import BlockSeq, Vector, decompose, span_array, vector_from_row

KIND_NAMES = {"asymptotic": GameKind.ASYMPTOTIC, "f": GameKind.ASYMPTOTIC,
              "gowers": GameKind.GOWERS, "g": GameKind.GOWERS,
              "finitized": GameKind.FINITIZED, "gstar": GameKind.FINITIZED}


class UsageError(Exception):
    pass


def dump(obj, out: str | None, stream: TextIO) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        stream.write(text)


def header(command: str, cfg: checks.RunConfig) -> dict:
    return {"schema": checks.SCHEMA, "command": command, "config": cfg.to_json()}


def int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma separated integers, got {text!r}") from None


# move syntax -------------------------------------------------------------------

_TERM = re.compile(r"^(\d*)\*?e(\d+)$")


def parse_vector(text: str, p: int) -> Vector:
    """``0``, ``1,0,2`` (coefficients from index 0), ``e2`` or ``2e0+e3``."""
    text = text.replace(" ", "")
    if not text:
        raise UsageError("empty vector")
    if "e" not in text:
        return Vector(int_list(text), p)
    terms: dict[int, int] = {}
    for part in text.split("+"):
        m = _TERM.match(part)
        if not m:
            raise UsageError(f"cannot read term {part!r}")
        c = int(m.group(1)) if m.group(1) else 1
        i = int(m.group(2))
        terms[i] = terms.get(i, 0) + c
    return Vector.from_terms(terms, p)


def parse_move(text: str, s: games.GameState):
    """Read a move of the right shape for whoever is to play in ``s``."""
    p = s.p
    if s.turn == games.II:
        return Reply(parse_vector(text, p))
    if s.kind is GameKind.ASYMPTOTIC:
        try:
            return NatMove(int(text))
        except ValueError:
            raise UsageError("I plays a natural number here") from None
    if s.kind is GameKind.FINITIZED:
        return VecMove(parse_vector(text, p))
    try:
        return BlockMove(BlockSeq((parse_vector(t, p) for t in text.split(";") if t.strip()), p))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


class Human(games.Strategy):
    """Reads moves from a stream, re-prompting until one is legal."""

    name = "human"

    def __init__(self, stdin: TextIO, prompt: TextIO):
        self.stdin, self.prompt = stdin, prompt

    def __call__(self, s: games.GameState):
        while True:
            what = {games.GameKind.ASYMPTOTIC: "n", GameKind.FINITIZED: "vector"}.get(s.kind, "blocks")
            what = "vector" if s.turn == games.II else what
            self.prompt.write(f"[round {s.rounds_played + 1}] {s.turn} ({what})> ")
            self.prompt.flush()
            line = self.stdin.readline()
            if not line:
                raise games.StrategyExhausted("input closed")
            line = line.strip()
            if line in ("q", "quit"):
                raise games.StrategyExhausted("player quit")
            try:
                m = parse_move(line, s)
            except (UsageError, ValueError) as exc:
                self.prompt.write(f"unreadable: {exc}\n")
                continue
            rej = games.validate_move(s, m)
            if rej is None:
                return m
            self.prompt.write(f"rejected: {rej}\n")


def default_targets(rounds: int) -> list[int]:
    return [k % 2 for k in range(rounds)]


def machine_I(kind: GameKind, name: str, cfg: checks.RunConfig) -> games.Strategy:
    if kind is GameKind.ASYMPTOTIC:
        if name not in ("auto", "tail"):
            raise UsageError(f"unknown strategy for I in F: {name}")
        return games.TailPlayer()
    width = max(1, cfg.dim // max(cfg.rounds, 1))
    catalog = codec.basis_catalog(max(cfg.rounds, 1), width, cfg.p)
    if kind is GameKind.FINITIZED:
        if name not in ("auto", "feed"):
            raise UsageError(f"unknown strategy for I in G*: {name}")
        return games.FeedPlayer(catalog)
    if name not in ("auto", "catalog"):
        raise UsageError(f"unknown strategy for I in G: {name}")
    return games.CatalogPlayer(catalog)


def machine_II(name: str, targets: list[int], cfg: checks.RunConfig) -> games.Strategy:
    if name in ("auto", "chaser"):
        return games.ClassChaser(targets, cfg.bound)
    if name == "encoder":
        return games.Encoder(targets, cfg.bound)
    if name == "first":
        return games.FirstVector()
    raise UsageError(f"unknown strategy for II: {name}")


# commands ------------------------------------------------------------------------


def cmd_verify(args, cfg: checks.RunConfig, stdout: TextIO) -> int:
    names = checks.SUITES if args.suite == "all" else (args.suite,)
    report = checks.run_suites(names, cfg)
    report["command"] = f"verify {args.suite}"
    dump(report, cfg.out, stdout)
    return 0 if report["passed"] else 1


def cmd_calibrate(args, cfg: checks.RunConfig, stdout: TextIO) -> int:
    fixture = checks.calibrate(cfg.seed)
    out = cfg.out or str(checks.default_fixture_path())
    Path(out).write_text(json.dumps(fixture, indent=1, sort_keys=True) + "\n")
    summary = {key: e["basis"]["reachable_classes"] for key, e in fixture["shapes"].items()}
    dump({**header("calibrate", cfg), "written": out, "reachable_classes": summary}, None, stdout)
    return 0


def cmd_play(args, cfg: checks.RunConfig, stdout: TextIO, stdin: TextIO, prompt: TextIO) -> int:
    kind = KIND_NAMES[args.kind]
    ground = BlockSeq.basis(range(cfg.dim), cfg.p)
    targets = int_list(args.targets) if args.targets else default_targets(cfg.rounds)
    if len(targets) < cfg.rounds:
        raise UsageError("fewer targets than rounds")
    human = args.human if args.interactive else None
    human_strat = Human(stdin, prompt)
    strat_I = human_strat if human in ("I", "both") else machine_I(kind, args.player_I, cfg)
    strat_II = human_strat if human in ("II", "both") else machine_II(args.player_II, targets, cfg)
    t = games.run(games.new_game(kind, ground), strat_I, strat_II, cfg.rounds)
    report = {**header(f"play {args.kind}", cfg),
              "players": {"I": strat_I.describe(), "II": strat_II.describe()},
              "transcript": t.to_json()}
    dump(report, cfg.out, stdout)
    return 0


def cmd_codec(args, cfg: checks.RunConfig, stdout: TextIO, stdin: TextIO) -> int:
    data = read_json_input(args.input, stdin) if args.input else {}
    if not isinstance(data, dict):
        raise UsageError("codec input must be a JSON object")
    if args.action == "encode":
        g = args.g if args.g is not None else data.get("g")
        if g is None:
            raise UsageError("codec encode needs --g or an input with \"g\"")
        try:
            z = codec.z_of(str(g)).sorted()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        dump({"z": z}, cfg.out, stdout)
        return 0
    if args.action == "recover":
        w = int_list(args.w) if args.w is not None else data.get("w")
        if w is None:
            raise UsageError("codec recover needs --w or an input with \"w\"")
        try:
            dump({"prefix": codec.recover_prefix(w)}, cfg.out, stdout)
        except codec.Inconsistent as exc:
            dump({"prefix": None, "inconsistent": str(exc)}, cfg.out, stdout)
            return 1
        return 0
    # pipeline
    z = int_list(args.z) if args.z is not None else data.get("z")
    if not z:
        raise UsageError("codec pipeline needs a nonempty --z")
    width = args.width or max(1, cfg.dim // len(z))
    try:
        res = codec.pipeline_encode_play(z, codec.basis_catalog(len(z), width, cfg.p))
    except games.StrategyExhausted as exc:
        dump({**header("codec pipeline", cfg), "z": z, "exhausted": str(exc), "round": exc.round}, cfg.out, stdout)
        return 1
    table, failures = [], 0
    rows = span_array(res.outcome, cfg.bound)
    batch, ok = decompose_rows(rows, res.outcome)
    for row, fast, hit in zip(rows, batch.tolist(), ok):
        v = vector_from_row(row, cfg.p)
        coeffs = decompose(v, res.outcome)
        got = sorted(codec.pipeline_decode(v, res.outcome))
        want = sorted({z[i] for i, c in enumerate(coeffs) if c})
        failures += got != want or not hit or tuple(fast) != coeffs
        table.append({"v": v.to_json()["coeffs"], "coeffs": list(coeffs), "classes": got})
    report = {**header("codec pipeline", cfg), "z": list(z), "width": width,
              "transcript": res.transcript.to_json(), "outcome": res.outcome.to_json(),
              "decode": table, "failures": failures}
    dump(report, cfg.out, stdout)
    return 1 if failures else 0


ORACLES: dict[str, Callable[[], ex.VecSetOracle]] = {
    "empty": ex.empty_oracle,
    "all": ex.everything_oracle,
}


def parse_oracles(text: str) -> list[ex.VecSetOracle]:
    out = []
    for name in (t.strip() for t in text.split(",")):
        m = re.fullmatch(r"A_?(\d+)", name)
        if m:
            out.append(ex.class_oracle(int(m.group(1))))
        elif name in ORACLES:
            out.append(ORACLES[name]())
        else:
            raise UsageError(f"unknown oracle {name!r} (use A_n, empty or all)")
    return out


def cmd_experiment(args, cfg: checks.RunConfig, stdout: TextIO) -> int:
    if args.action == "kernel":
        if not args.maps:
            raise UsageError("experiment kernel needs --maps")
        try:
            maps = ex.load_maps(args.maps)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read {args.maps}: {exc}") from None
        if not maps:
            raise UsageError("map file is empty")
        dim = min(cfg.dim, min(m.dim for m in maps))
        ground = BlockSeq.basis(range(dim), cfg.p)
        v = ex.kernel_dichotomy_search(maps, ground, args.length, bound=cfg.bound)
        ok = ex.verify_kernel_verdict(maps, v)
        extra = {"maps": [m.to_json() for m in maps]}
    else:
        oracles = parse_oracles(args.oracles)
        ground = BlockSeq.basis(range(cfg.dim), cfg.p)
        v = ex.asymptotic_below_search(oracles, ground, args.length, bound=cfg.bound)
        ok = ex.verify_asymptotic_verdict(oracles, ground, args.length, v)
        extra = {"oracles": [o.name for o in oracles]}
    report = {**header(f"experiment {args.action}", cfg), **extra, "ground": ground.to_json(),
              "length": args.length, "verdict": v.to_json(), "verified": ok}
    dump(report, cfg.out, stdout)
    return 0 if ok else 1


def read_json_input(path: str, stdin: TextIO):
    try:
        text = stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


# parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="field prime")
    common.add_argument("--dim", type=int, default=12, help="ambient dimension D")
    common.add_argument("--bound", type=int, default=12, help="max blocks enumerated per span")
    common.add_argument("--rounds", type=int, default=4)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the JSON report here instead of stdout")

    parser = argparse.ArgumentParser(prog="blockramsey", description=__doc__.split("\n")[0].rstrip("."))
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run property suites")
    v.add_argument("suite", choices=[*checks.SUITES, "all"])

    sub.add_parser("calibrate", parents=[common], help="recompute osc_thresholds.json")

    pl = sub.add_parser("play", parents=[common], help="play F, G or G*")
    pl.add_argument("--kind", choices=sorted(KIND_NAMES), default="asymptotic")
    pl.add_argument("--I", dest="player_I", default="auto", help="tail | catalog | feed")
    pl.add_argument("--II", dest="player_II", default="auto", help="chaser | encoder | first")
    pl.add_argument("--targets", help="classes for II, e.g. 0,1,0")
    pl.add_argument("--interactive", action="store_true", help="read one side's moves from stdin")
    pl.add_argument("--human", choices=["I", "II", "both"], default="II")

    c = sub.add_parser("codec", parents=[common], help="encode, recover, pipeline")
    c.add_argument("action", choices=["encode", "recover", "pipeline"])
    c.add_argument("--g", help="bit string, e.g. 101")
    c.add_argument("--w", help="subset of z(g), e.g. 1,5")
    c.add_argument("--z", help="increasing classes for the encoder, e.g. 0,1")
    c.add_argument("--width", type=int, help="basis blocks per catalog entry")
    c.add_argument("--input", help="JSON input file, or - for stdin")

    e = sub.add_parser("experiment", parents=[common], help="dichotomy searches")
    e.add_argument("action", choices=["kernel", "asymptotic"])
    e.add_argument("--maps", help="JSON map file")
    e.add_argument("--oracles", default="A_0,A_1", help="comma list of A_n, empty, all")
    e.add_argument("--length", type=int, default=2, help="blocks in the witness / probe")
    return parser


def main(argv=None, stdin: TextIO | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = checks.RunConfig(args.p, args.dim, args.bound, args.rounds, args.seed, args.out)
        if args.command == "verify":
            return cmd_verify(args, cfg, stdout)
        if args.command == "calibrate":
            return cmd_calibrate(args, cfg, stdout)
        if args.command == "play":
            return cmd_play(args, cfg, stdout, stdin, stderr)
        if args.command == "codec":
            return cmd_codec(args, cfg, stdout, stdin)
        return cmd_experiment(args, cfg, stdout)
    except (UsageError, ValueError) as exc:
        stderr.write(f"blockramsey: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
