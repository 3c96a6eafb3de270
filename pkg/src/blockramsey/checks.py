"""Property suites behind ``blockramsey verify`` and the calibration fixture.

Each check returns a :class:`PropertyResult`; a suite is a list of them.
Everything is seeded, so a fixed configuration yields identical reports.
"""
from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path

from . import codec, experiments as ex, games, ptree
from .osc import (
    asymptotic_class,
    basis_sequences,
    calibrate_shape,
    find_in_class,
    find_in_class_bruteforce,
    in_partition,
    osc,
    partition_class,
    random_block_sequence,
    shape_key,
)
from .vecspace import BlockSeq, FieldSpec, Vector, decompose, enumerate_span

SUITES = ("partition", "osc", "games", "ptree", "codec", "experiments")
SCHEMA = 1
MAX_LOGGED_FAILURES = 5

#: shapes written by ``calibrate``: (p, block counts, ambient dimension)
CALIBRATION_GRID = ((2, range(1, 7), 12), (3, range(1, 7), 12), (5, range(1, 5), 8))
CALIBRATION_RANDOM_SAMPLES = 200


@dataclass
class RunConfig:
    p: int = 3
    dim: int = 12
    bound: int = 12
    rounds: int = 4
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        FieldSpec(self.p)
        if self.p**self.bound > 3**12:
            raise ValueError(f"bound {self.bound} too large for F_{self.p} (span cap 3**12)")
        if self.dim < 1 or self.rounds < 0:
            raise ValueError("dim must be positive and rounds nonnegative")

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


@dataclass
class PropertyResult:
    name: str
    samples: int = 0
    failures: int = 0
    examples: list = field(default_factory=list)

    def fail(self, what) -> None:
        self.failures += 1
        if len(self.examples) < MAX_LOGGED_FAILURES:
            self.examples.append(what)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {"name": self.name, "samples": self.samples, "failures": self.failures, "examples": self.examples}


# fixtures -------------------------------------------------------------------


def default_fixture_path() -> Path:
    return Path(str(resources.files("blockramsey") / "data" / "osc_thresholds.json"))


def calibrate(seed: int = 0, grid=CALIBRATION_GRID, random_samples: int = CALIBRATION_RANDOM_SAMPLES) -> dict:
    entries = {}
    for p, counts, dim in grid:
        for n in counts:
            entries[shape_key(p, n, dim)] = calibrate_shape(p, n, dim, random_samples, seed)
    return {"schema": SCHEMA, "seed": seed, "random_samples": random_samples, "shapes": entries}


def load_thresholds(path: str | Path | None = None) -> dict:
    path = Path(path) if path is not None else default_fixture_path()
    return json.loads(path.read_text())


def guaranteed_classes(p: int, n_blocks: int, dim: int, fixture: dict | None = None) -> list[int]:
    fixture = fixture if fixture is not None else load_thresholds()
    entry = fixture["shapes"].get(shape_key(p, n_blocks, dim))
    if entry is None:
        entry = calibrate_shape(p, n_blocks, dim)
    return entry["basis"]["guaranteed_classes"]


# partition --------------------------------------------------------------------


def check_partition_totality(limit: int = 1 << 16, max_class: int = 16) -> PropertyResult:
    r = PropertyResult("partition totality")
    for k in range(limit):
        r.samples += 1
        hits = [n for n in range(max_class + 1) if in_partition(k, n)]
        if len(hits) != 1 or hits[0] != partition_class(k):
            r.fail({"k": k, "classes": hits})
    return r


def check_interval_hitting(limit: int = 1 << 16, max_class: int = 10) -> PropertyResult:
    r = PropertyResult("interval hitting")
    for n in range(max_class + 1):
        length = 1 << (n + 1)
        members = [partition_class(k) == n for k in range(limit)]
        # sliding window count of class-n members
        count = sum(members[:length])
        for start in range(limit - length + 1):
            if start:
                count += members[start + length - 1] - members[start - 1]
            r.samples += 1
            if count == 0:
                r.fail({"n": n, "start": start})
    return r


def suite_partition(cfg: RunConfig) -> list[PropertyResult]:
    return [check_partition_totality(), check_interval_hitting()]


# oscillation --------------------------------------------------------------------


def random_vector(p: int, max_len: int, rng: random.Random) -> Vector:
    while True:
        v = Vector([rng.randrange(p) for _ in range(rng.randint(1, max_len))], p)
        if v:
            return v


def check_scalar_invariance(primes=(3, 5), samples: int = 10_000, max_len: int = 32, seed: int = 0) -> PropertyResult:
    r = PropertyResult("oscillation scalar invariance")
    rng = random.Random(seed)
    for p in primes:
        for _ in range(samples):
            v = random_vector(p, max_len, rng)
            o, c = osc(v), asymptotic_class(v)
            for a in range(1, p):
                r.samples += 1
                w = a * v
                if osc(w) != o or asymptotic_class(w) != c:
                    r.fail({"v": v.to_json(), "scalar": a})
    return r


def check_desk_asymptoticity(p: int, n_blocks: int, dim: int, classes) -> PropertyResult:
    r = PropertyResult(f"find_in_class over all {n_blocks} basis blocks below {dim}, F_{p}")
    for X in basis_sequences(n_blocks, dim, p):
        for n in classes:
            r.samples += 1
            v = find_in_class(X, n)
            if v is None or asymptotic_class(v) != n:
                r.fail({"X": X.to_json(), "class": n})
    return r


def check_fixture_matches(p: int, n_blocks: int, dim: int, fixture: dict) -> PropertyResult:
    r = PropertyResult(f"calibration fixture reproduces for {shape_key(p, n_blocks, dim)}")
    r.samples = 1
    stored = fixture["shapes"].get(shape_key(p, n_blocks, dim))
    fresh = calibrate_shape(p, n_blocks, dim, fixture["random_samples"], fixture["seed"])
    if stored != fresh:
        r.fail({"stored": stored, "fresh": fresh})
    return r


def check_find_in_class_oracle(p: int, samples: int = 200, seed: int = 0) -> PropertyResult:
    r = PropertyResult("find_in_class agrees with the pure-Python scan")
    rng = random.Random(seed)
    for _ in range(samples):
        X = random_block_sequence(rng.randint(1, 5), 10, p, rng)
        n = rng.randrange(4)
        r.samples += 1
        if find_in_class(X, n) != find_in_class_bruteforce(X, n):
            r.fail({"X": X.to_json(), "class": n})
    return r


def suite_osc(cfg: RunConfig) -> list[PropertyResult]:
    fixture = load_thresholds()
    primes = tuple(sorted({cfg.p, 5})) if cfg.p > 2 else (cfg.p,)
    n_blocks = 6
    out = [check_scalar_invariance(primes, seed=cfg.seed)]
    key = shape_key(cfg.p, n_blocks, cfg.dim)
    if key in fixture["shapes"]:
        out.append(check_fixture_matches(cfg.p, n_blocks, cfg.dim, fixture))
    out.append(check_desk_asymptoticity(cfg.p, n_blocks, cfg.dim, guaranteed_classes(cfg.p, n_blocks, cfg.dim, fixture)))
    out.append(check_find_in_class_oracle(cfg.p, seed=cfg.seed))
    return out


# games ----------------------------------------------------------------------------


@dataclass(frozen=True)
class GameSetup:
    ground: BlockSeq
    targets: tuple[int, ...]
    catalog: tuple[BlockSeq, ...]


def random_game_setup(seed: int, p: int = 3, classes=(0, 1), min_ground: int = 12, max_rounds: int = 4) -> GameSetup:
    """Ground of >= ``min_ground`` basis blocks, targets from ``classes``, and a
    catalog of increasing basis subsequences of the ground with at least 3 blocks each.
    """
    rng = random.Random(seed)
    size = rng.randint(min_ground, min_ground + 4)
    idx = sorted(rng.sample(range(size + 8), size))
    ground = BlockSeq.basis(idx, p)
    rounds = rng.randint(1, max_rounds)
    targets = tuple(rng.choice(classes) for _ in range(rounds))
    per = len(ground) // rounds
    catalog = []
    for k in range(rounds):
        chunk = list(range(k * per, (k + 1) * per))
        keep = sorted(rng.sample(chunk, rng.randint(3, len(chunk))))
        catalog.append(BlockSeq((ground[i] for i in keep), p))
    return GameSetup(ground, targets, tuple(catalog))


def class_realization_run(setup: GameSetup, kind: games.GameKind):
    """Run class-chaser II against tail-player I (F) or catalog I (G)."""
    s = games.new_game(kind, setup.ground)
    strat_I = games.TailPlayer() if kind is games.GameKind.ASYMPTOTIC else games.CatalogPlayer(setup.catalog)
    return games.run(s, strat_I, games.ClassChaser(setup.targets), len(setup.targets))


def check_class_realization(p: int, runs: int = 100, seed: int = 0, classes=(0, 1)) -> list[PropertyResult]:
    legal = PropertyResult("transcripts replay without rejections")
    realized = PropertyResult("every reply lands in its target class")
    complete = PropertyResult("no exhaustion within 4 rounds")
    for i in range(runs):
        setup = random_game_setup(seed * 1_000_003 + i, p, classes)
        for kind in (games.GameKind.ASYMPTOTIC, games.GameKind.GOWERS):
            t = class_realization_run(setup, kind)
            legal.samples += 1
            if games.replay(t, setup.ground):
                legal.fail({"seed": i, "kind": kind.value})
            complete.samples += 1
            if t.exhausted:
                complete.fail({"seed": i, "kind": kind.value, "reason": t.reason})
            for k, y in enumerate(t.outcome):
                realized.samples += 1
                if asymptotic_class(y) != setup.targets[k]:
                    realized.fail({"seed": i, "kind": kind.value, "reply": k})
    return [legal, realized, complete]


def gstar_corpus(p: int = 3, cases: int = 20, seed: int = 0) -> list[tuple[games.Strategy, tuple[BlockSeq, ...]]]:
    """Built-in II strategies paired with I block feeds of random general blocks."""
    rng = random.Random(f"gstar:{seed}")
    out = []
    for i in range(cases):
        rounds = rng.randint(1, 3)
        feeds = []
        start = 0
        for _ in range(rounds):
            width = rng.randint(6, 9)
            X = random_block_sequence(rng.randint(3, 5), width, p, rng)
            feeds.append(BlockSeq((Vector((0,) * start + b.coeffs, p) for b in X), p))
            start += width
        kind = i % 3
        if kind == 0:
            strat = games.ClassChaser([rng.choice((0, 1)) for _ in range(rounds)])
        elif kind == 1:
            z = sorted(rng.sample(range(3), rounds))
            strat = games.Encoder(z)
        else:
            strat = games.FirstVector()
        out.append((strat, tuple(feeds)))
    return out


def _outcome_or_exhaustion(fn, *args, **kw):
    try:
        return ("ok", fn(*args, **kw))
    except games.StrategyExhausted as exc:
        return ("exhausted", exc.round)


def check_gstar_agreement(p: int = 3, cases: int = 20, seed: int = 0) -> PropertyResult:
    r = PropertyResult("G* simulation matches direct G play")
    for i, (strat, feeds) in enumerate(gstar_corpus(p, cases, seed)):
        r.samples += 1
        a = _outcome_or_exhaustion(games.simulate_gowers_via_finitized, strat, feeds)
        b = _outcome_or_exhaustion(games.play_gowers_directly, strat, feeds)
        if a != b:
            r.fail({"case": i, "strategy": strat.describe()})
    return r


def suite_games(cfg: RunConfig) -> list[PropertyResult]:
    classes = tuple(c for c in (0, 1) if c in guaranteed_classes(cfg.p, 3, cfg.dim))
    out = check_class_realization(cfg.p, seed=cfg.seed, classes=classes or (1,))
    out.append(check_gstar_agreement(cfg.p, seed=cfg.seed))
    return out


# perfect trees -------------------------------------------------------------------


def check_branching_levels(samples: int = 200, depth: int = 14, max_n: int = 5, seed: int = 0) -> list[PropertyResult]:
    size = PropertyResult("|l(n,p)| = 2**n")
    cones = PropertyResult("p is the union of its cones p|s over l(n,p)")
    rng = random.Random(f"levels:{seed}")
    for _ in range(samples):
        p = ptree.random_condition(depth, rng, rng.randint(0, depth - max_n - 1))
        for n in range(max_n + 1):
            size.samples += 1
            cones.samples += 1
            lev = ptree.branching_levels(p, n)
            if len(lev) != 2**n:
                size.fail({"n": n, "size": len(lev)})
            if ptree.cone_union(p, n) != p:
                cones.fail({"n": n})
    return [size, cones]


def random_fusion_sequence(rng: random.Random, depth: int = 12, stages: int = 4):
    p = ptree.random_condition(depth, rng, rng.randint(0, 3))
    return ptree.fusion_build(p, ptree.random_refiner(rng, rng.randint(0, 2)), stages)


def check_fusion(samples: int = 100, depth: int = 12, stages: int = 4, seed: int = 0) -> PropertyResult:
    r = PropertyResult("fusion is <=_n every p_n")
    rng = random.Random(f"fusion:{seed}")
    for _ in range(samples):
        seq, fused = random_fusion_sequence(rng, depth, stages)
        for n, q in enumerate(seq):
            r.samples += 1
            if not ptree.leq_n(fused, q, n):
                r.fail({"n": n})
    return r


def check_compatibility(samples: int = 50, depth: int = 10, level: int = 2, seed: int = 0) -> PropertyResult:
    r = PropertyResult(f"some cone p|s, s in l({level},p), is compatible with q <= p (depth {depth})")
    rng = random.Random(f"compat:{seed}")
    for _ in range(samples):
        p = ptree.random_condition(depth, rng, rng.randint(0, 3))
        q = ptree.random_subcondition(p, rng, rng.randint(0, 12))
        r.samples += 1
        if not any(ptree.compatible(q, ptree.restrict(p, s)) for s in ptree.branching_levels(p, level)):
            r.fail({"p": len(p), "q": len(q)})
    return r


def suite_ptree(cfg: RunConfig) -> list[PropertyResult]:
    return [*check_branching_levels(seed=cfg.seed), check_fusion(seed=cfg.seed), check_compatibility(seed=cfg.seed)]


# codec ------------------------------------------------------------------------------


def check_codec_round_trip(samples: int = 1000, max_len: int = 16, seed: int = 0) -> PropertyResult:
    r = PropertyResult("recover_prefix returns a prefix of g for every nonempty subset of z(g)")
    rng = random.Random(f"codec:{seed}")
    for _ in range(samples):
        L = rng.randint(0, max_len)
        g = "".join(rng.choice("01") for _ in range(L))
        z = sorted(codec.z_of(g).z_elements)
        for mask in range(1, 1 << len(z)):
            w = [z[i] for i in range(len(z)) if mask >> i & 1]
            r.samples += 1
            try:
                got = codec.recover_prefix(w)
            except codec.Inconsistent:
                r.fail({"g": g, "w": w})
                continue
            if not g.startswith(got):
                r.fail({"g": g, "w": w, "got": got})
    return r


def _z_masks(max_len: int, universe: int) -> list[int]:
    masks = set()
    for L in range(max_len + 1):
        for k in range(2**L):
            g = format(k, f"0{L}b") if L else ""
            masks.add(sum(1 << e for e in codec.z_of(g).z_elements if e < universe))
    return sorted(masks)


def check_codec_chain_soundness(max_len: int = 8, universe: int = 16) -> PropertyResult:
    """Inconsistent exactly when no g of length <= max_len has w inside z(g), for all w within ``universe``."""
    r = PropertyResult(f"Inconsistent iff unrealizable (all w below {universe}, |g| <= {max_len})")
    masks = _z_masks(max_len, universe)
    # a subset is realizable iff it sits inside some maximal z-mask
    maximal = [m for m in masks if not any(m != o and m & o == m for o in masks)]
    for w in range(1 << universe):
        r.samples += 1
        realizable = any(w & m == w for m in maximal)
        elems = [i for i in range(universe) if w >> i & 1]
        try:
            codec.recover_prefix(elems)
            consistent = True
        except codec.Inconsistent:
            consistent = False
        if consistent != realizable:
            r.fail({"w": elems, "realizable": realizable})
    return r


def increasing_sequences(values=(0, 1, 2), max_len: int = 3):
    for L in range(max_len + 1):
        yield from combinations(values, L)


def check_pipeline(p: int = 3, width: int = 6) -> PropertyResult:
    r = PropertyResult("pipeline decode recovers exactly the z-classes used")
    for z in increasing_sequences():
        if not z:
            continue
        res = codec.pipeline_encode_play(z, codec.basis_catalog(len(z), width, p))
        for v in enumerate_span(res.outcome):
            r.samples += 1
            c = decompose(v, res.outcome)
            want = frozenset(z[i] for i, a in enumerate(c) if a)
            if codec.pipeline_decode(v, res.outcome) != want:
                r.fail({"z": list(z), "v": v.to_json()})
    return r


def suite_codec(cfg: RunConfig) -> list[PropertyResult]:
    return [check_codec_round_trip(seed=cfg.seed), check_codec_chain_soundness(), check_pipeline(cfg.p)]


# experiments --------------------------------------------------------------------------


def fixture_map_families(p: int, dim: int) -> dict[str, list[ex.LinMap]]:
    return {
        "zero": [ex.LinMap.zero(p, dim)],
        "identity": [ex.LinMap.identity(p, dim)],
        "projection-low": [ex.LinMap.projection(p, dim, range(4))],
        "projection-even": [ex.LinMap.projection(p, dim, range(0, dim, 2))],
        "identity+projection": [ex.LinMap.identity(p, dim), ex.LinMap.projection(p, dim, range(3))],
        "zero+identity": [ex.LinMap.zero(p, dim), ex.LinMap.identity(p, dim)],
    }


def check_kernel_verdicts(p: int, dim: int = 10, target_len: int = 2) -> PropertyResult:
    r = PropertyResult("kernel dichotomy witnesses re-verify")
    ground = BlockSeq.basis(range(dim), p)
    for name, maps in fixture_map_families(p, dim).items():
        r.samples += 1
        v = ex.kernel_dichotomy_search(maps, ground, target_len)
        if not ex.verify_kernel_verdict(maps, v):
            r.fail({"family": name, "verdict": v.to_json()})
    return r


def check_asymptotic_verdicts(p: int, dim: int = 8, probe_len: int = 4) -> PropertyResult:
    r = PropertyResult("asymptotic-below verdicts re-verify")
    ground = BlockSeq.basis(range(dim), p)
    families = {
        "empty": [ex.empty_oracle()],
        "all": [ex.everything_oracle()],
        "A_0,A_1": [ex.class_oracle(0), ex.class_oracle(1)],
        "A_3": [ex.class_oracle(3)],
    }
    for name, oracles in families.items():
        r.samples += 1
        v = ex.asymptotic_below_search(oracles, ground, probe_len)
        if not ex.verify_asymptotic_verdict(oracles, ground, probe_len, v):
            r.fail({"family": name, "verdict": v.to_json()})
    return r


def suite_experiments(cfg: RunConfig) -> list[PropertyResult]:
    return [check_kernel_verdicts(cfg.p), check_asymptotic_verdicts(cfg.p)]


SUITE_FUNCS = {
    "partition": suite_partition,
    "osc": suite_osc,
    "games": suite_games,
    "ptree": suite_ptree,
    "codec": suite_codec,
    "experiments": suite_experiments,
}


def run_suites(names, cfg: RunConfig) -> dict:
    report = {"schema": SCHEMA, "config": cfg.to_json(), "suites": {}}
    failures = 0
    for name in names:
        results = SUITE_FUNCS[name](cfg)
        failures += sum(x.failures for x in results)
        report["suites"][name] = [x.to_json() for x in results]
    report["failures"] = failures
    report["passed"] = failures == 0
    return report
