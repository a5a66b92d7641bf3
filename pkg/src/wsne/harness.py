"""Game generators, named fixtures and the batch runner behind the CLI."""

from __future__ import annotations

import csv
import io
import json
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np

from .algorithms import (
    TWO_THIRDS,
    base_wsne,
    check_step_five_bounds,
    improved_wsne,
    optimal_z,
    split_step_four,
    winlose_wsne,
)
from .apxne import THETA, apx_ne
from .comm import CommConfig, bit_budget, endpoints, protocol_ne, protocol_winlose, protocol_wsne
from .game import TOL, BimatrixGame, Step, swap_players, verify
from .query import PayoffOracle, query_budget, query_wsne
from .zerosum import solve_relaxations

MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seeds(master: int, count: int) -> list[int]:
    state, out = master & MASK64, []
    for _ in range(count):
        state, v = splitmix64(state)
        out.append(v)
    return out


# --- fixtures -------------------------------------------------------------------


def lower_bound_game(a: float = TWO_THIRDS) -> BimatrixGame:
    """2x2 game on which the basic method stops at its first branch.

    With ``a = 2/3`` the row player's min-max value is exactly ``a`` and the
    returned profile has column pure-strategy regret ``a``.
    """
    return BimatrixGame(np.array([[0.0, 1.0], [a, 0.9]]), np.array([[1.0, 0.9], [0.0, a]]))


def planted_mp_game(t: float = 1 / 3) -> BimatrixGame:
    """4x4 game whose improved-method run ends in the matching-pennies branch."""
    R = np.array([[1, t, 1, 1], [t, 1, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0]], dtype=float)
    C = np.array([[t, 1, 0, 0], [1, t, 0, 0], [0.5] * 4, [0.5] * 4], dtype=float)
    return BimatrixGame(R, C)


FIXTURES: dict[str, Callable[[], BimatrixGame]] = {
    "lb-base": lambda: lower_bound_game(TWO_THIRDS),
    "lb-improved": lambda: lower_bound_game(TWO_THIRDS - optimal_z()),
    "lb-improved-literal": lambda: lower_bound_game(0.6528),
    "planted-mp": planted_mp_game,
    "matching-pennies": lambda: BimatrixGame(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([[0.0, 1.0], [1.0, 0.0]])),
}


def fixture(name: str) -> BimatrixGame:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}") from None


def planted_game(n: int, rng: np.random.Generator) -> BimatrixGame:
    """The planted 4x4 core padded to n x n with noise, then relabeled.

    Padding rows are worthless to the row player and padding columns act
    like the core's last two columns, so the core still drives the run.
    """
    if n < 4:
        raise ValueError("planted games need n >= 4")
    core = planted_mp_game()
    R = np.zeros((n, n))
    C = np.zeros((n, n))
    R[:4, :4], C[:4, :4] = core.R, core.C
    R[:2, 4:] = 1.0
    C[2:, :] = rng.uniform(0.4, 0.6, size=(n - 2, n))
    R[2:, :] = rng.uniform(0.0, 0.2, size=(n - 2, n))
    pr, pc = rng.permutation(n), rng.permutation(n)
    return BimatrixGame(R[np.ix_(pr, pc)], C[np.ix_(pr, pc)])


# --- generation ----------------------------------------------------------------


KINDS = ("uniform", "winlose", "fixture", "planted")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int = 2
    seed: int = 0
    count: int = 1
    p: float = 0.5
    name: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.n < 1 or self.count < 0:
            raise ValueError("need n >= 1 and count >= 0")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.kind == "fixture" and self.name not in FIXTURES:
            raise KeyError(f"unknown fixture {self.name!r}")

    def label(self) -> str:
        if self.kind == "fixture":
            return f"fixture:{self.name}"
        if self.kind == "winlose":
            return f"winlose(p={self.p}):n={self.n}"
        return f"{self.kind}:n={self.n}"


def generate_one(spec: GeneratorSpec, game_seed: int) -> BimatrixGame:
    if spec.kind == "fixture":
        return fixture(spec.name)
    rng = np.random.default_rng(game_seed)
    n = spec.n
    if spec.kind == "uniform":
        return BimatrixGame(rng.random((n, n)), rng.random((n, n)))
    if spec.kind == "winlose":
        return BimatrixGame((rng.random((n, n)) < spec.p) * 1.0, (rng.random((n, n)) < spec.p) * 1.0)
    return planted_game(n, rng)


def generate(spec: GeneratorSpec) -> list[BimatrixGame]:
    return [generate_one(spec, s) for s in derive_seeds(spec.seed, spec.count)]


# --- running -------------------------------------------------------------------

EXACT_ALGS = ("base", "improved", "winlose", "apxne")
COMM_ALGS = ("comm-wsne", "comm-ne", "comm-winlose")
ALGORITHMS = EXACT_ALGS + COMM_ALGS + ("query",)


@dataclass(frozen=True)
class RunParams:
    z: float | None = None
    eps: float = 0.1
    seed: int = 0
    force_sampling: bool = False
    check_invariants: bool = True
    timing: bool = False
    comm: CommConfig = field(default_factory=CommConfig)


@dataclass
class RunRecord:
    index: int
    generator: str
    seed: int
    algorithm: str
    n: int
    step: str
    claimed_eps: float
    measure: str
    row_regret: float
    col_regret: float
    row_pure_regret: float
    col_pure_regret: float
    regret: float
    holds: bool
    probabilistic: bool = False
    bits: int | None = None
    bit_budget: float | None = None
    queries: int | None = None
    query_budget: float | None = None
    within_budget: bool | None = None
    invariants: str | None = None
    error: str | None = None
    wall_time: float | None = None

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        if self.wall_time is None:
            del d["wall_time"]
        return d


def step5_invariants(game: BimatrixGame, outcome, z: float) -> str:
    """Re-derive the step-five state of an improved run and check every proof bound."""
    relax = solve_relaxations(game)
    g, r = game, relax
    if outcome.notes.get("swapped"):
        g, r = swap_players(game), relax.swapped()
    split = split_step_four(g, r.x_star, outcome.notes["j_star"], z)
    rep = check_step_five_bounds(g, r.x_star, split, outcome.notes["j_prime"], z, raise_on_fail=False)
    return "pass" if rep.passed else "fail:" + ",".join(c.name for c in rep.failures())


STEP5 = {Step.IMPROVED_STEP5_PURE, Step.IMPROVED_STEP5_MP, Step.IMPROVED_STEP5_FALLBACK}


def run_one(game: BimatrixGame, algorithm: str, params: RunParams, game_seed: int = 0) -> dict[str, Any]:
    """Run one algorithm on one game; returns the fields of a record."""
    z = optimal_z() if params.z is None else params.z
    eps = params.eps
    extra: dict[str, Any] = {}
    if algorithm in EXACT_ALGS:
        if algorithm == "base":
            out = base_wsne(game)
        elif algorithm == "improved":
            out = improved_wsne(game, z)
        elif algorithm == "winlose":
            out = winlose_wsne(game)
        else:
            out = apx_ne(game)
        profile, step, claimed, measure = out.profile, out.step, out.claimed_eps, out.measure
        if algorithm == "improved" and out.step in STEP5 and params.check_invariants:
            extra["invariants"] = step5_invariants(game, out, z)
    elif algorithm in COMM_ALGS:
        row, col = endpoints(game, game_seed)
        kind = algorithm.split("-", 1)[1]
        if kind == "wsne":
            profile, tr = protocol_wsne(row, col, eps, z, params.comm)
            claimed, measure = TWO_THIRDS - z + eps, "wsne"
        elif kind == "ne":
            profile, tr = protocol_ne(row, col, eps, params.comm)
            claimed, measure = THETA + eps, "ne"
        else:
            profile, tr = protocol_winlose(row, col, eps, params.comm)
            claimed, measure = 0.5 + eps, "wsne"
        step = Step(tr.notes["step"])
        budget = bit_budget(game.n, eps, params.comm.budget_k)
        extra.update(
            bits=tr.total_bits, bit_budget=budget, within_budget=tr.total_bits <= budget, probabilistic=True
        )
    elif algorithm == "query":
        oracle = PayoffOracle(game)
        out, q = query_wsne(oracle, eps, game_seed, z, params.force_sampling)
        profile, step, claimed, measure = out.profile, out.step, out.claimed_eps, out.measure
        budget = query_budget(game.n, eps)
        extra.update(
            queries=q,
            query_budget=budget,
            within_budget=(q <= budget and q == oracle.count),
            probabilistic=out.notes.get("mode") == "sample",
        )
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    rep = verify(game, profile)
    regret = rep.max_pure_regret if measure == "wsne" else rep.max_regret
    return dict(
        step=step.value,
        claimed_eps=float(claimed),
        measure=measure,
        **rep.to_dict(),
        regret=float(regret),
        holds=bool(regret <= claimed + TOL),
        profile=profile,
        **extra,
    )


@dataclass
class RunReport:
    algorithm: str
    generator: str
    params: dict[str, Any]
    records: list[RunRecord] = field(default_factory=list)

    @property
    def max_regret(self) -> float:
        vals = [r.regret for r in self.records if r.error is None]
        return max(vals) if vals else 0.0

    def step_histogram(self) -> dict[str, int]:
        return dict(sorted(Counter(r.step for r in self.records).items()))

    @property
    def budget_violations(self) -> int:
        return sum(1 for r in self.records if r.within_budget is False)

    @property
    def failures(self) -> int:
        """Records whose regret exceeds the claim and are not sampling misses."""
        return sum(1 for r in self.records if r.error is not None or (not r.holds and not r.probabilistic))

    @property
    def success_rate(self) -> float:
        return sum(r.holds for r in self.records) / len(self.records) if self.records else 1.0

    def invariant_failures(self) -> int:
        return sum(1 for r in self.records if r.invariants not in (None, "pass"))

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.budget_violations == 0 and self.invariant_failures() == 0

    def summary(self) -> dict[str, Any]:
        return {
            "games": len(self.records),
            "max_regret": self.max_regret,
            "success_rate": self.success_rate,
            "failures": self.failures,
            "budget_violations": self.budget_violations,
            "invariant_failures": self.invariant_failures(),
            "step_histogram": self.step_histogram(),
        }

    def to_json(self) -> str:
        doc = {
            "algorithm": self.algorithm,
            "generator": self.generator,
            "params": self.params,
            "summary": self.summary(),
            "records": [r.to_dict() for r in self.records],
        }
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["index", "seed", "n", "step", "claimed_eps", "regret", "holds", "bits", "queries", "invariants"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.records:
            d = r.to_dict()
            w.writerow(["" if d[c] is None else d[c] for c in cols])
        return buf.getvalue()


def run_suite(spec: GeneratorSpec, algorithm: str, params: RunParams = RunParams()) -> RunReport:
    """Run ``algorithm`` over every game of ``spec``; failures are recorded, not raised."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    pdict = {"z": params.z, "eps": params.eps, "seed": params.seed, "force_sampling": params.force_sampling}
    report = RunReport(algorithm, spec.label(), pdict)
    for idx, s in enumerate(derive_seeds(spec.seed, spec.count)):
        game = generate_one(spec, s)
        run_seed = s ^ (params.seed & MASK64)
        t0 = time.perf_counter()
        try:
            res = run_one(game, algorithm, params, run_seed)
            res.pop("profile")
            err = None
        except Exception as e:  # recorded, the batch keeps going
            res = dict(step="Error", claimed_eps=float("nan"), measure="", row_regret=float("nan"),
                       col_regret=float("nan"), row_pure_regret=float("nan"), col_pure_regret=float("nan"),
                       regret=float("nan"), holds=False)
            err = f"{type(e).__name__}: {e}"
        wall = time.perf_counter() - t0 if params.timing else None
        report.records.append(
            RunRecord(index=idx, generator=spec.label(), seed=s, algorithm=algorithm, n=game.n,
                      error=err, wall_time=wall, **res)
        )
    return report


def load_suite_spec(text: str) -> tuple[GeneratorSpec, str, RunParams]:
    """Parse a JSON suite file: {"generator": {...}, "algorithm": ..., "params": {...}}."""
    doc = json.loads(text)
    spec = GeneratorSpec(**doc["generator"])
    params = RunParams(**doc.get("params", {}))
    return spec, doc["algorithm"], params
