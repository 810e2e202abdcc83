"""The sample-check-resample engine.

Every randomized existence argument in the pipeline runs through here: draw a
random structure, evaluate explicit bad-event predicates, and restart (or
resample only the failed events' scopes) until none holds or the round budget
runs out. The engine is a search, not a proof: event probability bounds are
recorded as metadata and never enforced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Generic, Hashable, TypeVar

from .errors import PreconditionError

S = TypeVar("S")


@dataclass(frozen=True)
class BadEvent(Generic[S]):
    """A deterministic predicate over the drawn structure; True means bad.

    `scope` lists the random-variable labels the event depends on; it drives
    scoped resampling. `p_bound` and `dep_degree` are optional bookkeeping
    (the probability and dependency-degree of the underlying concentration
    argument) and are carried into certificates untouched.
    """

    id: str
    predicate: Callable[[S], bool]
    scope: tuple[Hashable, ...] = ()
    p_bound: float | None = None
    dep_degree: int | None = None


@dataclass
class ResamplePolicy:
    mode: str = "full-restart"  # or "scoped-resample"
    max_rounds: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("full-restart", "scoped-resample"):
            raise PreconditionError(f"unknown resample mode {self.mode!r}")
        if self.max_rounds < 1:
            raise PreconditionError("max_rounds must be >= 1")


@dataclass
class EngineCertificate:
    success: bool
    rounds: int
    failures_per_round: list[list[str]]
    surviving: list[str] = field(default_factory=list)
    mode: str = "full-restart"
    seed: int = 0

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "rounds": self.rounds,
            "failures_per_round": self.failures_per_round,
            "surviving": list(self.surviving),
            "mode": self.mode,
            "seed": self.seed,
        }


@dataclass
class EngineResult(Generic[S]):
    structure: S
    certificate: EngineCertificate

    @property
    def ok(self) -> bool:
        return self.certificate.success


class Sampler(Generic[S]):
    """Protocol-ish base: full draws always, scoped redraws optionally."""

    def sample(self, rng: random.Random) -> S:
        raise NotImplementedError

    def resample(self, rng: random.Random, prev: S, scopes: set[Hashable]) -> S:
        raise NotImplementedError("sampler does not support scoped resampling")


class FunctionSampler(Sampler[S]):
    def __init__(
        self,
        sample: Callable[[random.Random], S],
        resample: Callable[[random.Random, S, set[Hashable]], S] | None = None,
    ):
        self._sample = sample
        self._resample = resample

    def sample(self, rng: random.Random) -> S:
        return self._sample(rng)

    def resample(self, rng: random.Random, prev: S, scopes: set[Hashable]) -> S:
        if self._resample is None:
            return self._sample(rng)
        return self._resample(rng, prev, scopes)


def round_rng(seed: int, round_index: int, label: str = "engine") -> random.Random:
    """Deterministic per-round RNG; string seeding is stable across platforms."""
    return random.Random(f"{label}:{seed}:{round_index}")


def run_until_good(
    sampler: Sampler[S] | Callable[[random.Random], S],
    events: list[BadEvent[S]],
    policy: ResamplePolicy,
    label: str = "engine",
) -> EngineResult[S]:
    """Draw, check all events, resample until clean or out of rounds.

    On success the structure is re-checked against every event before being
    returned. On exhaustion the best attempt (fewest failures) is returned
    with `certificate.success == False` and the surviving event ids; callers
    decide whether to relax thresholds.
    """
    if not isinstance(sampler, Sampler):
        sampler = FunctionSampler(sampler)
    ids = [e.id for e in events]
    if len(set(ids)) != len(ids):
        raise PreconditionError("bad event ids must be unique")

    failures_log: list[list[str]] = []
    best: S | None = None
    best_failed: list[str] | None = None
    structure: S | None = None

    for rnd in range(1, policy.max_rounds + 1):
        rng = round_rng(policy.seed, rnd, label)
        if structure is None or policy.mode == "full-restart":
            structure = sampler.sample(rng)
        else:
            scopes: set[Hashable] = set()
            for eid in failures_log[-1]:
                ev = next(e for e in events if e.id == eid)
                scopes.update(ev.scope)
            structure = sampler.resample(rng, structure, scopes)

        failed = [e.id for e in events if e.predicate(structure)]
        failures_log.append(failed)
        if best_failed is None or len(failed) < len(best_failed):
            best, best_failed = structure, failed
        if not failed:
            # soundness: never report a structure that was not re-verified
            recheck = [e.id for e in events if e.predicate(structure)]
            if recheck:
                raise PreconditionError(
                    f"non-deterministic event predicates: {recheck}"
                )
            cert = EngineCertificate(
                True, rnd, failures_log, [], policy.mode, policy.seed
            )
            return EngineResult(structure, cert)

    assert best is not None and best_failed is not None
    cert = EngineCertificate(
        False, policy.max_rounds, failures_log, best_failed, policy.mode, policy.seed
    )
    return EngineResult(best, cert)


def race_until_good(
    make_sampler: Callable[[int], Sampler[S] | Callable[[random.Random], S]],
    events: list[BadEvent[S]],
    policy: ResamplePolicy,
    seeds: list[int],
    label: str = "engine",
) -> EngineResult[S]:
    """Restart racing: the winner is the lowest seed that succeeds.

    Sequential evaluation in seed order gives the same winner a parallel race
    would, keeping the result deterministic.
    """
    best: EngineResult[S] | None = None
    for s in sorted(seeds):
        p = ResamplePolicy(policy.mode, policy.max_rounds, s)
        res = run_until_good(make_sampler(s), events, p, label)
        if res.ok:
            return res
        if best is None or len(res.certificate.surviving) < len(
            best.certificate.surviving
        ):
            best = res
    assert best is not None
    return best
