"""Pipeline configuration: a flat, diff-friendly key=value ledger.

Every knob the asymptotic arguments leave open at desk scale lives here and
is echoed verbatim into every report. The documented parameter ordering
(1/d << eta << p << 1/K << eps) is checked and reported as warnings, never
asserted.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path as FilePath

from .errors import ParseError


@dataclass
class PipelineConfig:
    eps: float = 0.3
    p: float | None = None  # None = scale rule (see pipeline.choose_p)
    eta_dense: float = 0.1  # dense-spot degree defect
    eta_sample: float = 1.0  # sample certificate band
    gamma: float = 0.95
    K: float = 2.0
    k: int = 4
    lam: float = 0.01
    mu: float = 0.4
    q: float = 0.05
    s_classes: int | None = None
    w_size: int | None = None
    split_count: int = 10
    matching_method: str = "peel"
    matching_slack: float = 0.05
    partition_eta: float = 0.95
    m_exp: float = 0.125
    delta0_exp: float = 0.999
    delta1_exp: float = 0.999
    path_cap_exp: float = 0.9
    spread_cap_exp: float = 0.95
    conn_quota_exp: float = 0.995
    route_quota_exp: float = 0.75
    engine_rounds: int = 200
    retry_budget: int = 200
    cleanup: bool = True

    def hierarchy_warnings(self, d: int) -> list[str]:
        """The paper's 1/d << eta << p << 1/K << eps chain, as a report check."""
        out = []
        p = self.p if self.p is not None else -1.0
        if 1.0 / max(d, 1) >= self.eta_dense:
            out.append(f"1/d = {1 / d:.4f} not << eta = {self.eta_dense}")
        if p > 0 and self.eta_dense >= p:
            out.append(f"eta = {self.eta_dense} not << p = {p}")
        if p > 0 and p >= 1.0 / self.K:
            out.append(f"p = {p} not << 1/K = {1 / self.K:.3f}")
        if 1.0 / self.K >= self.eps:
            out.append(f"1/K = {1 / self.K:.3f} not << eps = {self.eps}")
        return out

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_file(cls, path: str | FilePath) -> "PipelineConfig":
        text = FilePath(path).read_text(encoding="utf-8")
        return cls.from_text(text)

    @classmethod
    def from_text(cls, text: str) -> "PipelineConfig":
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError(f"expected key=value, got {line!r}", lineno)
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in known:
                raise ParseError(f"unknown config key {key!r}", lineno)
            kwargs[key] = _parse_value(value)
        return cls(**kwargs)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                lines.append(f"{f.name} = none")
            elif isinstance(v, bool):
                lines.append(f"{f.name} = {'true' if v else 'false'}")
            else:
                lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"


def _parse_value(value: str):
    low = value.lower()
    if low in ("none", "null"):
        return None
    if low in ("true", "yes"):
        return True
    if low in ("false", "no"):
        return False
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        pass
    return value
