"""Declarative constraint templates: checking, measuring, and minimization.

Nine templates are supported. Checking is activation-based: every occurrence
of the activation activity is one activation, and each activation is either
satisfied or not. Support is satisfied/activations within a sub-log (1 when
nothing is activated); confidence scales support by the fraction of traces
that contain an activation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._kernel import log_tensors
from .log import EventLog, Trace
from .windows import SubLogWindow


class Template(str, enum.Enum):
    # declaration order is the canonical enumeration order
    AT_MOST_ONE = "AtMostOne"
    RESPONSE = "Response"
    ALTERNATE_RESPONSE = "AlternateResponse"
    CHAIN_RESPONSE = "ChainResponse"
    PRECEDENCE = "Precedence"
    ALTERNATE_PRECEDENCE = "AlternatePrecedence"
    CHAIN_PRECEDENCE = "ChainPrecedence"
    SUCCESSION = "Succession"
    NOT_SUCCESSION = "NotSuccession"


ALL_TEMPLATES: tuple[Template, ...] = tuple(Template)
UNARY_TEMPLATES = frozenset({Template.AT_MOST_ONE})

# activation activity: 'a' (first param), 'b' (second), or both sides
_ACTIVATION = {
    Template.AT_MOST_ONE: "a",
    Template.RESPONSE: "a",
    Template.ALTERNATE_RESPONSE: "a",
    Template.CHAIN_RESPONSE: "a",
    Template.PRECEDENCE: "b",
    Template.ALTERNATE_PRECEDENCE: "b",
    Template.CHAIN_PRECEDENCE: "b",
    Template.SUCCESSION: "both",
    Template.NOT_SUCCESSION: "a",
}

_CATEGORY = {
    Template.CHAIN_RESPONSE: "immediate",
    Template.CHAIN_PRECEDENCE: "immediate",
    Template.NOT_SUCCESSION: "negated",
}

CATEGORY_COLORS = {"immediate": "#1b9e43", "eventual": "#1f77b4", "negated": "#d62728"}

# direct stricter-than edges; closure below
_STRICTER = {
    Template.CHAIN_RESPONSE: (Template.ALTERNATE_RESPONSE,),
    Template.ALTERNATE_RESPONSE: (Template.RESPONSE,),
    Template.CHAIN_PRECEDENCE: (Template.ALTERNATE_PRECEDENCE,),
    Template.ALTERNATE_PRECEDENCE: (Template.PRECEDENCE,),
    Template.SUCCESSION: (Template.RESPONSE, Template.PRECEDENCE),
}


def _closure() -> dict[Template, frozenset[Template]]:
    out = {}
    for kind in Template:
        seen: set[Template] = set()
        stack = list(_STRICTER.get(kind, ()))
        while stack:
            k = stack.pop()
            if k not in seen:
                seen.add(k)
                stack.extend(_STRICTER.get(k, ()))
        out[kind] = frozenset(seen)
    return out


SUBSUMES = _closure()  # kind -> every weaker kind it implies


def template_category(kind: Template) -> str:
    return _CATEGORY.get(kind, "eventual")


@dataclass(frozen=True, order=True)
class Constraint:
    kind: Template
    a: str
    b: str | None = None

    def __post_init__(self):
        if self.kind in UNARY_TEMPLATES:
            if self.b is not None:
                raise ValueError(f"{self.kind.value} takes a single activity")
        elif self.b is None or self.b == self.a:
            raise ValueError(f"{self.kind.value} needs two distinct activities")

    @property
    def activation(self) -> str:
        side = _ACTIVATION[self.kind]
        return self.a if side in ("a", "both") else self.b

    @property
    def category(self) -> str:
        return template_category(self.kind)

    def label(self) -> str:
        if self.b is None:
            return f"{self.kind.value}({self.a})"
        return f"{self.kind.value}({self.a}, {self.b})"

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "a": self.a, "b": self.b}

    @classmethod
    def from_json(cls, d: dict) -> "Constraint":
        return cls(Template(d["kind"]), d["a"], d.get("b"))


@dataclass(frozen=True)
class ConstraintStats:
    activations: int
    satisfied: int
    traces_with_activation: int
    n_traces: int

    @property
    def support(self) -> Fraction:
        if self.activations == 0:
            return Fraction(1)  # vacuously satisfied
        return Fraction(self.satisfied, self.activations)

    @property
    def confidence(self) -> Fraction:
        if self.n_traces == 0:
            return Fraction(0)
        return self.support * Fraction(self.traces_with_activation, self.n_traces)


def enumerate_constraints(
    alphabet: Sequence[str], kinds: Iterable[Template] = ALL_TEMPLATES
) -> list[Constraint]:
    """All constraints over the alphabet, in (kind, a, b) lexicographic order."""
    acts = sorted(alphabet)
    out: list[Constraint] = []
    for kind in ALL_TEMPLATES:
        if kind not in kinds:
            continue
        if kind in UNARY_TEMPLATES:
            out.extend(Constraint(kind, a) for a in acts)
        else:
            out.extend(
                Constraint(kind, a, b) for a in acts for b in acts if b != a
            )
    return out


def _encode(traces: Sequence[Trace], alphabet: Sequence[str]):
    index = {act: i for i, act in enumerate(alphabet)}
    codes = np.empty(sum(len(t) for t in traces), np.int32)
    offsets = np.zeros(len(traces) + 1, np.int64)
    pos = 0
    for i, t in enumerate(traces):
        for e in t.events:
            codes[pos] = index[e.activity]
            pos += 1
        offsets[i + 1] = pos
    return codes, offsets


class LogStats:
    """Per-trace constraint tensors with prefix sums for O(1) window totals."""

    def __init__(self, log: EventLog):
        self.alphabet = log.alphabet
        self.index = {act: i for i, act in enumerate(self.alphabet)}
        codes, offsets = _encode(log.traces, self.alphabet)
        counts, chain, resp, altresp, prec, altprec = log_tensors(
            codes, offsets, len(self.alphabet)
        )
        self.trace_counts = counts
        zeros2 = np.zeros((1,) + counts.shape[1:], np.int64)
        zeros3 = np.zeros((1,) + chain.shape[1:], np.int64)

        def csum2(arr):
            return np.concatenate([zeros2, np.cumsum(arr, axis=0)])

        def csum3(arr):
            return np.concatenate([zeros3, np.cumsum(arr, axis=0)])

        self.c_counts = csum2(counts)
        self.c_present = csum2((counts > 0).astype(np.int64))
        self.c_exactly_one = csum2((counts == 1).astype(np.int64))
        self.c_chain = csum3(chain)
        self.c_resp = csum3(resp)
        self.c_altresp = csum3(altresp)
        self.c_prec = csum3(prec)
        self.c_altprec = csum3(altprec)
        either = (counts[:, :, None] > 0) | (counts[:, None, :] > 0)
        self.c_either = csum3(either.astype(np.int64))

    def window_totals(self, first: int, last: int) -> dict[str, np.ndarray]:
        """Aggregate tensors over traces first..last inclusive."""
        lo, hi = first, last + 1
        return {
            "counts": self.c_counts[hi] - self.c_counts[lo],
            "present": self.c_present[hi] - self.c_present[lo],
            "exactly_one": self.c_exactly_one[hi] - self.c_exactly_one[lo],
            "chain": self.c_chain[hi] - self.c_chain[lo],
            "resp": self.c_resp[hi] - self.c_resp[lo],
            "altresp": self.c_altresp[hi] - self.c_altresp[lo],
            "prec": self.c_prec[hi] - self.c_prec[lo],
            "altprec": self.c_altprec[hi] - self.c_altprec[lo],
            "either": self.c_either[hi] - self.c_either[lo],
        }


def _stat_triple(c: Constraint, tot: dict[str, np.ndarray], index: dict[str, int]):
    """(activations, satisfied, traces_with_activation) from window totals."""
    ia = index.get(c.a)
    ib = index.get(c.b) if c.b is not None else None
    counts, present = tot["counts"], tot["present"]
    k = c.kind
    if k is Template.AT_MOST_ONE:
        if ia is None:
            return 0, 0, 0
        return int(counts[ia]), int(tot["exactly_one"][ia]), int(present[ia])
    if ia is None and ib is None:
        return 0, 0, 0  # neither activity occurs anywhere in the log
    if ia is None or ib is None:
        # one side never occurs; the present side still generates activations,
        # vacuously satisfied only for the negated template
        if k is Template.SUCCESSION:
            j = ia if ib is None else ib
            return int(counts[j]), 0, int(present[j])
        if k in (
            Template.RESPONSE,
            Template.ALTERNATE_RESPONSE,
            Template.CHAIN_RESPONSE,
        ):
            if ia is None:
                return 0, 0, 0
            return int(counts[ia]), 0, int(present[ia])
        if k is Template.NOT_SUCCESSION:
            if ia is None:
                return 0, 0, 0
            return int(counts[ia]), int(counts[ia]), int(present[ia])
        if ib is None:
            return 0, 0, 0
        return int(counts[ib]), 0, int(present[ib])
    if k is Template.RESPONSE:
        return int(counts[ia]), int(tot["resp"][ia, ib]), int(present[ia])
    if k is Template.ALTERNATE_RESPONSE:
        return int(counts[ia]), int(tot["altresp"][ia, ib]), int(present[ia])
    if k is Template.CHAIN_RESPONSE:
        return int(counts[ia]), int(tot["chain"][ia, ib]), int(present[ia])
    if k is Template.PRECEDENCE:
        return int(counts[ib]), int(tot["prec"][ia, ib]), int(present[ib])
    if k is Template.ALTERNATE_PRECEDENCE:
        return int(counts[ib]), int(tot["altprec"][ia, ib]), int(present[ib])
    if k is Template.CHAIN_PRECEDENCE:
        return int(counts[ib]), int(tot["chain"][ia, ib]), int(present[ib])
    if k is Template.SUCCESSION:
        act = int(counts[ia]) + int(counts[ib])
        sat = int(tot["resp"][ia, ib]) + int(tot["prec"][ia, ib])
        return act, sat, int(tot["either"][ia, ib])
    if k is Template.NOT_SUCCESSION:
        return int(counts[ia]), int(counts[ia]) - int(tot["resp"][ia, ib]), int(present[ia])
    raise ValueError(f"unknown template {k!r}")


def check_trace(c: Constraint, trace: Trace) -> tuple[int, int]:
    """(activations, satisfied) for a single constraint on a single trace."""
    acts = trace.activities()
    alphabet = sorted(set(acts) | {c.a} | ({c.b} if c.b is not None else set()))
    index = {act: i for i, act in enumerate(alphabet)}
    codes = np.array([index[x] for x in acts], np.int32)
    offsets = np.array([0, len(codes)], np.int64)
    counts, chain, resp, altresp, prec, altprec = log_tensors(
        codes, offsets, len(alphabet)
    )
    tot = {
        "counts": counts[0],
        "present": (counts[0] > 0).astype(np.int64),
        "exactly_one": (counts[0] == 1).astype(np.int64),
        "chain": chain[0],
        "resp": resp[0],
        "altresp": altresp[0],
        "prec": prec[0],
        "altprec": altprec[0],
        "either": ((counts[0][:, None] > 0) | (counts[0][None, :] > 0)).astype(np.int64),
    }
    act, sat, _ = _stat_triple(c, tot, index)
    return act, sat


def measure(
    c: Constraint,
    log: EventLog,
    window: SubLogWindow | None = None,
    stats: LogStats | None = None,
) -> ConstraintStats:
    """Exact-rational constraint statistics over a window (default: whole log)."""
    if stats is None:
        stats = LogStats(log)
    if window is None:
        first, last = 0, len(log) - 1
    else:
        first, last = window.first, window.last
    tot = stats.window_totals(first, last)
    act, sat, twa = _stat_triple(c, tot, stats.index)
    return ConstraintStats(
        activations=act,
        satisfied=sat,
        traces_with_activation=twa,
        n_traces=last - first + 1,
    )


@dataclass
class ConfidenceMatrix:
    constraints: list[Constraint]
    windows: list[SubLogWindow]
    values: np.ndarray  # shape (len(constraints), len(windows)), float64 in [0, 1]

    @property
    def row_labels(self) -> list[str]:
        return [c.label() for c in self.constraints]


def confidence_matrix(
    log: EventLog,
    windows: Sequence[SubLogWindow],
    kinds: Iterable[Template] = ALL_TEMPLATES,
    constraints: Sequence[Constraint] | None = None,
    stats: LogStats | None = None,
) -> ConfidenceMatrix:
    """Constraint-by-window confidence matrix (floats; rationals stay in measure)."""
    if stats is None:
        stats = LogStats(log)
    if constraints is None:
        constraints = enumerate_constraints(log.alphabet, kinds)
    a = len(stats.alphabet)
    idx = stats.index
    values = np.zeros((len(constraints), len(windows)), np.float64)

    for w, win in enumerate(windows):
        tot = stats.window_totals(win.first, win.last)
        n = win.size
        counts = tot["counts"].astype(np.float64)
        present = tot["present"].astype(np.float64)

        def conf(act, sat, twa):
            support = np.where(act > 0, sat / np.maximum(act, 1), 1.0)
            return support * (twa / n)

        per_kind: dict[Template, np.ndarray] = {}
        for kind in set(c.kind for c in constraints):
            if kind is Template.AT_MOST_ONE:
                per_kind[kind] = conf(counts, tot["exactly_one"].astype(float), present)
            elif kind is Template.RESPONSE:
                per_kind[kind] = conf(counts[:, None], tot["resp"], present[:, None])
            elif kind is Template.ALTERNATE_RESPONSE:
                per_kind[kind] = conf(counts[:, None], tot["altresp"], present[:, None])
            elif kind is Template.CHAIN_RESPONSE:
                per_kind[kind] = conf(counts[:, None], tot["chain"], present[:, None])
            elif kind is Template.PRECEDENCE:
                per_kind[kind] = conf(counts[None, :], tot["prec"], present[None, :])
            elif kind is Template.ALTERNATE_PRECEDENCE:
                per_kind[kind] = conf(counts[None, :], tot["altprec"], present[None, :])
            elif kind is Template.CHAIN_PRECEDENCE:
                per_kind[kind] = conf(counts[None, :], tot["chain"], present[None, :])
            elif kind is Template.SUCCESSION:
                act = counts[:, None] + counts[None, :]
                sat = tot["resp"] + tot["prec"]
                per_kind[kind] = conf(act, sat, tot["either"].astype(float))
            elif kind is Template.NOT_SUCCESSION:
                sat = counts[:, None] - tot["resp"]
                per_kind[kind] = conf(counts[:, None], sat, present[:, None])

        for r, c in enumerate(constraints):
            grid = per_kind[c.kind]
            if c.kind in UNARY_TEMPLATES:
                values[r, w] = grid[idx[c.a]]
            else:
                values[r, w] = grid[idx[c.a], idx[c.b]]

    return ConfidenceMatrix(list(constraints), list(windows), values)


def minimize_constraints(
    items: Sequence[tuple[Constraint, float]], threshold: float = 0.9
) -> list[tuple[Constraint, float]]:
    """Keep only the strictest constraint per activity pair that clears the threshold.

    A constraint is kept when its confidence is >= threshold and no strictly
    stricter constraint on the same (a, b) pair also clears it.
    """
    passing = {
        (c.kind, c.a, c.b): conf for c, conf in items if conf >= threshold
    }
    kept = []
    for c, conf in items:
        if conf < threshold:
            continue
        shadowed = any(
            (strict, c.a, c.b) in passing
            for strict in Template
            if c.kind in SUBSUMES.get(strict, ())
        )
        if not shadowed:
            kept.append((c, conf))
    return kept


def constraints_to_csv(rows: Sequence[dict]) -> str:
    """CSV export of per-cluster minimized constraints with confidence stats."""
    header = "cluster,template,activity1,activity2,min,max,mean"
    lines = [header]
    for r in rows:
        b = r["b"] if r["b"] is not None else ""
        lines.append(
            f'{r["cluster"]},{r["template"]},{_csv_quote(r["a"])},{_csv_quote(b)},'
            f'{r["min"]:.4f},{r["max"]:.4f},{r["mean"]:.4f}'
        )
    return "\n".join(lines) + "\n"


def _csv_quote(s: str) -> str:
    if any(ch in s for ch in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s
