"""Multiparty scenarios and exact-rational correlations.

Canonical ordering used everywhere (files, LP columns, facet coefficients):
input vectors are enumerated lexicographically with party 1 most
significant, and for each input vector the allowed output vectors are
enumerated lexicographically.  The parameter vector of a correlation keeps,
for every input vector, all allowed outputs except the lexicographically
last one, which is fixed by normalisation.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class PartySpec:
    """One party: ``outputs[x]`` is the number of outputs on input ``x``."""

    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(int(o) for o in self.outputs))
        if not self.outputs:
            raise ValueError("a party needs at least one input value")
        if any(o < 1 for o in self.outputs):
            raise ValueError(f"every input needs at least one output, got {self.outputs}")

    @property
    def input_count(self) -> int:
        return len(self.outputs)

    @property
    def is_lazy(self) -> bool:
        return self.outputs == (1, 2)


LAZY_PARTY = PartySpec((1, 2))


@dataclass(frozen=True)
class Scenario:
    parties: tuple[PartySpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "parties", tuple(self.parties))
        if not self.parties:
            raise ValueError("a scenario needs at least one party")

    @property
    def n(self) -> int:
        return len(self.parties)

    @cached_property
    def is_lazy(self) -> bool:
        return all(p.is_lazy for p in self.parties)

    @cached_property
    def inputs(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(p.input_count) for p in self.parties)))

    @cached_property
    def input_index(self) -> dict[tuple[int, ...], int]:
        return {x: i for i, x in enumerate(self.inputs)}

    def outputs_for(self, x: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        return self.allowed_outputs[self.input_index[tuple(x)]]

    @cached_property
    def allowed_outputs(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        return tuple(
            tuple(itertools.product(*(range(p.outputs[xk]) for p, xk in zip(self.parties, x))))
            for x in self.inputs
        )

    @cached_property
    def output_index(self) -> tuple[dict[tuple[int, ...], int], ...]:
        return tuple({a: j for j, a in enumerate(outs)} for outs in self.allowed_outputs)

    @cached_property
    def table_size(self) -> int:
        return sum(len(o) for o in self.allowed_outputs)

    @cached_property
    def param_offsets(self) -> tuple[int, ...]:
        """Start of each input block inside the parameter vector."""
        offs, pos = [], 0
        for outs in self.allowed_outputs:
            offs.append(pos)
            pos += len(outs) - 1
        return tuple(offs)

    @cached_property
    def dimension(self) -> int:
        return sum(len(o) - 1 for o in self.allowed_outputs)

    def param_index(self, x: Sequence[int], a: Sequence[int]) -> int | None:
        """Coordinate of P(a|x) in the parameter vector, None for the dropped outcome."""
        xi = self.input_index[tuple(x)]
        j = self.output_index[xi][tuple(a)]
        if j == len(self.allowed_outputs[xi]) - 1:
            return None
        return self.param_offsets[xi] + j

    @cached_property
    def param_labels(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        return tuple(
            (x, a)
            for x, outs in zip(self.inputs, self.allowed_outputs)
            for a in outs[:-1]
        )

    def to_json(self) -> dict:
        return {"parties": [{"inputs": p.input_count, "outputs": list(p.outputs)} for p in self.parties]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Scenario":
        parties = []
        for p in data["parties"]:
            outs = tuple(p["outputs"])
            if "inputs" in p and int(p["inputs"]) != len(outs):
                raise ValueError(f"party declares {p['inputs']} inputs but lists {len(outs)} output counts")
            parties.append(PartySpec(outs))
        return cls(tuple(parties))


def make_lazy_scenario(n: int) -> Scenario:
    """n parties, binary input; input 0 has the single output 0, input 1 a binary output."""
    if n < 1:
        raise ValueError(f"need at least one party, got n={n}")
    return Scenario((LAZY_PARTY,) * n)


def correlation_dimension(s: Scenario) -> int:
    return s.dimension


def lazy_dimension_formula(n: int) -> int:
    return sum(comb(n, w) * (2 ** w - 1) for w in range(n + 1))


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floating point probabilities are not accepted; use Fraction or 'num/den' strings")
    return Fraction(v)


@dataclass(frozen=True)
class Correlation:
    """Conditional distribution P(a|x); ``table[i][j]`` = P(allowed_outputs[i][j] | inputs[i])."""

    scenario: Scenario
    table: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        table = tuple(tuple(_frac(v) for v in block) for block in self.table)
        object.__setattr__(self, "table", table)
        self.check()

    def check(self) -> None:
        s = self.scenario
        if len(self.table) != len(s.inputs):
            raise ValueError(f"expected {len(s.inputs)} input blocks, got {len(self.table)}")
        for x, outs, block in zip(s.inputs, s.allowed_outputs, self.table):
            if len(block) != len(outs):
                raise ValueError(f"input {x}: expected {len(outs)} entries, got {len(block)}")
            if any(v < 0 for v in block):
                raise ValueError(f"input {x}: negative probability")
            if sum(block) != 1:
                raise ValueError(f"input {x}: probabilities sum to {sum(block)}, not 1")

    def prob(self, a: Sequence[int], x: Sequence[int]) -> Fraction:
        xi = self.scenario.input_index[tuple(x)]
        j = self.scenario.output_index[xi].get(tuple(a))
        return Fraction(0) if j is None else self.table[xi][j]

    def marginal(self, parties: Iterable[int], a_sub: Sequence[int], x: Sequence[int]) -> Fraction:
        """P(a_K = a_sub | x) for the party subset K (in the given order)."""
        parties = tuple(parties)
        xi = self.scenario.input_index[tuple(x)]
        total = Fraction(0)
        for a, p in zip(self.scenario.allowed_outputs[xi], self.table[xi]):
            if all(a[k] == v for k, v in zip(parties, a_sub)):
                total += p
        return total

    def marginal_table(self, parties: Iterable[int], x: Sequence[int]) -> dict[tuple[int, ...], Fraction]:
        parties = tuple(parties)
        xi = self.scenario.input_index[tuple(x)]
        out: dict[tuple[int, ...], Fraction] = {}
        for a, p in zip(self.scenario.allowed_outputs[xi], self.table[xi]):
            key = tuple(a[k] for k in parties)
            out[key] = out.get(key, Fraction(0)) + p
        return {k: v for k, v in out.items() if v != 0}

    def mix(self, other: "Correlation", weight: Fraction) -> "Correlation":
        """``weight * self + (1 - weight) * other``."""
        if other.scenario != self.scenario:
            raise ValueError("cannot mix correlations from different scenarios")
        w = _frac(weight)
        return Correlation(
            self.scenario,
            tuple(tuple(w * p + (1 - w) * q for p, q in zip(b1, b2)) for b1, b2 in zip(self.table, other.table)),
        )

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario.to_json(),
            "table": [[f"{v.numerator}/{v.denominator}" for v in block] for block in self.table],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Correlation":
        s = Scenario.from_json(data["scenario"])
        return cls(s, tuple(tuple(Fraction(str(v)) for v in block) for block in data["table"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def uniform_correlation(s: Scenario) -> Correlation:
    return Correlation(s, tuple(tuple(Fraction(1, len(o)) for _ in o) for o in s.allowed_outputs))


def mixture(correlations: Sequence[Correlation], weights: Sequence | None = None) -> Correlation:
    if not correlations:
        raise ValueError("empty mixture")
    s = correlations[0].scenario
    if weights is None:
        weights = [Fraction(1, len(correlations))] * len(correlations)
    weights = [_frac(w) for w in weights]
    if sum(weights) != 1 or any(w < 0 for w in weights):
        raise ValueError("mixture weights must be nonnegative and sum to 1")
    table = []
    for i in range(len(s.inputs)):
        block = [Fraction(0)] * len(s.allowed_outputs[i])
        for c, w in zip(correlations, weights):
            if c.scenario != s:
                raise ValueError("cannot mix correlations from different scenarios")
            for j, v in enumerate(c.table[i]):
                block[j] += w * v
        table.append(tuple(block))
    return Correlation(s, tuple(table))


@dataclass(frozen=True)
class DetCorrelation:
    """Deterministic correlation: ``response[i]`` is the output vector on ``inputs[i]``."""

    scenario: Scenario
    response: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        resp = tuple(tuple(int(v) for v in a) for a in self.response)
        object.__setattr__(self, "response", resp)
        s = self.scenario
        if len(resp) != len(s.inputs):
            raise ValueError(f"expected {len(s.inputs)} responses, got {len(resp)}")
        for i, a in enumerate(resp):
            if a not in s.output_index[i]:
                raise ValueError(f"output {a} not allowed on input {s.inputs[i]}")

    @classmethod
    def from_function(cls, s: Scenario, f) -> "DetCorrelation":
        return cls(s, tuple(tuple(f(x)) for x in s.inputs))

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.response[self.scenario.input_index[tuple(x)]]

    def to_correlation(self) -> Correlation:
        s = self.scenario
        return Correlation(
            s,
            tuple(
                tuple(Fraction(int(b == a)) for b in outs)
                for a, outs in zip(self.response, s.allowed_outputs)
            ),
        )

    def parameter_vector(self) -> tuple[int, ...]:
        s = self.scenario
        vec = [0] * s.dimension
        for i, a in enumerate(self.response):
            j = s.output_index[i][a]
            if j < len(s.allowed_outputs[i]) - 1:
                vec[s.param_offsets[i] + j] = 1
        return tuple(vec)

    def table_key(self) -> tuple[int, ...]:
        """Output index per input; the sort key for canonical vertex order."""
        s = self.scenario
        return tuple(s.output_index[i][a] for i, a in enumerate(self.response))

    def line(self) -> str:
        sep = "" if all(o <= 10 for p in self.scenario.parties for o in p.outputs) else ","
        return " ".join(sep.join(str(v) for v in a) for a in self.response)

    @classmethod
    def from_line(cls, s: Scenario, line: str) -> "DetCorrelation":
        parts = line.split()
        resp = [tuple(int(v) for v in (p.split(",") if "," in p else p)) for p in parts]
        return cls(s, tuple(resp))


def to_parameter_vector(p: Correlation | DetCorrelation) -> tuple[Fraction, ...]:
    if isinstance(p, DetCorrelation):
        return tuple(Fraction(v) for v in p.parameter_vector())
    return tuple(v for block in p.table for v in block[:-1])


def from_parameter_vector(s: Scenario, vec: Sequence) -> Correlation:
    if len(vec) != s.dimension:
        raise ValueError(f"expected parameter vector of length {s.dimension}, got {len(vec)}")
    table = []
    for off, outs in zip(s.param_offsets, s.allowed_outputs):
        free = [_frac(v) for v in vec[off:off + len(outs) - 1]]
        table.append(tuple(free) + (1 - sum(free, Fraction(0)),))
    return Correlation(s, tuple(table))


# ---------------------------------------------------------------------------
# Lazy-scenario bitmask encoding shared with the compiled kernels.
#
# Inputs and outputs are integers with party 1 as the most significant bit,
# so numeric order coincides with the canonical lexicographic order.  A
# deterministic response is packed as  sum_x a(x) << (n * x).

def lazy_x_int(x: Sequence[int]) -> int:
    v = 0
    for b in x:
        v = (v << 1) | b
    return v


def lazy_bits(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> (n - 1 - k)) & 1 for k in range(n))


def det_to_mask(d: DetCorrelation) -> int:
    s = d.scenario
    if not s.is_lazy:
        raise ValueError("bitmask encoding is only defined for lazy scenarios")
    n = s.n
    mask = 0
    for x, a in zip(s.inputs, d.response):
        mask |= lazy_x_int(a) << (n * lazy_x_int(x))
    return mask


def mask_to_det(s: Scenario, mask: int) -> DetCorrelation:
    n = s.n
    full = (1 << n) - 1
    return DetCorrelation(
        s, tuple(lazy_bits((mask >> (n * lazy_x_int(x))) & full, n) for x in s.inputs)
    )


def lazy_output_rank(a: int, x: int) -> int:
    """Position of output ``a`` among the submasks of ``x`` in increasing order."""
    r, bit = 0, 0
    k = 0
    while x >> k:
        if (x >> k) & 1:
            if (a >> k) & 1:
                r |= 1 << bit
            bit += 1
        k += 1
    return r


def count_deterministic(s: Scenario) -> int:
    total = 1
    for outs in s.allowed_outputs:
        total *= len(outs)
    return total


def all_deterministic(s: Scenario):
    for resp in itertools.product(*s.allowed_outputs):
        yield DetCorrelation(s, resp)
