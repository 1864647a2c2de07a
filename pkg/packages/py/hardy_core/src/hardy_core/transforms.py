"""Decreasing rearrangement and the atom-stretching transforms."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Literal

from .dist_core import (
    Atom,
    Distribution,
    PNormParam,
    Segment,
    StepFunction,
    as_pnorm,
    integrate,
    quantile_cells,
    require_monotone,
    require_nonnegative,
)
from .errors import DomainError, InputError, PreconditionError
from .functionals import hardy_lower_functional, hardy_tail_functional

logger = logging.getLogger(__name__)

StretchKind = Literal["up", "down"]

DEFAULT_UP_P = 2.0
DEFAULT_DOWN_P = 0.5


@dataclass(frozen=True)
class TransformOutput:
    """Transformed law and integrand.

    ``norm_*`` is the integral of |psi|^p dF, ``mean_*`` the integral of
    |psi| dF and ``functional_*`` the un-rooted Hardy functional of the kind
    (lower average for up, tail average for down).
    """

    dist: Distribution
    psi: StepFunction
    norm_before: float
    norm_after: float
    functional_before: float
    functional_after: float
    mean_before: float
    mean_after: float
    kind: StretchKind
    p: float
    steps: int = 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "p": self.p,
            "steps": self.steps,
            "dist": self.dist.to_dict(),
            "psi": self.psi.to_dict(),
            "norm_before": self.norm_before,
            "norm_after": self.norm_after,
            "functional_before": self.functional_before,
            "functional_after": self.functional_after,
            "mean_before": self.mean_before,
            "mean_after": self.mean_after,
        }


# Rearrangement -------------------------------------------------------------


def _unit_cells(chi: StepFunction) -> list[tuple[float, float, float]]:
    edges = [0.0] + [b for b in chi.breakpoints if 0.0 < b < 1.0] + [1.0]
    return [(s, t, chi.piece_value(s)) for s, t in zip(edges[:-1], edges[1:])]


def partial_average(chi: StepFunction, u: float) -> float:
    """(1/u) times the integral of chi over [0, u]."""
    if not 0.0 < u <= 1.0:
        raise DomainError(f"u must lie in (0, 1], got {u!r}.", field="u")
    total = math.fsum(
        value * (min(t, u) - s) for s, t, value in _unit_cells(chi) if s < u
    )
    return total / u


def unit_norm(chi: StepFunction, p: PNormParam | float) -> float:
    p_value = as_pnorm(p).p
    total = math.fsum(abs(value) ** p_value * (t - s) for s, t, value in _unit_cells(chi))
    return total ** (1.0 / p_value)


def decreasing_rearrangement(chi: StepFunction, p: PNormParam | float = 1.0) -> StepFunction:
    """Nonincreasing equimeasurable version of chi on [0, 1], zero outside.

    Value pieces are sorted descending and their lengths concatenated, which
    is G^{-1}(1 - u) for the law G of chi(U).
    """
    p_value = as_pnorm(p).p
    cells = _unit_cells(chi)
    for s, _, value in cells:
        if value < 0.0:
            raise DomainError(
                f"chi must be nonnegative on [0, 1]; found {value!r} at {s!r}.", field="psi"
            )
    ordered = sorted(cells, key=lambda cell: cell[2], reverse=True)

    breakpoints = [0.0]
    values = [0.0]
    lengths: list[float] = []
    for s, t, value in ordered:
        lengths.append(t - s)
        values.append(value)
        breakpoints.append(math.fsum(lengths))
    breakpoints[-1] = 1.0
    values.append(0.0)
    # Collapse zero-length steps left by rounding before building the function.
    kept_b: list[float] = []
    kept_v = [values[0]]
    for b, v in zip(breakpoints, values[1:]):
        if kept_b and not b > kept_b[-1]:
            kept_v[-1] = v
            continue
        kept_b.append(b)
        kept_v.append(v)
    result = StepFunction(tuple(kept_b), tuple(kept_v)).canonical()
    logger.debug(
        "rearranged %d pieces; norm %.17g -> %.17g",
        len(cells),
        unit_norm(chi, p_value),
        unit_norm(result, p_value),
    )
    return result


# Stretches -----------------------------------------------------------------


def _require_atom(d: Distribution, atom_location: float) -> Atom:
    atom = d.atom_at(atom_location)
    if atom is None:
        raise PreconditionError(
            f"The distribution has no atom at {atom_location!r}.", field="atom"
        )
    return atom


def _measures(
    d: Distribution, psi: StepFunction, p: float, kind: StretchKind
) -> tuple[float, float, float]:
    norm = integrate(d, psi, power=p, absolute=True).value
    mean = integrate(d, psi, absolute=True).value
    if kind == "up":
        functional = hardy_lower_functional(d, psi.abs(), p).value
    else:
        functional = hardy_tail_functional(quantile_cells(d, psi), p)
    return norm, mean, functional


def _build_output(
    kind: StretchKind,
    p: float,
    before: tuple[Distribution, StepFunction],
    after: tuple[Distribution, StepFunction],
    steps: int = 1,
) -> TransformOutput:
    norm_before, mean_before, functional_before = _measures(*before, p, kind)
    norm_after, mean_after, functional_after = _measures(*after, p, kind)
    return TransformOutput(
        dist=after[0],
        psi=after[1],
        norm_before=norm_before,
        norm_after=norm_after,
        functional_before=functional_before,
        functional_after=functional_after,
        mean_before=mean_before,
        mean_after=mean_after,
        kind=kind,
        p=p,
        steps=steps,
    )


def _step_from_pairs(
    first_value: float,
    pairs: list[tuple[float, float]],
    points: list[tuple[float, float]],
) -> StepFunction:
    return StepFunction(
        tuple(b for b, _ in pairs),
        (first_value, *(v for _, v in pairs)),
        tuple(points),
    ).canonical()


def _stretch_up_once(
    d: Distribution, psi: StepFunction, atom: Atom
) -> tuple[Distribution, StepFunction]:
    a, shift = atom.x, atom.mass
    atoms = [x for x in d.atoms if x.x < a] + [
        Atom(x.x + shift, x.mass) for x in d.atoms if x.x > a
    ]
    segments = (
        [s for s in d.segments if s.hi <= a]
        + [Segment(a, a + shift, shift)]
        + [Segment(s.lo + shift, s.hi + shift, s.mass) for s in d.segments if s.lo >= a]
    )
    stretched = Distribution(tuple(atoms), tuple(segments)).canonical()

    # psi(a) fills [a, a + shift); from a + shift on the shifted branch wins.
    pairs = [(b, psi.piece_value(b)) for b in psi.breakpoints if b < a]
    pairs.append((a, psi(a)))
    pairs.append((a + shift, psi.piece_value(a)))
    pairs.extend((b + shift, psi.piece_value(b)) for b in psi.breakpoints if b > a)
    points = [(x, v) for x, v in psi.points if x < a]
    points.extend((x + shift, v) for x, v in psi.points if x > a)
    return stretched, _step_from_pairs(psi.values[0], pairs, points)


def _stretch_down_once(
    d: Distribution, psi: StepFunction, atom: Atom
) -> tuple[Distribution, StepFunction]:
    a, shift = atom.x, atom.mass
    atoms = [Atom(x.x - shift, x.mass) for x in d.atoms if x.x < a] + [
        x for x in d.atoms if x.x > a
    ]
    segments = (
        [Segment(s.lo - shift, s.hi - shift, s.mass) for s in d.segments if s.hi <= a]
        + [Segment(a - shift, a, shift)]
        + [s for s in d.segments if s.lo >= a]
    )
    stretched = Distribution(tuple(atoms), tuple(segments)).canonical()

    pairs = [(b - shift, psi.piece_value(b)) for b in psi.breakpoints if b < a]
    pairs.append((a - shift, psi(a)))
    pairs.append((a, psi.piece_value(a)))
    pairs.extend((b, psi.piece_value(b)) for b in psi.breakpoints if b > a)
    points = [(x - shift, v) for x, v in psi.points if x < a]
    points.extend((x, v) for x, v in psi.points if x > a)
    return stretched, _step_from_pairs(psi.values[0], pairs, points)


def stretch_up(
    d: Distribution,
    psi: StepFunction,
    atom_location: float,
    p: PNormParam | float = DEFAULT_UP_P,
) -> TransformOutput:
    """Replace the atom at ``atom_location`` by a unit-density segment above it.

    Mass above the atom moves right by the atom's mass and psi follows it.
    """
    p_value = as_pnorm(p).require("gt1").p
    atom = _require_atom(d, atom_location)
    require_nonnegative(psi)
    require_monotone(d, psi, "nonincreasing")
    after = _stretch_up_once(d, psi, atom)
    logger.debug("stretch_up at %.17g (mass %.17g)", atom.x, atom.mass)
    return _build_output("up", p_value, (d, psi), after)


def stretch_down(
    d: Distribution,
    psi: StepFunction,
    atom_location: float,
    p: PNormParam | float = DEFAULT_DOWN_P,
) -> TransformOutput:
    """Replace the atom at ``atom_location`` by a unit-density segment below it.

    Mass below the atom moves left by the atom's mass and psi follows it.
    """
    p_value = as_pnorm(p).require("lt1").p
    atom = _require_atom(d, atom_location)
    require_nonnegative(psi)
    after = _stretch_down_once(d, psi, atom)
    logger.debug("stretch_down at %.17g (mass %.17g)", atom.x, atom.mass)
    return _build_output("down", p_value, (d, psi), after)


def de_atomize(
    d: Distribution,
    psi: StepFunction,
    kind: StretchKind,
    p: PNormParam | float | None = None,
) -> TransformOutput:
    """Stretch atoms away one at a time, always the lowest remaining one."""
    stretch_once: Callable[
        [Distribution, StepFunction, Atom], tuple[Distribution, StepFunction]
    ]
    if kind == "up":
        p_value = as_pnorm(DEFAULT_UP_P if p is None else p).require("gt1").p
        require_nonnegative(psi)
        require_monotone(d, psi, "nonincreasing")
        stretch_once = _stretch_up_once
    elif kind == "down":
        p_value = as_pnorm(DEFAULT_DOWN_P if p is None else p).require("lt1").p
        require_nonnegative(psi)
        stretch_once = _stretch_down_once
    else:
        raise InputError(f"Unknown stretch kind: {kind}", field="kind")

    current_d, current_psi = d, psi
    steps = 0
    while current_d.atoms:
        atom = current_d.atoms[0]
        current_d, current_psi = stretch_once(current_d, current_psi, atom)
        steps += 1
        logger.debug(
            "de_atomize %s step %d at %.17g; %d atoms left",
            kind,
            steps,
            atom.x,
            len(current_d.atoms),
        )
    return _build_output(kind, p_value, (d, psi), (current_d, current_psi), steps)


__all__ = [
    "TransformOutput",
    "de_atomize",
    "decreasing_rearrangement",
    "partial_average",
    "stretch_down",
    "stretch_up",
    "unit_norm",
]
