"""
Zero-dimensional polynomial systems over a field tower.

solve_system eliminates variables by linear substitution and Sylvester
resultants, solves the univariate endgame with roots_in_tower and
back-substitutes. When a root lies outside the tower and an adjoinable
factor is known, the tower is extended (generators t<depth>) and the whole
solve restarts on lifted equations.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

from app.config import Settings, get_settings
from app.services.exceptions import Unresolved
from app.services.field import FieldElement, FieldTower, UPoly, adjoin
from app.services.poly import MPoly, resultant
from app.services.roots import roots_in_tower

logger = logging.getLogger(__name__)

Solution = Dict[str, FieldElement]
T = TypeVar("T")


class PositiveDimensional(Unresolved):
    """Raised when the solution set of a system is infinite."""

    def __init__(self, message: str, free: Sequence[str] = ()):
        super().__init__(message)
        self.free = list(free)
        self.details["free"] = self.free


def extend_tower(tower: FieldTower, factor: UPoly) -> FieldTower:
    """Adjoin a root of `factor` as generator t<depth>."""
    name = f"t{tower.depth + 1}"
    while name in tower.names:
        name += "_"
    extended = adjoin(tower, name, factor.lift(tower).monic())
    logger.info(f"Extended field to {extended.declaration()}")
    return extended


def adjoining(compute: Callable[[FieldTower], T], tower: FieldTower) -> T:
    """
    Run compute(tower), extending the tower by the suggested factor and
    retrying whenever it raises an Unresolved that carries one.
    """
    settings = get_settings()
    for attempt in range(settings.max_adjunctions + 1):
        try:
            return compute(tower)
        except PositiveDimensional:
            raise
        except Unresolved as exc:
            if exc.suggestion is None or attempt == settings.max_adjunctions:
                raise
            tower = extend_tower(tower, exc.suggestion)
    raise Unresolved("adjunction budget exhausted")


def roots_with_adjunction(f: UPoly) -> Tuple[FieldTower, List[FieldElement]]:
    """All roots of f, extending the tower until it splits (within the adjunction budget)."""
    return adjoining(lambda tower: (tower, roots_in_tower(f.lift(tower))), f.tower)


@dataclass
class _Solver:
    tower: FieldTower
    nonzero: Tuple[str, ...]
    settings: Settings
    steps: int = field(default=0)

    def solve(self, equations: List[MPoly], variables: List[str]) -> List[Solution]:
        eqs = []
        for e in equations:
            if e.is_zero():
                continue
            if e.is_constant():
                return []
            eqs.append(self._saturate(e))
        if any(e.is_constant() for e in eqs):
            return []
        if not variables:
            return [{}]
        involved = {v for e in eqs for v in e.support()}
        free = [v for v in variables if v not in involved]
        if free:
            raise PositiveDimensional(f"variables {free} are unconstrained", free)

        linear = self._linear_pivot(eqs, variables)
        if linear is not None:
            return self._solve_linear(eqs, variables, *linear)

        univariate = self._univariate(eqs)
        if univariate is not None:
            return self._solve_univariate(eqs, variables, *univariate)

        return self._solve_by_resultants(eqs, variables)

    # ------------------------------------------------------------------

    def _saturate(self, e: MPoly) -> MPoly:
        # divide out monomial factors in variables declared nonzero
        shift = [0] * len(e.variables)
        for v in self.nonzero:
            if v in e.variables:
                i = e.variables.index(v)
                shift[i] = min(exps[i] for exps in e.terms)
        if not any(shift):
            return e
        terms = {tuple(x - s for x, s in zip(exps, shift)): c for exps, c in e.terms.items()}
        return MPoly._make(e.tower, e.variables, terms)

    def _linear_pivot(self, eqs: List[MPoly], variables: List[str]) -> Optional[Tuple[int, str]]:
        for index in sorted(range(len(eqs)), key=lambda k: eqs[k].total_degree()):
            eq = eqs[index]
            for v in variables:
                if eq.degree_in(v) == 1 and eq.coefficients_in(v)[1].is_constant():
                    return index, v
        return None

    def _solve_linear(self, eqs: List[MPoly], variables: List[str], index: int, var: str) -> List[Solution]:
        coeffs = eqs[index].coefficients_in(var)
        value = -coeffs[0] * coeffs[1].constant_value().inverse()
        logger.debug(f"Linear elimination of {var} = {value}")
        rest = [e.substitute({var: value}) for i, e in enumerate(eqs) if i != index]
        remaining = [v for v in variables if v != var]
        out = []
        for partial in self.solve(rest, remaining):
            x = value.evaluate(partial)
            if var in self.nonzero and x.is_zero():
                continue
            out.append({**partial, var: x})
        return out

    def _univariate(self, eqs: List[MPoly]) -> Optional[Tuple[str, UPoly]]:
        for e in eqs:
            support = e.support()
            if len(support) != 1:
                continue
            var = support[0]
            g = None
            for other in eqs:
                if other.support() == [var]:
                    u = other.to_upoly(var)
                    g = u if g is None else UPoly.gcd(g, u)
            return var, g
        return None

    def _solve_univariate(self, eqs: List[MPoly], variables: List[str], var: str, g: UPoly) -> List[Solution]:
        if g.degree < 1:
            return []
        remaining = [v for v in variables if v != var]
        out = []
        for root in roots_in_tower(g):
            if var in self.nonzero and root.is_zero():
                continue
            rest = [e.substitute({var: root}) for e in eqs if e.support() != [var]]
            for partial in self.solve(rest, remaining):
                out.append({**partial, var: root})
        return out

    def _solve_by_resultants(self, eqs: List[MPoly], variables: List[str]) -> List[Solution]:
        var = self._elimination_variable(eqs, variables)
        with_var = sorted((e for e in eqs if var in e.support()), key=lambda e: e.degree_in(var))
        projected = [e for e in eqs if var not in e.support()]
        for i in range(len(with_var)):
            for j in range(i + 1, len(with_var)):
                self.steps += 1
                if self.steps > self.settings.max_elimination_steps:
                    raise Unresolved("elimination step budget exhausted")
                r = resultant(with_var[i], with_var[j], var)
                if not r.is_zero():
                    projected.append(r)
        logger.debug(f"Eliminated {var}: {len(projected)} projected equations")
        remaining = [v for v in variables if v != var]
        out = []
        for partial in self.solve(projected, remaining):
            fiber = [e.substitute(partial) for e in with_var]
            g = None
            for f in fiber:
                if f.is_zero():
                    continue
                u = f.to_upoly(var)
                g = u if g is None else UPoly.gcd(g, u)
            if g is None:
                raise PositiveDimensional(f"{var} is unconstrained over {partial}", [var])
            if g.degree < 1:
                continue
            for root in roots_in_tower(g):
                if var in self.nonzero and root.is_zero():
                    continue
                out.append({**partial, var: root})
        return out

    def _elimination_variable(self, eqs: List[MPoly], variables: List[str]) -> str:
        def cost(v: str):
            containing = [e for e in eqs if v in e.support()]
            return (len(containing) < 2, sum(e.degree_in(v) for e in containing))

        return min(variables, key=cost)


def solve_system(
    equations: Sequence[MPoly],
    variables: Sequence[str],
    nonzero: Sequence[str] = (),
    tower: Optional[FieldTower] = None,
    auto_adjoin: bool = True,
) -> Tuple[FieldTower, List[Solution]]:
    """
    All solutions of a zero-dimensional system, with variables listed in
    `nonzero` required to be nonzero.

    Returns the (possibly extended) tower together with the solutions as
    {variable: value} maps in that tower.
    """
    if tower is None:
        tower = equations[0].tower
    settings = get_settings()
    variables = list(variables)

    def attempt(current: FieldTower) -> Tuple[FieldTower, List[Solution]]:
        lifted = [e.lift(current) for e in equations]
        solutions = _Solver(current, tuple(nonzero), settings).solve(lifted, variables)
        unique: Dict[tuple, Solution] = {}
        for s in solutions:
            unique.setdefault(tuple(s[v].raw for v in variables), s)
        logger.debug(f"Solved {len(equations)} equations in {variables}: {len(unique)} solutions")
        return current, list(unique.values())

    if not auto_adjoin:
        return attempt(tower)
    return adjoining(attempt, tower)
