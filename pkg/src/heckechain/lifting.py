"""Characteristic-zero orbit classes recovered from mod-ell eigensystems.

The halved characteristic polynomial of each operator has integer
coefficients bounded by the classical estimate on eigenvalue size, so its
coefficients are recovered by CRT over enough valid characteristics, with one
spare characteristic as a stability check. Factoring the lifted polynomials
over the integers, then grouping the orbits of one anchor characteristic by
which integer factor each of their minimal polynomials divides, yields
characteristic-free orbit classes with degrees and multiplicities.

Classes with rational coefficients can be reduced at characteristics where
the symbol space itself is unavailable (for instance a characteristic
dividing the level); higher-degree classes cannot, since the charpoly data
does not single out one reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, isqrt

import sympy

from . import polys
from .arith import DomainError, crt_pair, is_prime, next_prime, primes_up_to, symmetric_lift
from .dims import dim_cusp_forms
from .eigensystems import Eigensystem, charpoly_halved, decompose, operator_primes, sturm_bound
from .gf import field

_MAX_ANCHOR_TRIES = 25
_MAX_LIFT_PRIMES = 60


def valid_characteristics(N: int, k: int):
    """Ascending primes usable for lifting at (N, k): coprime to 6N and
    strictly above the weight."""
    ell = max(k, 3)
    while True:
        ell = next_prime(ell)
        if (6 * N) % ell:
            yield ell


def _coefficient_bound(D: int, k: int, q: int) -> int:
    # Each root has absolute value at most 2 q^((k-1)/2); coefficients are
    # elementary symmetric functions of D of them.
    s = isqrt(q ** (k - 1))
    if s * s < q ** (k - 1):
        s += 1
    per_root = 2 * s
    return max(comb(D, j) * per_root**j for j in range(D + 1))


def lift_charpoly(N: int, k: int, q: int) -> tuple[int, ...]:
    """Monic integer polynomial whose reduction mod each valid ell equals the
    halved charpoly of the operator at q; little-endian coefficients."""
    if N % q == 0:
        raise DomainError("lifting is defined away from the level")
    D = dim_cusp_forms(N, k)
    if D == 0:
        return (1,)
    bound = _coefficient_bound(D, k, q)

    residues: list[tuple[int, tuple[int, ...]]] = []
    dropped: list[int] = []
    combined: tuple[int, ...] | None = None

    def crt_all() -> tuple[int, ...] | None:
        if not residues:
            return None
        acc = list(residues[0][1])
        mod = residues[0][0]
        for ell, coeffs in residues[1:]:
            acc = [crt_pair(a, mod, c, ell)[0] for a, c in zip(acc, coeffs)]
            mod *= ell
        return tuple(symmetric_lift(a, mod) for a in acc)

    produced = 0
    need_product = 2 * bound
    prod = 1
    stable_seen = None
    for ell in valid_characteristics(N, k):
        produced += 1
        if produced > _MAX_LIFT_PRIMES:
            raise DomainError("could not stabilize an integer charpoly lift")
        if ell == q:
            continue
        try:
            cp = charpoly_halved(N, k, ell, q)
        except DomainError:
            dropped.append(ell)
            continue
        if polys.degree(cp) != D:
            dropped.append(ell)
            continue
        residues.append((ell, cp))
        prod *= ell
        if prod <= need_product:
            continue
        lifted = crt_all()
        if stable_seen is None:
            stable_seen = lifted
            continue
        if lifted == stable_seen:
            return lifted
        stable_seen = lifted
    raise DomainError("could not stabilize an integer charpoly lift")


def _z_factors(coeffs: tuple[int, ...]) -> list[tuple[tuple[int, ...], int]]:
    """Monic irreducible integer factors (little-endian) with multiplicities,
    sorted by (degree, coefficients)."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x, domain="ZZ")
    _, fac = poly.factor_list()
    out = []
    for f, m in fac:
        cs = [int(c) for c in reversed(f.all_coeffs())]
        out.append((tuple(cs), int(m)))
    return sorted(out, key=lambda fm: (len(fm[0]), fm[0]))


def _divides_mod(f: polys.Poly, F: tuple[int, ...], ell: int) -> bool:
    Fl = field(ell)
    red = polys.trim(c % ell for c in F)
    if polys.degree(red) < polys.degree(f):
        return False
    return not polys.mod(Fl, red, f)


@dataclass
class IntegralOrbitClass:
    """A characteristic-free orbit of eigenvalue systems at one (N, k)."""

    N: int
    k: int
    index: int
    degree: int
    multiplicity: int
    anchor: int
    _parent: "IntegralClasses"

    @property
    def label(self) -> tuple[int, int, int]:
        return (self.N, self.k, self.index)

    def factor_at(self, q: int) -> tuple[int, ...]:
        return self._parent.factor_for(self.index, q)

    def rational_table(self, bound: int) -> dict[int, int]:
        """Integer a(q) for q <= bound away from N, for degree-1 classes."""
        if self.degree != 1:
            raise DomainError(
                "only a rational orbit class has a well-defined integer table"
            )
        out = {}
        for q in primes_up_to(bound):
            if self.N % q == 0:
                continue
            f = self.factor_at(q)
            out[q] = -f[0]
        return out

    def __repr__(self) -> str:
        return (
            f"IntegralOrbitClass({self.N}.{self.k}.{self.index}, "
            f"degree={self.degree}, mult={self.multiplicity})"
        )


class IntegralClasses:
    """Container assembling the integral orbit classes at one (N, k)."""

    def __init__(self, N: int, k: int):
        self.N = N
        self.k = k
        self.base_primes = [q for q in primes_up_to(sturm_bound(N, k)) if N % q]
        self._lifts: dict[int, tuple[int, ...]] = {}
        self._factors: dict[int, list[tuple[tuple[int, ...], int]]] = {}
        self._class_factor: dict[tuple[int, int], tuple[int, ...]] = {}
        self.dropped: list[int] = []
        self.classes: list[IntegralOrbitClass] = []
        self.anchor = 0
        self._anchor_groups: list[list[Eigensystem]] = []
        self._secondary: tuple[int, dict[int, Eigensystem]] | None = None
        self._build()

    # -- assembly ---------------------------------------------------------

    def _lift(self, q: int) -> tuple[int, ...]:
        if q not in self._lifts:
            self._lifts[q] = lift_charpoly(self.N, self.k, q)
            self._factors[q] = _z_factors(self._lifts[q])
        return self._lifts[q]

    def _anchor_ok(self, ell: int) -> list[list[Eigensystem]] | None:
        if ell in self.base_primes:
            return None
        try:
            systems = decompose(self.N, self.k, ell)
        except DomainError:
            return None
        if sum(s.block_dim for s in systems) != 2 * dim_cusp_forms(self.N, self.k):
            return None
        if any(not s.semisimple for s in systems):
            return None
        groups: dict[tuple, list[Eigensystem]] = {}
        for s in systems:
            key = []
            for q in self.base_primes:
                hits = [
                    F
                    for F, _ in self._factors[q]
                    if _divides_mod(s.min_poly(q), F, ell)
                ]
                if len(hits) != 1:
                    return None
                key.append(hits[0])
            groups.setdefault(tuple(key), []).append(s)
        for members in groups.values():
            mults = {m.multiplicity for m in members}
            if len(mults) != 1:
                return None
        return [groups[key] for key in sorted(groups.keys())]

    def _build(self) -> None:
        if dim_cusp_forms(self.N, self.k) == 0:
            return
        for q in self.base_primes:
            self._lift(q)
        tries = 0
        for ell in valid_characteristics(self.N, self.k):
            tries += 1
            if tries > _MAX_ANCHOR_TRIES:
                raise DomainError("no anchor characteristic produced a clean grouping")
            grouped = self._anchor_ok(ell)
            if grouped is None:
                self.dropped.append(ell)
                continue
            self.anchor = ell
            self._anchor_groups = grouped
            break

        drafts = []
        for members in self._anchor_groups:
            d0 = sum(m.degree for m in members)
            mult = members[0].multiplicity
            factors = {}
            for q in self.base_primes:
                hits = [
                    F
                    for F, _ in self._factors[q]
                    if _divides_mod(members[0].min_poly(q), F, self.anchor)
                ]
                factors[q] = hits[0]
            drafts.append((d0, mult, factors, members))
        drafts.sort(key=lambda t: (t[0], [t[2][q] for q in sorted(t[2])]))
        self._anchor_groups = [d[3] for d in drafts]
        for i, (d0, mult, factors, _) in enumerate(drafts):
            cls = IntegralOrbitClass(
                N=self.N, k=self.k, index=i,
                degree=d0, multiplicity=mult, anchor=self.anchor, _parent=self,
            )
            self.classes.append(cls)
            for q, F in factors.items():
                self._class_factor[(i, q)] = F

    # -- queries ------------------------------------------------------------

    def _secondary_reps(self) -> tuple[int, dict[int, Eigensystem]]:
        """A second reference characteristic with one representative orbit per
        class; needed to assign factors when an operator prime coincides with
        the anchor characteristic."""
        if self._secondary is not None:
            return self._secondary
        tries = 0
        for ell in valid_characteristics(self.N, self.k):
            if ell == self.anchor or ell in self.base_primes:
                continue
            tries += 1
            if tries > _MAX_ANCHOR_TRIES:
                break
            try:
                mapping = orbit_class_map(self.N, self.k, ell)
            except DomainError:
                continue
            if any(len(v) != 1 for v in mapping.values()):
                continue
            if {v[0] for v in mapping.values()} != set(range(len(self.classes))):
                continue
            reps: dict[int, Eigensystem] = {}
            for s in decompose(self.N, self.k, ell):
                reps.setdefault(mapping[s.index][0], s)
            self._secondary = (ell, reps)
            return self._secondary
        raise DomainError("no secondary characteristic gives a clean class mapping")

    def factor_for(self, index: int, q: int) -> tuple[int, ...]:
        if (index, q) in self._class_factor:
            return self._class_factor[(index, q)]
        if self.N % q == 0:
            raise DomainError("no operator factor at a prime dividing the level")
        if not is_prime(q):
            raise DomainError("operator factors are indexed by primes")
        self._lift(q)
        if q == self.anchor:
            ell_ref, reps = self._secondary_reps()
            rep = reps[index]
        else:
            ell_ref = self.anchor
            rep = self._anchor_groups[index][0]
        hits = [
            F for F, _ in self._factors[q] if _divides_mod(rep.min_poly(q), F, ell_ref)
        ]
        if len(hits) != 1:
            raise DomainError(f"ambiguous integer factor assignment at {q}")
        self._class_factor[(index, q)] = hits[0]
        return hits[0]


_CLASSES_CACHE: dict[tuple[int, int], IntegralClasses] = {}


def integral_classes(N: int, k: int) -> IntegralClasses:
    key = (N, k)
    if key not in _CLASSES_CACHE:
        _CLASSES_CACHE[key] = IntegralClasses(N, k)
    return _CLASSES_CACHE[key]


@dataclass
class ReducedIntegralSystem:
    """Rational orbit class reduced at a characteristic where no symbol space
    exists; quacks like an eigensystem with prime-field values."""

    N: int
    k: int
    ell: int
    source: tuple[int, int, int]
    table: dict[int, int]

    def __post_init__(self):
        self.degree = 1
        self.field = field(self.ell)

    def a(self, q: int) -> int:
        if q not in self.table:
            raise DomainError(f"reduced table has no entry at {q}")
        return self.table[q]

    @property
    def label(self) -> str:
        return f"{self.source[0]}.{self.source[1]}.{self.source[2]}"


def reduce_class_mod(cls: IntegralOrbitClass, ell: int, bound: int) -> ReducedIntegralSystem:
    """Reduce a rational class mod ell (any prime, including ones excluded
    from direct space construction)."""
    if not is_prime(ell):
        raise DomainError("reduction characteristic must be prime")
    table = {q: a % ell for q, a in cls.rational_table(bound).items()}
    return ReducedIntegralSystem(
        N=cls.N, k=cls.k, ell=ell, source=cls.label, table=table
    )


def orbit_class_map(N: int, k: int, ell: int) -> dict[int, list[int]]:
    """Map each mod-ell orbit index to the integral classes compatible with
    it; several hits mean the classes collide (are congruent) mod ell."""
    container = integral_classes(N, k)
    systems = decompose(N, k, ell)
    if sum(s.block_dim for s in systems) != 2 * dim_cusp_forms(N, k):
        raise DomainError("dimension anomaly at this characteristic")
    out: dict[int, list[int]] = {}
    for s in systems:
        hits = []
        for cls in container.classes:
            ok = True
            for q in container.base_primes:
                if q == ell or q == container.anchor:
                    continue
                F = container.factor_for(cls.index, q)
                if not _divides_mod(s.min_poly(q), F, ell):
                    ok = False
                    break
            if ok:
                hits.append(cls.index)
        if not hits:
            raise DomainError("orbit matches no integral class at this characteristic")
        out[s.index] = hits
    return out
