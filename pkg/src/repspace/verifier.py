"""Degreewise verification of the stable splitting statements.

Every check compares two graded abelian groups computed along
independent routes:

* one side is always the chain-level engine run on an explicit cell
  structure from the catalog;
* the other side is assembled from smaller spaces (so many copies of
  each wedge factor's reduced homology) or from a closed formula.

A Report keeps one row per comparison, so a failure names the degree at
fault instead of just returning False.  The suite runner at the bottom
is what the command line calls; every suite is deterministic for a
fixed seed.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations
from math import comb

from . import catalog
from .abelian import AbelianGroup, GradedGroup, IntMatrix, smith_normal_form
from .counting import (
    a_count,
    c_count,
    c_via_recurrence,
    conj_quotient_homology,
    d_count,
    enumerate_types,
    k_count,
    k_via_recurrence,
    n_central_product,
    n_lower_bound_su2,
    strata_counts,
)
from .engine import (
    ChainComplex,
    homology,
    reduced_homology,
    universal_coefficients_check,
)
from .errors import RepspaceError, ResourceGuard, TypeMismatch, Unsupported
from .simplicial import (
    FormalSimplex,
    SimplicialSet,
    collapse,
    normalized_chains,
    product_list,
    quotient_by_action,
    smash,
    subcomplex,
)
from .su2 import (
    DEFAULT_TOL,
    I,
    J,
    SignMatrix,
    SU2Tuple,
    classify_so3_tuple,
    commutator_type,
    conjugate_tuple,
    max_commutator_defect,
    psi_construct,
    random_torus_tuple,
    random_unit_quaternion,
)

# ---------------------------------------------------------------------------
# SECTION: reports


@dataclass
class Report:
    """Outcome of one verification: a name plus the evidence rows.

    Each row records one comparison as strings (so the whole report
    serializes without surprises); the verdict is the conjunction.
    """

    name: str
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.rows)

    def add(self, item, expected, got, ok=None) -> bool:
        if ok is None:
            ok = expected == got
        self.rows.append(
            {
                "item": str(item),
                "expected": str(expected),
                "got": str(got),
                "ok": bool(ok),
            }
        )
        return ok

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "rows": self.rows}

    def render(self) -> str:
        lines = [f"[{'ok' if self.ok else 'FAIL'}] {self.name}"]
        for r in self.rows:
            mark = "  +" if r["ok"] else "  !"
            lines.append(
                f"{mark} {r['item']}: expected {r['expected']}, got {r['got']}"
            )
        return "\n".join(lines)


def poincare_assembly(parts) -> GradedGroup:
    """Degreewise direct sum of graded groups with multiplicities.

    ``parts`` is an iterable of (multiplicity, GradedGroup).  This is the
    right-hand side of every splitting statement: so many copies of each
    wedge factor's reduced homology, summed degree by degree.
    """
    total = GradedGroup.of()
    for mult, g in parts:
        if mult < 0:
            raise ValueError("multiplicity must be >= 0")
        total = total.direct_sum(g.times(mult))
    return total


def _graded_rows(rep: Report, expected: GradedGroup, got: GradedGroup, tag="H"):
    for k in range(max(expected.top, got.top, 0) + 1):
        rep.add(f"{tag}_{k}", expected[k], got[k])


# ---------------------------------------------------------------------------
# SECTION: the three splitting families
#
# hom_circle: (S^1)^n splits into binom(n, r) copies of the r-sphere
#             (the r-fold smash of circles), r = 1..n.
# rep_su2:    (S^1)^n / Z2 (conjugation) splits into binom(n, r) copies
#             of the conjugation smash factor.
# sp_circle:  SP^m((S^1)^n) splits into binom(n, r) copies of
#             SP^m((S^1)^r) with its degenerate-direction part collapsed.

FAMILY_LIMITS = {"hom_circle": 5, "rep_su2": 4, "sp_circle": 3}


def _family_guard(family: str, n: int, m: int):
    if family not in FAMILY_LIMITS:
        raise ValueError(f"unknown splitting family {family!r}")
    limit = FAMILY_LIMITS[family]
    if not 1 <= n <= limit:
        raise ResourceGuard(
            f"{family} splitting is checked for 1 <= n <= {limit}, not n={n}"
        )
    if family == "sp_circle":
        if not 1 <= m <= 3:
            raise ResourceGuard(f"sp_circle needs 1 <= m <= 3, not m={m}")
        if catalog._torus_cell_estimate(n * m, 1) > catalog.CELL_BUDGET:
            raise ResourceGuard(
                f"sp_circle(n={n}, m={m}) underlying product is over budget"
            )


def _symmetric_power(T: SimplicialSet, m: int):
    """(m-fold product, SP^m) with the product kept for coordinate access.

    The quotient records orbit representatives but not their coordinate
    tuples, and the degeneracy filtration is defined through those, so
    the product must survive alongside.
    """
    if m == 1:
        return T, T
    P = product_list([T] * m, check=False, budget=catalog.CELL_BUDGET)
    A = catalog._permutation_action(P, m)
    return P, quotient_by_action(P, A, check=(P.size() <= 20_000))


def _member_rows(P: SimplicialSet, SP: SimplicialSet, sid: str):
    """The product coordinates behind a (possibly orbit) simplex id."""
    if SP is P:
        return (FormalSimplex((), sid),)
    return P.parts[SP.orbit_rep[sid]]


def _degenerate_direction_count(T: SimplicialSet, rows) -> int:
    """Directions of the torus T at its basepoint in every given row.

    A direction j counts when each row's coordinate j is a (totally
    degenerate) basepoint vertex; such simplices lie in the image of the
    subtorus omitting direction j.
    """
    verts = T.parts[T.basepoint]
    count = 0
    for j, v in enumerate(verts):
        if all(T.parts[g.base][j].base == v.base for g in rows):
            count += 1
    return count


def _sp_collapsed_factor(r: int, m: int) -> SimplicialSet:
    """SP^m((S^1)^r) with every degenerate-direction orbit collapsed."""
    T = catalog.minimal_torus(r)
    P, SP = _symmetric_power(T, m)
    kill = [
        sid
        for sid in SP.dim_of
        if _degenerate_direction_count(T, _member_rows(P, SP, sid)) >= 1
    ]
    return collapse(SP, kill)


def splitting_base(family: str, n: int, m: int = 2) -> SimplicialSet:
    """The total space whose reduced homology the wedge must reproduce."""
    _family_guard(family, n, m)
    if family == "hom_circle":
        return catalog.minimal_torus(n)
    if family == "rep_su2":
        return catalog.torus_conj_quotient(n)
    return catalog.sp_torus(n, m)


def splitting_factor(family: str, r: int, m: int = 2) -> SimplicialSet:
    """The rank-r wedge factor of the named family."""
    _family_guard(family, r, m)
    if family == "hom_circle":
        return smash([catalog.circle()] * r)
    if family == "rep_su2":
        return catalog.smash_factor(r)
    return _sp_collapsed_factor(r, m)


def verify_splitting(family: str, n: int, m: int = 2) -> Report:
    """Reduced homology of the total space against the wedge of factors.

    The factor of rank r occurs binom(n, r) times, once per choice of r
    of the n coordinate directions; rank 0 contributes nothing reduced.
    """
    _family_guard(family, n, m)
    left = reduced_homology(normalized_chains(splitting_base(family, n, m)))
    right = poincare_assembly(
        (
            comb(n, r),
            reduced_homology(normalized_chains(splitting_factor(family, r, m))),
        )
        for r in range(1, n + 1)
    )
    suffix = f"(n={n},m={m})" if family == "sp_circle" else f"(n={n})"
    rep = Report(f"splitting[{family}]{suffix}")
    _graded_rows(rep, right, left, tag="H~")
    return rep


def degeneracy_filtration(family: str, n: int, m: int = 2) -> list:
    """Subspaces S^0 ⊇ S^1 ⊇ ... ⊇ S^n graded by degenerate directions.

    S^r is the union of the images of all rank n−r coordinate subtori:
    the simplices sitting at the basepoint in at least r directions.
    S^0 is the whole space, S^n the basepoint alone, and the subquotient
    S^r/S^{r+1} is a wedge of binom(n, n−r) rank n−r splitting factors.
    """
    _family_guard(family, n, m)
    if family == "hom_circle":
        T = catalog.minimal_torus(n)
        ambient = T
        counts = {
            sid: _degenerate_direction_count(T, (FormalSimplex((), sid),))
            for sid in T.dim_of
        }
    elif family == "rep_su2":
        P, A = catalog.torus(n)
        ambient = quotient_by_action(P, A, check=False)
        counts = {
            oid: _degenerate_direction_count(
                P, (FormalSimplex((), ambient.orbit_rep[oid]),)
            )
            for oid in ambient.dim_of
        }
    else:
        T = catalog.minimal_torus(n)
        P, ambient = _symmetric_power(T, m)
        counts = {
            sid: _degenerate_direction_count(T, _member_rows(P, ambient, sid))
            for sid in ambient.dim_of
        }
    return [
        subcomplex(ambient, [sid for sid, c in counts.items() if c >= r])
        for r in range(n + 1)
    ]


# ---------------------------------------------------------------------------
# SECTION: the rank-one factor catalog
#
# For each rank-one group the n-th stable factor of its (almost-)
# commuting space, as a symbolic description plus its reduced homology.
# A disjoint basepoint costs nothing here: the reduced homology of X_+
# is the unreduced homology of X in every degree.

RANK_ONE_GROUPS = ("S1", "SU2", "SO3", "B_SU2_Z2")


def rank_one_catalog(group: str, n: int):
    """(description, reduced homology) of the n-th stable factor."""
    if group not in RANK_ONE_GROUPS or n < 1:
        raise Unsupported(group, n)
    if group == "S1":
        return f"S^{n}", reduced_homology(catalog.sphere_chain(n))
    if group == "SU2":
        if n == 1:
            return "S^3", reduced_homology(catalog.sphere_chain(3))
        if n > 4:
            raise Unsupported(group, n)
        return (
            f"ΣS({n}λ)",
            reduced_homology(catalog.thom_zero_quotient(n)),
        )
    if group == "SO3":
        if n == 1:
            return "RP^3", reduced_homology(catalog.rp_chain(3))
        c = c_count(n)
        value = poincare_assembly(
            [
                (1, reduced_homology(catalog.stunted_projective(n + 2, n))),
                (c, catalog.lens_q8()),
            ]
        )
        return f"RP^{n + 2}/RP^{n - 1} ∨ {c}·(S^3/Q8)_+", value
    # B_SU2_Z2: SU(2) almost-commuting tuples with one marked -1.
    if n == 1:
        return "S^3", reduced_homology(catalog.sphere_chain(3))
    if n > 4:
        raise Unsupported(group, n)
    k = k_count(n)
    value = poincare_assembly(
        [
            (k, homology(catalog.rp_chain(3))),
            (1, reduced_homology(catalog.thom_zero_quotient(n))),
        ]
    )
    return f"{k}·(RP^3)_+ ∨ ΣS({n}λ)", value


# ---------------------------------------------------------------------------
# SECTION: closed formulas against the engine


def check_homology_prop(n: int) -> Report:
    """Engine homology of (S^1)^n/Z2 against the closed-form table."""
    rep = Report(f"homology-prop(n={n})")
    got = homology(normalized_chains(catalog.torus_conj_quotient(n)))
    _graded_rows(rep, conj_quotient_homology(n), got)
    return rep


def check_rep_u_cohomology(m: int = 2) -> Report:
    """SP^m((S^1)^2) against the torsion-free rank pattern 1, 2, ..., 2, 1."""
    rep = Report(f"rep-u(m={m})")
    got = homology(normalized_chains(catalog.sp_torus(2, m)))
    if m == 0:
        expected = GradedGroup.of(AbelianGroup.free(1))
    else:
        middle = [AbelianGroup.free(2) for _ in range(2 * m - 1)]
        expected = GradedGroup.of(
            AbelianGroup.free(1), *middle, AbelianGroup.free(1)
        )
    _graded_rows(rep, expected, got)
    return rep


def check_rep_sp(n: int = 2, m: int = 2) -> Report:
    """SP^m((S^1)^2/Z2) against complex projective m-space."""
    if n != 2:
        raise ResourceGuard("the projective-space comparison is for n=2")
    rep = Report(f"rep-sp(n={n},m={m})")
    got = homology(normalized_chains(catalog.rep_sp(n, m)))
    expected = GradedGroup.of(
        *[
            AbelianGroup.free(1) if k % 2 == 0 else AbelianGroup.trivial()
            for k in range(2 * m + 1)
        ]
    )
    _graded_rows(rep, expected, got)
    return rep


def check_counts() -> Report:
    """Spot values and the binomial recurrences of the counting module."""
    rep = Report("counts")
    for item, want, got in [
        ("A(5)", 155, a_count(5)),
        ("C(4)", 13, c_count(4)),
        ("D(4)", 140, d_count(4)),
        ("K(4)", 90, k_count(4)),
        ("N(3,2,3)", 79, n_central_product(3, 2, 3)),
        ("N(4,1,2)", 36, n_central_product(4, 1, 2)),
        ("SU(2) component lower bound, n=4", 36, n_lower_bound_su2(4)),
        ("strata(3, Z/2)", [4, 3, 0, 1], strata_counts(3, (2,))),
    ]:
        rep.add(item, want, got)
    rep.add(
        "C recurrence vs closed form, n=1..20",
        True,
        all(c_via_recurrence(n) == c_count(n) for n in range(1, 21)),
    )
    rep.add(
        "K recurrence vs closed form, n=1..20",
        True,
        all(k_via_recurrence(n) == k_count(n) for n in range(1, 21)),
    )
    rep.add(
        "D against its defining sum, n=1..20",
        True,
        all(
            sum(comb(n, r) * k_count(r) for r in range(1, n + 1)) == d_count(n)
            for n in range(1, 21)
        ),
    )
    return rep


# ---------------------------------------------------------------------------
# SECTION: randomized SU(2) sweeps


def sign_matrices(n: int) -> list:
    """All symmetric sign matrices with +1 diagonal, via the F2 type list."""
    out = []
    for t in enumerate_types(n, (2,)):
        out.append(
            SignMatrix.from_rows(
                [
                    [(-1) ** t.entry(i, j)[0] for j in range(n)]
                    for i in range(n)
                ]
            )
        )
    return out


def psi_sweep(n: int, runs: int, seed) -> dict:
    """Randomized constructions of every realizable sign matrix.

    Each run draws a realizable matrix (covering all of them first), a
    conjugated anticommuting base pair — or a random common-axis tuple
    when the matrix is trivial — and random companion signs, then
    measures the built tuple's type and commutator defect.  Returns
    {"runs", "failures", "max_commutator_defect"}.
    """
    rng = random.Random(seed)
    realizable = [C for C in sign_matrices(n) if C.is_realizable()]
    trivial = SignMatrix.from_rows([[1] * n for _ in range(n)])
    failures = 0
    worst = 0.0
    for run in range(runs):
        C = realizable[run] if run < len(realizable) else rng.choice(realizable)
        try:
            if C == trivial:
                t = random_torus_tuple(n, rng.randrange(2**63))
            else:
                pairs = [
                    (i, j)
                    for i, j in combinations(range(n), 2)
                    if C.entry(i, j) == -1
                ]
                i, j = pairs[rng.randrange(len(pairs))]
                g = random_unit_quaternion(rng)
                base = conjugate_tuple(g, SU2Tuple((I, J)))
                w = tuple(rng.choice((1, -1)) for _ in range(n - 2))
                t = psi_construct(
                    base.elements[0], base.elements[1], w, C, i, j
                )
            defect = max_commutator_defect(t)
            worst = max(worst, defect)
            if commutator_type(t) != C or defect > DEFAULT_TOL:
                failures += 1
        except RepspaceError:
            failures += 1
    return {"runs": runs, "failures": failures, "max_commutator_defect": worst}


def psi_refusals(n: int) -> dict:
    """Every non-realizable sign matrix must be refused at every base.

    If the forced-entry checks all passed for some base position, the
    construction would output a tuple realizing the matrix, which the
    rank bound forbids — so a TypeMismatch at every position is not just
    expected but guaranteed.
    """
    unreal = [C for C in sign_matrices(n) if not C.is_realizable()]
    refused = 0
    for C in unreal:
        ok = True
        for i, j in combinations(range(n), 2):
            try:
                psi_construct(I, J, (1,) * (n - 2), C, i, j)
                ok = False
            except TypeMismatch:
                pass
        if ok:
            refused += 1
    return {"matrices": len(unreal), "refused": refused}


def so3_invariance(cases: int, seed) -> dict:
    """The SO(3) classifier ignores lift signs and conjugation.

    Each case builds a commuting SO(3) tuple (via its SU(2) lifts),
    flips a random subset of lift signs, conjugates everything by a
    random element, and demands the same sign matrix back.
    """
    rng = random.Random(seed)
    pools = {n: [C for C in sign_matrices(n) if C.is_realizable()] for n in (2, 3, 4)}
    trivial = {n: SignMatrix.from_rows([[1] * n for _ in range(n)]) for n in (2, 3, 4)}
    failures = 0
    for _ in range(cases):
        n = rng.choice((2, 3, 4))
        C = rng.choice(pools[n])
        if C == trivial[n]:
            t = random_torus_tuple(n, rng.randrange(2**63))
        else:
            pairs = [
                (i, j)
                for i, j in combinations(range(n), 2)
                if C.entry(i, j) == -1
            ]
            i, j = pairs[rng.randrange(len(pairs))]
            g = random_unit_quaternion(rng)
            base = conjugate_tuple(g, SU2Tuple((I, J)))
            w = tuple(rng.choice((1, -1)) for _ in range(n - 2))
            t = psi_construct(base.elements[0], base.elements[1], w, C, i, j)
        before = classify_so3_tuple(t.elements)
        flipped = [
            x if rng.random() < 0.5 else x.neg() for x in t.elements
        ]
        g = random_unit_quaternion(rng)
        gi = g.inverse()
        after = classify_so3_tuple([g * x * gi for x in flipped])
        if after != before:
            failures += 1
    return {"cases": cases, "failures": failures}


def check_su2(runs: int = 1200, seed: int = 20260823) -> Report:
    """Realization sweeps, refusal checks and SO(3) invariance."""
    rep = Report(f"su2(runs={runs})")
    per = max(runs // 3, 40)
    for n in (2, 3, 4):
        out = psi_sweep(n, per, seed + n)
        rep.add(
            f"construction sweep n={n} ({out['runs']} runs)",
            "0 failures",
            f"{out['failures']} failures, "
            f"worst defect {out['max_commutator_defect']:.2e}",
            out["failures"] == 0
            and out["max_commutator_defect"] < DEFAULT_TOL,
        )
        ref = psi_refusals(n)
        rep.add(
            f"refusals n={n}",
            f"{ref['matrices']} matrices refused everywhere",
            f"{ref['refused']} matrices refused everywhere",
            ref["refused"] == ref["matrices"],
        )
    inv = so3_invariance(max(runs // 3, 40), seed - 1)
    rep.add(
        f"SO(3) lift/conjugation invariance ({inv['cases']} cases)",
        "0 failures",
        f"{inv['failures']} failures",
        inv["failures"] == 0,
    )
    return rep


# ---------------------------------------------------------------------------
# SECTION: structural suites (normal form, boundary algebra)


def _det(M: IntMatrix) -> int:
    """Exact determinant by fraction-free elimination; matrices are tiny."""
    n, c = M.shape
    if n != c:
        raise ValueError("determinant of a non-square matrix")
    a = M.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next(
                (r for r in range(k + 1, n) if a[r][k] != 0), None
            )
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for r in range(k + 1, n):
            for j in range(k + 1, n):
                a[r][j] = (a[r][j] * a[k][k] - a[r][k] * a[k][j]) // prev
            a[r][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def check_snf(runs: int = 200, seed: int = 11) -> Report:
    """U·M·V = D with unimodular U, V and a divisor chain, on random M."""
    rng = random.Random(seed)
    rep = Report(f"snf(runs={runs})")
    bad = 0
    for _ in range(runs):
        r = rng.randrange(1, 6)
        c = rng.randrange(1, 6)
        M = IntMatrix.from_rows(
            [[rng.randrange(-9, 10) for _ in range(c)] for _ in range(r)]
        )
        U, D, V = smith_normal_form(M)
        diag = [D.entry(i, i) for i in range(min(r, c))]
        ok = (
            U.mul(M).mul(V) == D
            and abs(_det(U)) == 1
            and abs(_det(V)) == 1
            and all(
                D.entry(i, j) == 0
                for i in range(r)
                for j in range(c)
                if i != j
            )
            and all(d >= 0 for d in diag)
            and all(
                (b == 0 if a == 0 else b % a == 0)
                for a, b in zip(diag, diag[1:])
            )
        )
        if not ok:
            bad += 1
    rep.add(
        "random integer matrices",
        f"{runs} satisfy the normal-form axioms",
        f"{runs - bad} satisfy the normal-form axioms",
        bad == 0,
    )
    return rep


def check_simplicial() -> Report:
    """Chain-level consistency across every catalog sample.

    Building normalized chains re-validates boundary-squared; on top of
    that each integral answer must agree with its mod-p shadows.
    """
    rep = Report("simplicial")
    for key in catalog.catalog_samples():
        canonical, thunk = catalog.resolve(key)
        obj = thunk()
        if isinstance(obj, ChainComplex):
            ok = all(universal_coefficients_check(obj, p) for p in (2, 3))
            rep.add(
                canonical,
                "boundary² = 0 and mod-p ranks consistent",
                "holds" if ok else "mod-p ranks inconsistent",
                ok,
            )
    return rep


# ---------------------------------------------------------------------------
# SECTION: suite runner

SUITES = (
    "snf",
    "simplicial",
    "homology-prop",
    "rep-u",
    "rep-sp",
    "splitting",
    "counts",
    "su2",
)


def suite_builders(name: str, seed: int = 0, runs: int = 1200) -> list:
    """Zero-argument report builders for one named suite."""
    if name == "snf":
        return [partial(check_snf, runs=max(runs // 6, 50), seed=seed + 11)]
    if name == "simplicial":
        return [check_simplicial]
    if name == "homology-prop":
        return [partial(check_homology_prop, n) for n in (1, 2, 3, 4)]
    if name == "rep-u":
        return [partial(check_rep_u_cohomology, m) for m in (1, 2)]
    if name == "rep-sp":
        return [partial(check_rep_sp, 2, m) for m in (0, 1, 2)]
    if name == "splitting":
        return (
            [partial(verify_splitting, "hom_circle", n) for n in (1, 2, 3, 4, 5)]
            + [partial(verify_splitting, "rep_su2", n) for n in (1, 2, 3, 4)]
            + [partial(verify_splitting, "sp_circle", n, 2) for n in (1, 2, 3)]
        )
    if name == "counts":
        return [check_counts]
    if name == "su2":
        return [partial(check_su2, runs=runs, seed=seed + 97)]
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


def run_suite(name: str, jobs: int = 1, seed: int = 0, runs: int = 1200) -> list:
    """All reports of one suite, optionally on a thread pool."""
    builders = suite_builders(name, seed=seed, runs=runs)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(b) for b in builders]
            return [f.result() for f in futures]
    return [b() for b in builders]
