"""
Acceptance grids across every route.

These tests verify:
- Dieudonne heights e h - e + 1 and the abelian p-rank table
- Agreement of the congruence tables with the elliptic covers
- Direct-verifier heights against the log Calabi-Yau predictions
- The uniform dichotomy, the membership oracle and Fano schedules
- Monotonicity in e over the small grid
"""

import pytest
import random
from fractions import Fraction
from pathlib import Path
import sys

import sympy

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from qfs_heights.cli import run
from qfs_heights.dieudonne import Finite, abelian_height, closed_form_height, quasi_fe_height
from qfs_heights.divisors import (
    INFINITY,
    ONE,
    ZERO,
    PointP1,
    QDivisor,
    fano_perturbation_schedule,
    parse_divisor,
)
from qfs_heights.finite_field import get_field
from qfs_heights.logcy import case_divisor, classify, height_from_table, height_via_cover
from qfs_heights.qfs_direct import NotSplit, Split, fano_base_check, height1_frobenius_test, height_search
from qfs_heights.subgroup import SubgroupPresentation, WittModuleGroup, bfs_closure
from qfs_heights.tables import (
    EXCLUDED_PAIRS,
    GRID_LIMITS,
    direct_row,
    grid_tasks,
    hasse_row,
    monotone_in_e,
    run_rows,
    uniform_row,
    vanishing_row,
)

PRIMES_100 = list(sympy.primerange(2, 101))


class TestDieudonneGrid:
    """Heights of Calabi-Yau varieties from the Dieudonne module."""

    @pytest.mark.integration
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_closed_form(self, p):
        for h in range(1, 6):
            for e in range(1, 7):
                closed = closed_form_height(h, e)
                assert quasi_fe_height(h, p, e, closed + 1) == Finite(closed)

    @pytest.mark.integration
    def test_abelian_table(self):
        for g in range(1, 6):
            for f in range(g + 1):
                for e in range(1, 11):
                    result = abelian_height(g, f, e)
                    if f == g:
                        assert result == Finite(1)
                    elif f == g - 1:
                        assert result == Finite(e + 1)
                    else:
                        assert not isinstance(result, Finite)

    @pytest.mark.integration
    def test_uniform_dichotomy(self):
        assert uniform_row(1, 2, 20).agree is True
        for h in (2, 3):
            assert uniform_row(h, 2, 6).agree is True


class TestCongruenceTables:
    """Tables against elliptic covers and the vanishing certificates."""

    @pytest.mark.integration
    @pytest.mark.parametrize("case", ['i', 'ii'])
    def test_hasse_congruences(self, case):
        for p in PRIMES_100:
            if p in (2, 3):
                continue
            assert hasse_row(case, p).agree is True

    @pytest.mark.integration
    @pytest.mark.parametrize("case,p", EXCLUDED_PAIRS)
    def test_vanishing(self, case, p):
        assert vanishing_row(case, p).agree is True

    @pytest.mark.integration
    def test_floor_degrees(self):
        delta = parse_divisor('1/2:0,2/3:1,5/6:inf')

        assert delta.scale(4).floor().degree() == 7
        assert delta.scale(3).floor().degree() == 5

    @pytest.mark.slow
    @pytest.mark.parametrize("p", PRIMES_100)
    def test_cases_i_to_iii(self, p):
        for case in ('i', 'ii', 'iii'):
            cls = classify(case_divisor(case))
            for e in (1, 2, 3):
                assert height_via_cover(cls, p, e) == height_from_table(cls, p, e)

    @pytest.mark.slow
    @pytest.mark.parametrize("p", PRIMES_100[1:])
    def test_case_iv_over_quadratic_extension(self, p):
        F = get_field(p, 2)
        rng = random.Random(p)
        for _ in range(20):
            lam = rng.randrange(2, F.q)
            cls = classify(case_divisor('iv', lam))
            for e in (1, 2, 3):
                assert height_via_cover(cls, p, e, F) == height_from_table(cls, p, e, F)


class TestDirectGrid:
    """Direct-verifier heights against the theorem tables."""

    @pytest.mark.integration
    @pytest.mark.parametrize("p", [2, 3, 5])
    @pytest.mark.parametrize("case", ['zero', 'i', 'ii', 'iii'])
    def test_small(self, case, p):
        row = direct_row(case, p, 1)

        assert row.agree is not False, row

    @pytest.mark.slow
    @pytest.mark.timeout(600)
    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_full(self, p):
        lambdas = random.Random(p).sample(range(2, p * p), min(3, p * p - 2))
        rows = []
        for e in (1, 2):
            rows.extend(direct_row(case, p, e) for case in ('zero', 'i', 'ii', 'iii'))
            rows.extend(direct_row('iv', p, e, lam, 2) for lam in lambdas)

        assert [r for r in rows if r.agree is False] == []
        assert monotone_in_e(rows) == []

    @pytest.mark.integration
    def test_exhaustive_traces_are_monotone(self):
        delta = parse_divisor('2/3:0,2/3:1,2/3:inf')
        for p in (2, 5, 7):
            verdict = height_search(p, delta, 1, 3, exhaustive=True)
            splits = [s for _, s in verdict.trace]
            assert splits == sorted(splits)


class TestMembershipOracle:
    """Filtration elimination against brute-force closure."""

    @pytest.mark.integration
    def test_random_instances(self):
        configs = [(2, 3, 2, 1), (3, 2, 1, 2), (2, 2, 2, 2), (5, 2, 1, 1), (3, 2, 2, 2)]
        rng = random.Random(2024)
        for i in range(200):
            p, n, rank, m = configs[i % len(configs)]
            G = WittModuleGroup(p=p, n=n, rank=rank, m=m)
            generators = [G.random_element(rng) for _ in range(rng.randint(1, 3))]
            S = SubgroupPresentation(G, generators)
            closure = bfs_closure(G, generators)

            assert p ** S.log_order() == len(closure)
            for _ in range(5):
                x = G.random_element(rng)
                assert S.contains(x) == (G.key(x) in closure)


def random_log_fano(rng: random.Random, p: int):
    """delta with p-power denominators and an integral E meeting at most two new points."""
    pool = [ZERO, ONE, INFINITY] + ([PointP1.rational(2)] if p > 2 else [])
    while True:
        points = rng.sample(pool, rng.randint(1, 3))
        coeffs = []
        for _ in points:
            q = p ** rng.randint(1, 2)
            coeffs.append(Fraction(rng.randint(1, q - 1), q))
        delta = QDivisor.from_mapping(list(zip(points, coeffs)))
        if delta.degree() < 2:
            break
    E = QDivisor.from_mapping([(pt, rng.randint(1, 2)) for pt in rng.sample(pool, rng.randint(1, 2))])
    return delta, E


class TestFanoSchedules:
    """Perturbation schedules of log Fano pairs."""

    @pytest.mark.integration
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_random_schedules(self, p):
        rng = random.Random(p)
        for _ in range(20):
            delta, E = random_log_fano(rng, p)
            schedule = fano_perturbation_schedule(delta, E, p)

            assert schedule.conditions.all_hold
            assert schedule.epsilon > 0
            assert delta + E.scale(schedule.epsilon) <= schedule.target
            assert schedule.target.floor().is_zero()
            assert schedule.target.degree() < 2
            assert all(mu > schedule.nu for mu in schedule.mus)
            assert schedule.mus == sorted(set(schedule.mus))

    @pytest.mark.slow
    @pytest.mark.timeout(600)
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_random_base_cases(self, p):
        """
        Two boundary points with at most one of them finite and nonzero always split
        at n = 1: the numerator monomial of the Cech generator lands in the middle range.
        """
        lim = GRID_LIMITS['full']
        rng = random.Random(100 + p)
        checked = 0
        for _ in range(20):
            delta, E = random_log_fano(rng, p)
            schedule = fano_perturbation_schedule(delta, E, p)
            if schedule.p > lim['p_direct'] or schedule.nu > lim['e_direct']:
                continue
            verdict = fano_base_check(schedule)
            if verdict is None:
                continue
            checked += 1

            assert isinstance(verdict, (Split, NotSplit))
            assert verdict.trace[0] == (1, height1_frobenius_test(schedule.target, p, schedule.nu))
            support = schedule.delta_prime.support()
            finite = [pt for pt in support if pt.is_rational and pt.value != 0]
            if len(support) <= 2 and len(finite) <= 1:
                assert verdict == Split(1), schedule
        assert checked > 0

    @pytest.mark.integration
    def test_base_case(self):
        """3/4 at 0 and 1, 1/16 at infinity: t^-4 survives multiplication by (t - 1)^3."""
        schedule = fano_perturbation_schedule(parse_divisor('1/2:0,1/2:1'), parse_divisor('1:inf'), 2)

        assert height1_frobenius_test(schedule.target, 2, schedule.nu)
        assert fano_base_check(schedule) == Split(1)


class TestSmallGrid:
    """The small cross-checking grid end to end."""

    @pytest.mark.slow
    @pytest.mark.timeout(600)
    def test_rows_agree_and_are_monotone(self):
        rows = run_rows(grid_tasks('small'))

        assert [r for r in rows if r.agree is False] == []
        assert monotone_in_e(rows) == []

    @pytest.mark.slow
    def test_check_all_exit_code(self, capsys):
        assert run(['check', 'all', '--grid', 'small']) == 0
