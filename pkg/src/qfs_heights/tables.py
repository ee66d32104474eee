"""
Row builders for heights, theorem tables and the cross-checking grids.

Each builder computes one ReportRow from plain arguments, so rows can be
shipped to worker processes; run_rows() evaluates a list of tasks and returns
the rows in task order whatever the completion order.

Usage:
    from qfs_heights.tables import table_rows

    for row in table_rows('ii', p_max=20, e=2):
        print(row.p, row.result)
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import sympy
from tqdm import tqdm

from qfs_heights.dieudonne import (
    ExceedsBound,
    Finite,
    HeightResult,
    abelian_height,
    closed_form_height,
    cy_height,
    quasi_fe_height,
    uniform_profile,
)
from qfs_heights.divisors import QDivisor, format_divisor, parse_divisor, vanishing_table
from qfs_heights.elliptic import cover_curve_for_case, is_supersingular
from qfs_heights.errors import UnsupportedParametersError
from qfs_heights.finite_field import FqContext, get_field
from qfs_heights.logcy import (
    VANISHING_DEPTH,
    case_divisor,
    classify,
    height_from_table,
    height_via_cover,
)
from qfs_heights.qfs_direct import (
    Inconclusive,
    NotSplit,
    Split,
    SplitQuery,
    SplitVerdict,
    height1_frobenius_test,
    height_search,
    split_verdict,
)
from qfs_heights.report import ReportRow

logger = logging.getLogger(__name__)

Task = Callable[[], ReportRow]

ROUTES = ('table', 'cover', 'both')
GRIDS = ('small', 'full')

# (case, p) pairs with no Cartier power of delta
EXCLUDED_PAIRS = (('i', 3), ('ii', 2), ('iii', 2), ('iii', 3), ('iv', 2))


def primes_up_to(p_max: int) -> List[int]:
    return list(sympy.primerange(2, p_max + 1))


# ----------------------------------------------------------------------
# single rows

def dieudonne_row(h: int, p: int, e: int, n_max: Optional[int] = None) -> ReportRow:
    """Membership engine against e h - e + 1."""
    closed = closed_form_height(h, e)
    n_max = n_max or closed + 1
    engine = quasi_fe_height(h, p, e, n_max)
    expected: HeightResult = Finite(closed) if closed <= n_max else ExceedsBound(n_max)
    return ReportRow('dieudonne', p, e, n_max, f'h={h}', str(engine),
                     'dieudonne+closed-form', engine == expected)


def abelian_row(g: int, f: int, e: int) -> ReportRow:
    """p-rank rule against the Calabi-Yau formula at Artin-Mazur height 1, 2 or infinity."""
    result = abelian_height(g, f, e)
    artin_mazur = {g: 1, g - 1: 2}.get(f)
    return ReportRow('abelian', None, e, None, f'g={g},f={f}', str(result),
                     'abelian+cy', result == cy_height(artin_mazur, e))


def logcy_row(literal: str, p: int, e: int, route: str = 'both', m: int = 1) -> ReportRow:
    """
    Height of a log Calabi-Yau pair by the table, the cover, or both.

    Raises:
        UnsupportedParametersError: For an unknown route or a pair without a height
    """
    if route not in ROUTES:
        raise UnsupportedParametersError(f"route must be one of {ROUTES}, got {route!r}")
    field = get_field(p, m)
    delta = parse_divisor(literal, field)
    return _logcy_row('logcy', delta, p, e, route, field)


def _logcy_row(mode: str, delta: QDivisor, p: int, e: int, route: str, field: FqContext) -> ReportRow:
    cls = classify(delta)
    query = format_divisor(delta, field)
    if route == 'table':
        return ReportRow(mode, p, e, None, query, str(height_from_table(cls, p, e, field)), 'table')
    if route == 'cover':
        return ReportRow(mode, p, e, None, query, str(height_via_cover(cls, p, e, field)), 'cover')
    table = height_from_table(cls, p, e, field)
    cover = height_via_cover(cls, p, e, field)
    return ReportRow(mode, p, e, None, query, f'table:{table},cover:{cover}', 'table+cover', table == cover)


def verify_row(literal: str, p: int, n: int, e: int, m: int = 1) -> ReportRow:
    """Direct verifier at one n; at n = 1 it is checked against the Frobenius test."""
    field = get_field(p, m)
    delta = parse_divisor(literal, field)
    verdict = split_verdict(SplitQuery(p, delta, n, e, field))
    result = _verdict_text(verdict)
    if isinstance(verdict, Inconclusive):
        return ReportRow('verify', p, e, n, literal, result, 'direct', False)
    if n == 1:
        frobenius = height1_frobenius_test(delta, p, e, field)
        return ReportRow('verify', p, e, n, literal, result, 'direct+frobenius',
                         frobenius == isinstance(verdict, Split))
    return ReportRow('verify', p, e, n, literal, result, 'direct')


def _verdict_text(verdict: SplitVerdict) -> str:
    if isinstance(verdict, Split):
        return 'split'
    if isinstance(verdict, NotSplit):
        return 'not split'
    return 'inconclusive'


def search_row(literal: str, p: int, e: int, n_max: int, m: int = 1) -> ReportRow:
    """Direct height search, checked against the table when delta is a treated log CY pair."""
    field = get_field(p, m)
    delta = parse_divisor(literal, field)
    return _search_row('search', delta, p, e, n_max, field)


def _search_row(mode: str, delta: QDivisor, p: int, e: int, n_max: int, field: FqContext) -> ReportRow:
    verdict = height_search(p, delta, e, n_max, field)
    query = format_divisor(delta, field)
    if isinstance(verdict, Inconclusive):
        return ReportRow(mode, p, e, n_max, query, str(verdict), 'direct', False)
    predicted = predicted_height(delta, p, e, field)
    if predicted is None:
        return ReportRow(mode, p, e, n_max, query, str(verdict), 'direct')
    return ReportRow(mode, p, e, n_max, query, str(verdict), 'direct+table',
                     verdict_matches(verdict, predicted, n_max))


def predicted_height(delta: QDivisor, p: int, e: int, field: FqContext) -> Optional[HeightResult]:
    """Height predicted by the theorems: 1 for delta = 0, the table for cases i-iv."""
    if delta.is_zero():
        return Finite(1)
    cls = classify(delta)
    if not cls.treated:
        return None
    return height_from_table(cls, p, e, field)


def verdict_matches(verdict: SplitVerdict, predicted: HeightResult, n_max: int) -> bool:
    """Finite(k) must give Split(k), or NotSplit(n_max) when k > n_max; Infinite must give NotSplit."""
    if isinstance(predicted, Finite) and predicted.n <= n_max:
        return isinstance(verdict, Split) and verdict.n == predicted.n
    return isinstance(verdict, NotSplit) and verdict.n == n_max


def _case_iv_field(p: int, lam_text: str):
    field = get_field(p)
    lam = field.parse(lam_text)
    if lam in (0, 1):
        # no fourth point in F_p; move to F_{p^2}
        field = get_field(p, 2)
        lam = field.parse('g')
    return field, lam


def table_row(case: str, p: int, e: int, lam: str = '-1', route: str = 'table') -> ReportRow:
    """
    Row for the standard model of `case` at p.

    For case iv the fourth point is the field literal `lam`; where it
    collides with 0 or 1 the generator of F_{p^2} is used instead.
    """
    field = get_field(p)
    value = None
    if case == 'iv':
        field, value = _case_iv_field(p, lam)
    return _logcy_row('table', case_divisor(case, value), p, e, route, field)


def table_tasks(case: str, p_max: int, e: int, lam: str = '-1', route: str = 'table') -> List[Task]:
    """One task per prime p <= p_max, primes ascending."""
    return [partial(table_row, case, p, e, lam, route) for p in primes_up_to(p_max)]


def table_rows(case: str, p_max: int, e: int, lam: str = '-1', route: str = 'table') -> List[ReportRow]:
    return run_rows(table_tasks(case, p_max, e, lam, route))


def hasse_row(case: str, p: int) -> ReportRow:
    """Hasse-invariant expansion against the congruence for the j = 0 and j = 1728 covers."""
    supersingular = is_supersingular(cover_curve_for_case(case, p))
    expected = p % 4 == 3 if case == 'ii' else p % 3 == 2
    return ReportRow('hasse', p, None, None, f'case={case}',
                     'supersingular' if supersingular else 'ordinary',
                     'hasse+congruence', supersingular == expected)


def vanishing_row(case: str, p: int) -> ReportRow:
    """h^1(floor(p^r (K + delta))) for r <= VANISHING_DEPTH; all zero certifies Infinite."""
    table = vanishing_table(case_divisor(case, 2 if case == 'iv' else None), p, VANISHING_DEPTH)
    values = [h1 for _, h1 in table]
    return ReportRow('vanishing', p, None, VANISHING_DEPTH, f'case={case}',
                     ','.join(map(str, values)), 'vanishing', not any(values))


def uniform_row(h: int, p: int, e_max: int) -> ReportRow:
    """Heights for e = 1..e_max: constant 1 for h = 1, strictly increasing for h >= 2."""
    profile = uniform_profile(h, p, e_max)
    expected = [Finite(e * (h - 1) + 1) for e in range(1, e_max + 1)]
    return ReportRow('uniform', p, e_max, None, f'h={h}', ','.join(map(str, profile)),
                     'dieudonne+closed-form', profile == expected)


def direct_row(case: str, p: int, e: int, lam: Optional[int] = None, m: int = 1) -> ReportRow:
    """Direct search for the standard model of a case, n_max = e + 2."""
    field = get_field(p, m)
    delta = QDivisor.zero() if case == 'zero' else case_divisor(case, lam)
    return _search_row('direct', delta, p, e, e + 2, field)


def logcy_sample_row(case: str, p: int, e: int, lam: Optional[int] = None, m: int = 1) -> ReportRow:
    field = get_field(p, m)
    return _logcy_row('logcy', case_divisor(case, lam), p, e, 'both', field)


# ----------------------------------------------------------------------
# grids

GRID_LIMITS: Dict[str, Dict[str, int]] = {
    'small': {'h': 3, 'e_cy': 3, 'g': 3, 'e_ab': 4, 'p_logcy': 30, 'lam_samples': 3,
              'e_logcy': 2, 'p_direct': 5, 'e_direct': 1, 'e_uniform': 6},
    'full': {'h': 5, 'e_cy': 6, 'g': 5, 'e_ab': 10, 'p_logcy': 100, 'lam_samples': 20,
             'e_logcy': 3, 'p_direct': 7, 'e_direct': 2, 'e_uniform': 20},
}


def _random_lambdas(p: int, count: int) -> List[int]:
    """Parameters of F_{p^2} outside {0, 1}, seeded by p."""
    rng = random.Random(p)
    q = p * p
    return [rng.randrange(2, q) for _ in range(count)]


def grid_tasks(grid: str = 'small') -> List[Task]:
    """
    Tasks of the cross-checking grid in output order.

    Raises:
        UnsupportedParametersError: For an unknown grid name
    """
    if grid not in GRID_LIMITS:
        raise UnsupportedParametersError(f"grid must be one of {GRIDS}, got {grid!r}")
    lim = GRID_LIMITS[grid]
    tasks: List[Task] = []

    for h in range(1, lim['h'] + 1):
        for e in range(1, lim['e_cy'] + 1):
            for p in (2, 3, 5):
                tasks.append(partial(dieudonne_row, h, p, e))

    for g in range(1, lim['g'] + 1):
        for f in range(g + 1):
            for e in range(1, lim['e_ab'] + 1):
                tasks.append(partial(abelian_row, g, f, e))

    logcy_primes = primes_up_to(lim['p_logcy'])
    for case in ('i', 'ii', 'iii'):
        for p in logcy_primes:
            for e in range(1, lim['e_logcy'] + 1):
                tasks.append(partial(logcy_sample_row, case, p, e))
    for p in logcy_primes:
        for lam in _random_lambdas(p, lim['lam_samples']):
            for e in range(1, lim['e_logcy'] + 1):
                tasks.append(partial(logcy_sample_row, 'iv', p, e, lam, 2))

    for case in ('i', 'ii'):
        for p in logcy_primes:
            if p not in (2, 3):
                tasks.append(partial(hasse_row, case, p))

    for case, p in EXCLUDED_PAIRS:
        tasks.append(partial(vanishing_row, case, p))

    for p in primes_up_to(lim['p_direct']):
        for e in range(1, lim['e_direct'] + 1):
            tasks.append(partial(direct_row, 'zero', p, e))
            for case in ('i', 'ii', 'iii'):
                tasks.append(partial(direct_row, case, p, e))
            tasks.append(partial(direct_row, 'iv', p, e, _random_lambdas(p, 1)[0], 2))

    for h in (1, 2, 3):
        tasks.append(partial(uniform_row, h, 2, lim['e_uniform'] if h == 1 else min(lim['e_uniform'], 6)))
    return tasks


def _call(task: Task) -> ReportRow:
    return task()


def run_rows(tasks: Sequence[Task], workers: int = 1, progress: bool = False) -> List[ReportRow]:
    """Evaluate tasks, in worker processes when workers > 1, keeping task order."""
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_call, tasks)
            return list(tqdm(results, total=len(tasks), disable=not progress, desc='rows'))
    return [_call(t) for t in tqdm(tasks, disable=not progress, desc='rows')]


def monotone_in_e(rows: Sequence[ReportRow]) -> List[str]:
    """
    Violations of h^e <= h^(e+1) among rows that differ only in e.

    '>N' is the range [N + 1, inf]: it violates only against a later height <= N.
    """
    def bounds(text: str) -> Tuple[float, float]:
        if text == 'inf':
            return float('inf'), float('inf')
        if text.startswith('>'):
            return float(text[1:]) + 1, float('inf')
        return float(text), float(text)

    groups: Dict[tuple, List[ReportRow]] = {}
    for row in rows:
        if row.e is None or row.mode not in ('dieudonne', 'abelian', 'logcy', 'direct'):
            continue
        result = row.result.split(',')[0].removeprefix('table:')
        if result in ('split', 'not split', 'inconclusive'):
            continue
        groups.setdefault((row.mode, row.p, row.query), []).append(row)

    violations = []
    for (mode, p, query), group in groups.items():
        group.sort(key=lambda r: r.e)
        for a, b in zip(group, group[1:]):
            ra, rb = a.result.split(',')[0].removeprefix('table:'), b.result.split(',')[0].removeprefix('table:')
            if bounds(ra)[0] > bounds(rb)[1]:
                violations.append(f"{mode} p={p} {query}: e={a.e} -> {ra}, e={b.e} -> {rb}")
    if violations:
        logger.warning("%d monotonicity violations in e", len(violations))
    return violations
