"""Two-parameter region scans with CSV and SVG output.

A family maps a grid point ``(s, t)`` to a matrix; each cell is classified
as outside the nonnegative cone, maximal, nonmaximal, or boundary-uncertain
(only possible when the entries had to be rationalized). Grid coordinates
are exact rationals, so exact families give exact verdicts.
"""
from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ParseError
from .matrix import NonnegMatrix, rationalize
from .rank import decide_nonmaximal, is_nonmaximal
from .semialg import all_determinants_nonpositive, semialg_3x3, semialg_general

MAX_RESOLUTION = 2001

PALETTE = {
    "outside_cone": "#d3d3d3",
    "maximal": "#ffffff",
    "nonmaximal": "#ffd700",
    "inner": "#2e8b57",
    "boundary_uncertain": "#d62728",
}


class Verdict(enum.Enum):
    OUTSIDE_CONE = "outside_cone"
    MAXIMAL = "maximal"
    NONMAXIMAL = "nonmaximal"
    BOUNDARY_UNCERTAIN = "boundary_uncertain"


# nonmaximal, yet one column permutation gives a positive comparison determinant
GAP5 = (
    (7, 4, 9, 10, 0),
    (9, 2, 3, 0, 3),
    (3, 10, 6, 4, 8),
    (0, 4, 1, 6, 4),
    (0, 3, 3, 10, 2),
)


def _normalize_rows(rows):
    return [[Fraction(v) / sum(row) for v in row] for row in rows]


_SLICE_I = _normalize_rows([[int(i == j) for j in range(5)] for i in range(5)])
_SLICE_E = _normalize_rows(GAP5)
_SLICE_J = _normalize_rows([[1] * 5 for _ in range(5)])


def circulant3(x, y):
    return [[1, x, y], [y, 1, x], [x, y, 1]]


def param3x4(x, y):
    return [
        [x - y + 1, x - y + 1, x + 1, 1],
        [1 - x, -x + y + 1, 1 - y, x + y + 1],
        [1 - y, 1 - x, 1, x - y + 1],
    ]


def slice5(s, t):
    """``s * I + t * E + (1 - s - t) * J``, each anchor scaled to unit row sums."""
    r = 1 - s - t
    return [[s * a + t * e + r * j for a, e, j in zip(ra, re, rj)]
            for ra, re, rj in zip(_SLICE_I, _SLICE_E, _SLICE_J)]


@dataclass(frozen=True)
class ScanFamily:
    name: str
    build: object
    s_range: tuple
    t_range: tuple
    inner: bool = False
    description: str = ""


def _window(a, b):
    return (Fraction(a), Fraction(b))


FAMILIES = {
    "circulant3": ScanFamily("circulant3", circulant3, _window(0, 3), _window(0, 3),
                             description="[[1,s,t],[t,1,s],[s,t,1]]"),
    "param3x4": ScanFamily("param3x4", param3x4, _window("-3/2", "3/2"), _window("-3/2", "3/2"),
                           description="3x4 affine family in (s,t)"),
    "slice5": ScanFamily("slice5", slice5, _window("-1/2", "3/2"), _window("-1/2", "3/2"), inner=True,
                         description="s*I + t*E + (1-s-t)*J with unit row sums"),
}


class _Template:
    """Matrix of sympy expressions in ``s`` and ``t``; picklable for worker processes."""

    def __init__(self, text):
        self.text = text
        self._compile()

    def _compile(self):
        import sympy

        s, t = sympy.symbols("s t")
        rows = []
        for lineno, raw in enumerate(self.text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                rows.append([sympy.sympify(tok, locals={"s": s, "t": t}) for tok in _split_top(line)])
            except (sympy.SympifyError, SyntaxError, TypeError) as exc:
                raise ParseError(f"template line {lineno}: {exc}") from None
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ParseError("template rows are missing or ragged")
        for row in rows:
            for expr in row:
                if expr.free_symbols - {s, t}:
                    raise ParseError(f"unknown symbols in {expr}")
        self._rows, self._s, self._t = rows, s, t

    def __getstate__(self):
        return {"text": self.text}

    def __setstate__(self, state):
        self.text = state["text"]
        self._compile()

    def __call__(self, s, t):
        import sympy

        subs = {self._s: sympy.Rational(s.numerator, s.denominator),
                self._t: sympy.Rational(t.numerator, t.denominator)}
        out = []
        for row in self._rows:
            vals = []
            for expr in row:
                v = sympy.nsimplify(expr.subs(subs)) if not expr.is_number else expr
                v = sympy.simplify(v)
                if v.is_Rational:
                    vals.append(Fraction(int(v.p), int(v.q)))
                elif v.is_real:
                    vals.append(_Irrational(float(v)))
                else:
                    raise DomainError(f"entry {expr} is not real at s={s}, t={t}")
            out.append(vals)
        return out


class _Irrational(float):
    """Marker for entries that can only be rationalized."""


def _split_top(line):
    parts, depth, cur = [], 0, []
    for ch in line:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def custom_family(template_text, s_range=(0, 1), t_range=(0, 1)):
    return ScanFamily("custom", _Template(template_text), _window(*s_range), _window(*t_range),
                      description="user template")


def get_family(name, template_text=None):
    if name == "custom":
        if template_text is None:
            raise DomainError("the custom family needs a template")
        return custom_family(template_text)
    try:
        return FAMILIES[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; choose from {sorted(FAMILIES) + ['custom']}") from None


def grid_axis(lo, hi, n):
    """``n`` equally spaced exact rationals from ``lo`` to ``hi``."""
    if n < 1:
        raise DomainError("resolution must be positive")
    if n == 1:
        return [Fraction(lo)]
    return [lo + (hi - lo) * Fraction(i, n - 1) for i in range(n)]


def _semialg_member(A):
    n, m = A.shape
    if n > m:
        A, (n, m) = A.T, (m, n)
    test = semialg_3x3 if n == 3 else semialg_general
    return all(test(A.submatrix(cols=cols)).member for cols in itertools.combinations(range(m), n))


def classify(entries, method="lp", inner=False):
    """Verdict (and optional inner-set flag) for one matrix given as rows."""
    flat = [float(v) for row in entries for v in row]
    if any(v < 0 for v in flat):
        return Verdict.OUTSIDE_CONE, None
    approximate = any(isinstance(v, _Irrational) for row in entries for v in row)
    if approximate:
        A = NonnegMatrix([[rationalize(float(v)) if isinstance(v, _Irrational) else v for v in row]
                          for row in entries], approximate=True)
        decision = decide_nonmaximal(A)
        if decision.boundary_uncertain:
            return Verdict.BOUNDARY_UNCERTAIN, None
        return (Verdict.NONMAXIMAL if decision.is_nonmaximal else Verdict.MAXIMAL), None
    A = NonnegMatrix(entries)
    if method == "lp":
        nonmax = is_nonmaximal(A)
    elif method == "semialg":
        nonmax = _semialg_member(A)
    else:
        raise DomainError(f"unknown method {method!r}")
    inner_flag = None
    if inner:
        inner_flag = nonmax and A.n_rows == A.n_cols and all_determinants_nonpositive(A)
    return (Verdict.NONMAXIMAL if nonmax else Verdict.MAXIMAL), inner_flag


def _classify_point(args):
    build, s, t, method, inner = args
    return classify(build(s, t), method, inner)


@dataclass(frozen=True)
class RegionGrid:
    """Cells in row-major order: index ``j * resolution + i`` for ``(s_i, t_j)``."""

    family: str
    s_range: tuple
    t_range: tuple
    resolution: int
    method: str
    cells: tuple
    inner: tuple = None

    @property
    def s_values(self):
        return grid_axis(*self.s_range, self.resolution)

    @property
    def t_values(self):
        return grid_axis(*self.t_range, self.resolution)

    def points(self):
        svals = self.s_values
        for j, t in enumerate(self.t_values):
            for i, s in enumerate(svals):
                yield i, j, s, t

    def cell(self, i, j):
        return self.cells[j * self.resolution + i]

    def counts(self):
        out = {v: 0 for v in Verdict}
        for c in self.cells:
            out[c] += 1
        return out


def scan(family, resolution, method="lp", threads=1, s_range=None, t_range=None):
    if isinstance(family, str):
        family = get_family(family)
    if not 1 <= resolution <= MAX_RESOLUTION:
        raise DomainError(f"resolution must lie in [1, {MAX_RESOLUTION}]")
    s_range = _window(*s_range) if s_range else family.s_range
    t_range = _window(*t_range) if t_range else family.t_range
    svals = grid_axis(*s_range, resolution)
    tvals = grid_axis(*t_range, resolution)
    jobs = [(family.build, s, t, method, family.inner) for t in tvals for s in svals]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_classify_point, jobs, chunksize=max(1, len(jobs) // (8 * threads))))
    else:
        results = [_classify_point(job) for job in jobs]
    cells = tuple(r[0] for r in results)
    inner = tuple(bool(r[1]) for r in results) if family.inner else None
    return RegionGrid(family.name, s_range, t_range, resolution, method, cells, inner)


def _metadata(grid):
    return (f"family={grid.family} s_range=[{grid.s_range[0]},{grid.s_range[1]}] "
            f"t_range=[{grid.t_range[0]},{grid.t_range[1]}] resolution={grid.resolution} method={grid.method}")


def render_csv(grid):
    header = "s,t,verdict" + (",inner" if grid.inner is not None else "")
    lines = [f"# {_metadata(grid)}", header]
    for i, j, s, t in grid.points():
        idx = j * grid.resolution + i
        row = f"{s},{t},{grid.cells[idx].value}"
        if grid.inner is not None:
            row += f",{int(grid.inner[idx])}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def _color(grid, idx):
    if grid.inner is not None and grid.inner[idx]:
        return PALETTE["inner"]
    return PALETTE[grid.cells[idx].value]


def render_svg(grid, size=600):
    """Flat raster of colored cells, merged into horizontal runs, with a legend."""
    n = grid.resolution
    cell = max(1, size // n)
    width = height = cell * n
    legend_h = 20
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height + legend_h * 6}" '
        f'shape-rendering="crispEdges">',
        f"<desc>{_metadata(grid)}</desc>",
    ]
    for j in range(n):
        y = (n - 1 - j) * cell
        i = 0
        while i < n:
            color = _color(grid, j * n + i)
            start = i
            while i < n and _color(grid, j * n + i) == color:
                i += 1
            parts.append(f'<rect x="{start * cell}" y="{y}" width="{(i - start) * cell}" height="{cell}" fill="{color}"/>')
    labels = [("outside_cone", "outside cone"), ("maximal", "maximal"), ("nonmaximal", "nonmaximal"),
              ("inner", "all determinants <= 0"), ("boundary_uncertain", "boundary uncertain")]
    for k, (key, text) in enumerate(labels):
        y = height + 4 + k * legend_h
        parts.append(f'<rect x="4" y="{y}" width="12" height="12" fill="{PALETTE[key]}" stroke="#000000"/>')
        parts.append(f'<text x="22" y="{y + 11}" font-family="monospace" font-size="12">{text}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
