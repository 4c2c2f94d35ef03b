"""Codazzi relations as exact homogeneous linear systems in the connection forms.

Frame indices run 1..n; e1 is timelike, 3..n-1 carry the real curvatures
lambda_a, e_n is the gradient direction with lambda_n = -nH/2. ``w[i,j|k]``
denotes omega_ij^k, the e_k component of nabla_{e_i} e_j.

Metric compatibility relates omega_ij^k and omega_ik^j. Two sign tables are
supported:

* ``uniform``: omega_ij^k = -omega_ik^j for all j != k (the relation as
  usually written, ignoring the signature);
* ``lorentz``: omega_ij^k = -eps_j eps_k omega_ik^j with eps_1 = -1, which is
  what differentiating g(e_j, e_k) = eps_j delta_jk gives; the sign flips when
  exactly one of j, k is 1.

``auto`` picks the first convention under which the pairing
omega_22^n = omega_11^n, omega_12^n = -omega_21^n follows from the
e_n-derivative rows (see :func:`validate_convention`).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .linalg import RatMatrix, nullspace
from .polycore import ExactRational, rational
from .report import FAIL, PASS, rat_str

CONVENTIONS = ("lorentz", "uniform")


class SelectionError(ValueError):
    """A row selection that names an unknown or inadmissible row."""


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class FrameConfig:
    n: int
    lambda_values: Tuple[ExactRational, ...]   # lambda_3 .. lambda_{n-1}
    mu: ExactRational = 1
    H: ExactRational = 1
    lam: ExactRational = 0
    post_lemma33: bool = True
    keep_derivatives: bool = False
    convention: str = "auto"

    def __post_init__(self):
        if self.n < 4:
            raise ConfigError(f"n must be >= 4 (got {self.n})")
        vals = tuple(rational(v) for v in self.lambda_values)
        if len(vals) != self.n - 3:
            raise ConfigError(f"need {self.n - 3} curvatures lambda_3..lambda_{self.n - 1}, got {len(vals)}")
        object.__setattr__(self, "lambda_values", vals)
        for nm in ("mu", "H", "lam"):
            object.__setattr__(self, nm, rational(getattr(self, nm)))
        if self.mu == 0:
            raise ConfigError("mu must be nonzero")
        if self.H == 0:
            raise ConfigError("H must be nonzero")
        if self.post_lemma33 and self.lam != 0:
            raise ConfigError("post_lemma33 fixes lambda = 0")
        ln = self.lambda_n
        for a, v in zip(self.blocks, vals):
            if v == ln:
                raise ConfigError(f"lambda_{a} equals lambda_n = {rat_str(ln)}")
        if self.convention not in CONVENTIONS + ("auto",):
            raise ConfigError(f"unknown convention {self.convention!r}")
        if self.convention == "auto":
            object.__setattr__(self, "convention", resolve_convention(self.n))

    @property
    def blocks(self) -> range:
        return range(3, self.n)

    @property
    def nu(self) -> Fraction:
        return Fraction(self.n) * self.H / 2

    @property
    def lambda_n(self) -> ExactRational:
        return rational(-self.nu)

    def lam_a(self, a: int) -> ExactRational:
        return self.lambda_values[a - 3]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "lambda_values": [rat_str(v) for v in self.lambda_values],
            "mu": rat_str(self.mu),
            "H": rat_str(self.H),
            "lam": rat_str(self.lam),
            "post_lemma33": self.post_lemma33,
            "keep_derivatives": self.keep_derivatives,
            "convention": self.convention,
        }


# ------------------------------------------------------------------ unknowns

# ("w", i, j, k): omega_ij^k with j < k after canonicalisation
# ("d", i, q): e_i applied to q, q in {"lambda", "mu", "l<a>"}
Key = Tuple


def _eps(i: int) -> int:
    return -1 if i == 1 else 1


def canonical(i: int, j: int, k: int, convention: str) -> Tuple[int, Optional[Key]]:
    """Map omega_ij^k to (sign, canonical key); key None means identically 0."""
    if j == k:
        return 0, None
    if j < k:
        return 1, ("w", i, j, k)
    sign = -1 if convention == "uniform" else -_eps(j) * _eps(k)
    return sign, ("w", i, k, j)


def key_name(key: Key, n: int) -> str:
    def ix(v):
        return "n" if v == n else str(v)

    if key[0] == "w":
        _, i, j, k = key
        return f"w[{ix(i)},{ix(j)}|{ix(k)}]"
    _, i, q = key
    return f"e{ix(i)}({q})"


# ------------------------------------------------------------------ rows

Term = Tuple[ExactRational, Tuple]


class _Ctx:
    """Coefficient helpers while instantiating one row."""

    def __init__(self, cfg: FrameConfig):
        self.cfg = cfg
        self.n = cfg.n
        self.lam = cfg.lam
        self.mu = cfg.mu
        self.nu = cfg.nu

    def l(self, a: int):
        return self.cfg.lam_a(a)


def _w(c, i, j, k) -> Term:
    return (c, ("w", i, j, k))


def _d(c, i, q) -> Term:
    return (c, ("d", i, q))


# each template returns the terms of LHS - RHS = 0
ROW_INDEX = {  # index families a row is instantiated over
    "C1": "", "C2": "", "C3": "a", "C4": "", "C5": "a", "C6": "a", "C7": "a",
    "C8": "a", "C9": "ab", "C10": "", "C11": "", "C12": "", "C13": "a",
    "C14": "a", "C15": "a", "C16": "a", "C17": "ab", "C18": "", "C19": "",
    "C20": "", "C21": "ab", "C22": "ab", "C23": "ab", "C24": "abc", "C25": "a",
    "C26": "a", "C27": "a", "C28": "a", "C29": "ab", "sym": "pq",
}


def _row_terms(name: str, x: _Ctx, idx: Tuple[int, ...]) -> List[Term]:
    n, lam, mu, nu = x.n, x.lam, x.mu, x.nu
    a = idx[0] if idx else None
    b = idx[1] if len(idx) > 1 else None
    c = idx[2] if len(idx) > 2 else None
    L = x.l
    if name == "C1":
        return [_d(1, 2, "lambda"), _d(1, 1, "mu")]
    if name == "C2":
        return [_d(1, 1, "lambda"), _d(-1, 2, "mu")]
    if name == "C3":
        return [_w(lam - L(a), 1, 2, a), _w(-(lam - L(a)), 2, 1, a), _w(-mu, 2, 2, a), _w(-mu, 1, 1, a)]
    if name == "C4":
        return [_w(lam + nu, 1, 2, n), _w(-(lam + nu), 2, 1, n), _w(-mu, 2, 2, n), _w(-mu, 1, 1, n)]
    if name == "C5":
        return [_d(1, a, "lambda"), _w(-(L(a) - lam), 1, a, 1), _w(-mu, 1, a, 2)]
    if name == "C6":
        return [_d(1, a, "mu"), _w(-(L(a) - lam), 1, a, 2), _w(mu, 1, a, 1)]
    if name == "C7":
        return [_d(1, 1, f"l{a}"), _w(-(lam - L(a)), a, 1, a), _w(-mu, a, 2, a)]
    if name == "C8":
        return [_w(L(a) + nu, 1, a, n), _w(-(lam + nu), a, 1, n), _w(-mu, a, 2, n)]
    if name == "C9":
        return [_w(L(a) - L(b), 1, a, b), _w(-(lam - L(b)), a, 1, b), _w(-mu, a, 2, b)]
    if name == "C10":
        return [_w(-(lam + nu), 1, n, 1), _w(mu, 1, n, 2), _d(-1, n, "lambda")]
    if name == "C11":
        return [_w(-(lam + nu), 1, n, 2), _w(-mu, 1, n, 1), _d(-1, n, "mu")]
    if name == "C12":
        return [_w(lam + nu, n, 1, n), _w(mu, n, 2, n)]
    if name == "C13":
        return [_d(-1, a, "mu"), _w(-(L(a) - lam), 2, a, 1), _w(-mu, 2, a, 2)]
    if name == "C14":
        return [_d(1, a, "lambda"), _w(-(L(a) - lam), 2, a, 2), _w(mu, 2, a, 1)]
    if name == "C15":
        return [_d(1, 2, f"l{a}"), _w(-(lam - L(a)), a, 2, a), _w(mu, a, 1, a)]
    if name == "C16":
        return [_w(L(a) + nu, 2, a, n), _w(-(lam + nu), a, 2, n), _w(mu, a, 1, n)]
    if name == "C17":
        return [_w(L(a) - L(b), 2, a, b), _w(-(lam - L(b)), a, 2, b), _w(mu, a, 1, b)]
    if name == "C18":
        return [_w(-(lam + nu), 2, n, 1), _w(mu, 2, n, 2), _d(1, n, "mu")]
    if name == "C19":
        return [_w(-(lam + nu), 2, n, 2), _w(-mu, 2, n, 1), _d(-1, n, "lambda")]
    if name == "C20":
        return [_w(lam + nu, n, 2, n), _w(-mu, n, 1, n)]
    if name == "C21":
        return [_w(L(b) - lam, a, b, 1), _w(mu, a, b, 2), _w(-(L(a) - lam), b, a, 1), _w(-mu, b, a, 2)]
    if name == "C22":
        return [_w(L(b) - lam, a, b, 2), _w(-mu, a, b, 1), _w(-(L(a) - lam), b, a, 2), _w(mu, b, a, 1)]
    if name == "C23":
        return [_w(L(b) + nu, a, b, n), _w(-(L(a) + nu), b, a, n)]
    if name == "C24":
        return [_w(L(b) - L(c), a, b, c), _w(-(L(a) - L(c)), b, a, c)]
    if name == "C25":
        return [_w(-(lam + nu), a, n, 1), _w(mu, a, n, 2), _w(-(L(a) - lam), n, a, 1), _w(-mu, n, a, 2)]
    if name == "C26":
        return [_w(-(lam + nu), a, n, 2), _w(-mu, a, n, 1), _w(-(L(a) - lam), n, a, 2), _w(mu, n, a, 1)]
    if name == "C27":
        return [_d(1, n, f"l{a}"), _w(nu + L(a), a, n, a)]
    if name == "C28":
        return [_w(1, n, a, n)]
    if name == "C29":
        return [_w(-(L(b) + nu), a, n, b), _w(-(L(a) - L(b)), n, a, b)]
    if name == "sym":
        p, q = idx
        return [_w(1, p, q, n), _w(-1, q, p, n)]
    raise SelectionError(f"unknown row {name!r}")


def _derivative_policy(cfg: FrameConfig, q: str) -> str:
    """'zero', 'unknown' or 'forbidden' for a derivative of quantity q."""
    if q == "lambda" and cfg.post_lemma33:
        return "zero"
    if cfg.keep_derivatives:
        return "unknown"
    if q == "mu" and cfg.post_lemma33:
        return "zero"
    return "forbidden"


def _instances(name: str, cfg: FrameConfig) -> List[Tuple[int, ...]]:
    fam = ROW_INDEX[name]
    B = list(cfg.blocks)
    if fam == "":
        return [()]
    if fam == "pq":
        idx = [1, 2] + B
        return [(p, q) for p, q in itertools.combinations(idx, 2)]
    return list(itertools.permutations(B, len(fam)))


ALL_ROWS = [f"C{i}" for i in range(1, 30)] + ["sym"]

_SEL = re.compile(r"\s*(all|sym|C\d+)(?:\[([^\]]*)\])?\s*(?:,|$)")


def parse_selection(text: Union[str, Sequence[str]]) -> List[Tuple[str, Optional[Tuple[int, ...]]]]:
    """Parse "C23, C23[3,4], sym, all" into (row, index-or-None) pairs."""
    if not isinstance(text, str):
        text = ",".join(text)
    out, pos = [], 0
    text = text.strip()
    if not text:
        return []
    while pos < len(text):
        m = _SEL.match(text, pos)
        if not m or m.end() == pos:
            raise SelectionError(f"cannot parse row selection at {text[pos:]!r}")
        name, idx = m.group(1), m.group(2)
        if name != "all" and name not in ROW_INDEX:
            raise SelectionError(f"unknown row {name!r}")
        ix = None
        if idx is not None:
            try:
                ix = tuple(int(t) for t in idx.split(",") if t.strip())
            except ValueError:
                raise SelectionError(f"bad index list in {m.group(0).strip()!r}") from None
        out.append((name, ix))
        pos = m.end()
    return out


def _admissible(name: str, cfg: FrameConfig) -> bool:
    qs = _row_derivatives(name)
    return all(_derivative_policy(cfg, q) != "forbidden" for q in qs)


def _row_derivatives(name: str) -> List[str]:
    if name not in ROW_INDEX:
        raise SelectionError(f"unknown row {name!r}")
    deriv = {
        "C7": ["la"], "C15": ["la"], "C27": ["la"],
        "C1": ["lambda", "mu"], "C2": ["lambda", "mu"], "C5": ["lambda"], "C6": ["mu"],
        "C10": ["lambda"], "C11": ["mu"], "C13": ["mu"], "C14": ["lambda"],
        "C18": ["mu"], "C19": ["lambda"],
    }
    return deriv.get(name, [])


@dataclass
class ConstraintSystem:
    unknowns: List[Key]
    matrix: RatMatrix
    provenance: List[str]
    n: int

    @property
    def names(self) -> List[str]:
        return [key_name(k, self.n) for k in self.unknowns]

    def nullspace(self) -> List[Tuple[ExactRational, ...]]:
        return nullspace(self.matrix)

    def forced_zero(self) -> List[Key]:
        basis = self.nullspace()
        return [k for j, k in enumerate(self.unknowns) if all(v[j] == 0 for v in basis)]

    def entails(self, functional: Dict[Key, ExactRational]) -> bool:
        """True when sum c_k x_k vanishes on every solution."""
        col = {k: j for j, k in enumerate(self.unknowns)}
        for v in self.nullspace():
            s = 0
            for k, c in functional.items():
                if k in col:
                    s += c * v[col[k]]
                elif c:
                    # an unknown the system never mentions is unconstrained
                    return False
            if s:
                return False
        return True

    def residual(self, v: Sequence[ExactRational]) -> Tuple[ExactRational, ...]:
        return self.matrix.apply(v)


def omega_universe(n: int) -> List[Key]:
    return [("w", i, j, k) for i in range(1, n + 1) for j in range(1, n + 1) for k in range(j + 1, n + 1)]


def assemble(cfg: FrameConfig, rows: Union[str, Sequence]) -> ConstraintSystem:
    sel = parse_selection(rows) if isinstance(rows, str) else [
        r if isinstance(r, tuple) else (r, None) for r in rows]
    expanded: List[Tuple[str, Tuple[int, ...]]] = []
    for name, ix in sel:
        if name == "all":
            for nm in ALL_ROWS:
                if _admissible(nm, cfg):
                    expanded.extend((nm, t) for t in _instances(nm, cfg))
            continue
        if not _admissible(name, cfg):
            raise SelectionError(
                f"row {name} contains derivative terms that are not removable under this configuration")
        if ix is None:
            expanded.extend((name, t) for t in _instances(name, cfg))
        else:
            fam = ROW_INDEX[name]
            want = 2 if fam == "pq" else len(fam)
            if len(ix) != want:
                raise SelectionError(f"row {name} takes {want} indices, got {len(ix)}")
            if ix not in _instances(name, cfg):
                raise SelectionError(f"indices {ix} are not valid for row {name} at n={cfg.n}")
            expanded.append((name, ix))

    x = _Ctx(cfg)
    row_dicts, prov, seen = [], [], set()
    for name, ix in expanded:
        if (name, ix) in seen:
            continue
        seen.add((name, ix))
        acc: Dict[Key, Fraction] = {}
        for c, sym in _row_terms(name, x, ix):
            if sym[0] == "w":
                sign, key = canonical(*sym[1:], cfg.convention)
                if key is None:
                    continue
                c = c * sign
            else:
                q = sym[2] if sym[2] in ("lambda", "mu") else "la"
                if _derivative_policy(cfg, q) == "zero":
                    continue
                key = sym
            acc[key] = acc.get(key, 0) + c
        acc = {k: rational(Fraction(v)) for k, v in acc.items() if v}
        row_dicts.append(acc)
        tag = name if not ix else f"{name}[{','.join(map(str, ix))}]"
        prov.append(tag)

    unknowns = list(omega_universe(cfg.n))
    extra = sorted({k for r in row_dicts for k in r if k[0] == "d"}, key=lambda k: (k[1], k[2]))
    unknowns.extend(extra)
    col = {k: j for j, k in enumerate(unknowns)}
    mat = []
    for r in row_dicts:
        row = [0] * len(unknowns)
        for k, v in r.items():
            row[col[k]] = v
        mat.append(row)
    return ConstraintSystem(unknowns, RatMatrix(mat, len(unknowns)), prov, cfg.n)


# ------------------------------------------------------------------ expectations

def _key(i, j, k, cfg: FrameConfig) -> Optional[Key]:
    return canonical(i, j, k, cfg.convention)[1]


def expected_vanishing(cfg: FrameConfig) -> Dict[str, List[Key]]:
    """The vanishing lists, grouped by where they come from.

    Pairs with equal curvatures drop the stated exceptions.
    """
    n = cfg.n
    B = list(cfg.blocks)
    groups: Dict[str, List[Tuple[int, int, int]]] = {k: [] for k in ("pair_normal", "complex_normal", "normal_normal", "complex_block_normal", "normal_block_complex", "pair_complex")}
    groups["complex_normal"] = [(2, 2, n), (1, 1, n), (1, 2, n), (2, 1, n), (2, n, 1), (1, n, 2), (2, n, 2), (1, n, 1)]
    groups["normal_normal"] = [(n, 1, n), (n, 2, n), (n, n, 1), (n, n, 2)] + [(n, n, a) for a in B]
    for a in B:
        groups["complex_block_normal"] += [(1, a, n), (2, a, n), (a, 1, n), (a, 2, n), (1, n, a), (2, n, a), (a, n, 1), (a, n, 2)]
        groups["normal_block_complex"] += [(n, a, 1), (n, a, 2), (n, 1, a), (n, 2, a)]
    for a, b in itertools.permutations(B, 2):
        equal = cfg.lam_a(a) == cfg.lam_a(b)
        groups["pair_normal"] += [(a, b, n), (b, a, n), (a, n, b)] + ([] if equal else [(n, b, a)])
        groups["pair_complex"] += [(a, b, 1), (a, b, 2), (a, 1, b), (a, 2, b)] + ([] if equal else [(1, a, b), (2, a, b)])
    out = {}
    for g, lst in groups.items():
        keys = []
        for t in lst:
            k = _key(*t, cfg)
            if k is not None and k not in keys:
                keys.append(k)
        out[g] = keys
    return out


def stated_exceptions(cfg: FrameConfig) -> List[Key]:
    """Unknowns the vanishing statements exempt for equal-curvature pairs."""
    n, out = cfg.n, []
    for a, b in itertools.permutations(cfg.blocks, 2):
        if cfg.lam_a(a) == cfg.lam_a(b):
            for t in ((n, b, a), (1, a, b), (2, a, b)):
                k = _key(*t, cfg)
                if k is not None and k not in out:
                    out.append(k)
    return out


@dataclass
class VanishingReport:
    config: FrameConfig
    rows_used: List[str]
    unknown_count: int
    nullspace_dim: int
    forced_zero: List[Key]
    expected_zero: List[Key]
    missing: List[Key]
    exceptions: List[Key]
    exceptions_forced: List[Key]
    verdict: str

    def to_dict(self) -> dict:
        n = self.config.n
        names = lambda ks: [key_name(k, n) for k in ks]  # noqa: E731
        return {
            "config": self.config.to_dict(),
            "rows_used": self.rows_used,
            "unknown_count": self.unknown_count,
            "nullspace_dim": self.nullspace_dim,
            "forced_zero": names(self.forced_zero),
            "expected_zero": names(self.expected_zero),
            "missing": names(self.missing),
            "exceptions": names(self.exceptions),
            "exceptions_forced": names(self.exceptions_forced),
            "verdict": self.verdict,
        }


def _compress(tags: List[str]) -> List[str]:
    """Row tags with instances collapsed to their family, in first-seen order."""
    out = []
    for t in tags:
        fam = t.split("[")[0]
        if fam not in out:
            out.append(fam)
    return out


def vanishing_report(cfg: FrameConfig, rows: Union[str, Sequence] = "all") -> VanishingReport:
    sysm = assemble(cfg, rows)
    basis = sysm.nullspace()
    forced = [k for j, k in enumerate(sysm.unknowns) if all(v[j] == 0 for v in basis)]
    fset = set(forced)
    expected = [k for ks in expected_vanishing(cfg).values() for k in ks]
    expected = list(dict.fromkeys(expected))
    missing = [k for k in expected if k not in fset]
    exc = stated_exceptions(cfg)
    exc_forced = [k for k in exc if k in fset]
    ok = not missing and not exc_forced
    return VanishingReport(cfg, _compress(sysm.provenance), len(sysm.unknowns), len(basis),
                           forced, expected, missing, exc, exc_forced, PASS if ok else FAIL)


# ------------------------------------------------------------------ conventions

def _pairing_functionals(n: int) -> Dict[str, Dict[Key, int]]:
    w = lambda i, j, k: ("w", i, j, k)  # noqa: E731  (already canonical: j < k)
    return {
        "w22n = w11n": {w(2, 2, n): 1, w(1, 1, n): -1},
        "w12n = -w21n": {w(1, 2, n): 1, w(2, 1, n): 1},
    }


def validate_convention(n: int, convention: str, mu=1, H=1, lam=0) -> Dict[str, bool]:
    """Does equating the e_n(lambda) and e_n(mu) rows give the pairing identities?

    Derivatives are kept as unknowns so nothing is assumed about them.
    """
    cfg = FrameConfig(n, tuple(range(1, n - 2)), mu, H, lam, post_lemma33=False,
                      keep_derivatives=True, convention=convention)
    sysm = assemble(cfg, "C10,C11,C18,C19")
    return {k: sysm.entails(f) for k, f in _pairing_functionals(n).items()}


_RESOLVED: Dict[int, str] = {}


def resolve_convention(n: int) -> str:
    """First convention (lorentz, then uniform) that passes validation."""
    if n not in _RESOLVED:
        pick = "uniform"
        for conv in CONVENTIONS:
            if all(validate_convention(n, conv).values()):
                pick = conv
                break
        _RESOLVED[n] = pick
    return _RESOLVED[n]


# ------------------------------------------------------------------ mu degeneracy

def degenerate_mu_check(cfg: FrameConfig) -> dict:
    """Case analysis on lambda_a^2 = mu^2 for every block index a.

    Degenerate a: e_n(mu) = 0 gives e_n(lambda_a) = 0, so the e_n row for
    lambda_a forces omega_an^a = 0, i.e. omega_aa^n = 0; then the curvature
    relation e_n(omega_aa^n) - (omega_aa^n)^2 = -(nH/2) lambda_a leaves
    (nH/2) lambda_a = 0, so lambda_a = 0 and mu = 0, a contradiction.

    Nondegenerate a: the e1/e2/e_a rows with e_a(mu) kept unknown force the
    e1/e2 connection forms of block a to vanish.
    """
    if not cfg.post_lemma33:
        raise ConfigError("degenerate_mu_check needs post_lemma33")
    n, mu, nu = cfg.n, cfg.mu, cfg.nu
    out = []
    kcfg = FrameConfig(cfg.n, cfg.lambda_values, cfg.mu, cfg.H, 0, True, True, cfg.convention)
    for a in cfg.blocks:
        la = cfg.lam_a(a)
        entry: Dict[str, object] = {"a": a, "lambda_a": rat_str(la)}
        sel = f"C3[{a}],C5[{a}],C6[{a}],C13[{a}],C14[{a}]"
        sysm = assemble(kcfg, sel)
        forced = set(sysm.forced_zero())
        w12 = canonical(1, 2, a, kcfg.convention)[1]
        if la * la == mu * mu:
            chain = ["lambda_a^2 = mu^2 assumed",
                     f"linear rows alone leave w[1,2|{a}] free: {w12 not in forced}",
                     "e_n(mu) = 0, hence e_n(lambda_a) = 0"]
            coef = nu + la
            # coef != 0 because lambda_a != lambda_n
            chain.append(f"C27: {rat_str(coef)} * w[{a},n|{a}] = 0, so w[{a},n|{a}] = 0 and w[{a},{a}|n] = 0")
            residual = nu * la
            chain.append(f"curvature relation: 0 = -(nH/2) lambda_a = {rat_str(-residual)}")
            if residual != 0:
                chain.append("nonzero residual: the assumption is inconsistent")
            else:
                chain.append("lambda_a = 0 forces mu = 0")
            chain.append("contradiction with mu != 0")
            entry.update({"degenerate": True, "chain": chain, "outcome": "contradiction"})
        else:
            targets = [(2, 1, a), (2, 2, a), (1, 1, a), (2, a, 1), (2, a, 2), (1, a, 1), (1, 2, a), (1, a, 2)]
            keys = [canonical(*t, kcfg.convention)[1] for t in targets]
            ok = all(k in forced for k in keys)
            entry.update({"degenerate": False, "rows": sel,
                          "forced": [key_name(k, n) for k in dict.fromkeys(keys) if k in forced],
                          "outcome": "forced zero" if ok else "not forced"})
        out.append(entry)
    ok = all(e["outcome"] in ("contradiction", "forced zero") for e in out)
    return {"config": cfg.to_dict(), "blocks": out, "verdict": PASS if ok else FAIL}
