"""Flag-algebra certificates: data model, bound evaluation and exact verification.

A certificate claims ``t(target, W) >= constant`` for every regular
tournamenton ``W``.  With flag families ``F^q`` and matrices ``A_q`` it is
valid when every ``A_q`` is positive semidefinite and, for every ``m``-vertex
class ``J``,

    c(J) = t_inj(target, J) - sum_q sum_ij b(F_i, F_j; J) (A_q)_ij >= constant.

Upper bounds are stored with a negated target so one routine handles both.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional

from .density import LinComb, format_lincomb, t_inj
from .exact import PSDResult, SymMatrix, as_rational, format_rational, psd_check, same_span
from .flags import Flag, FlagFamily, parse_flag, product_coefficients
from .tournaments import Tournament, enumerate_tournaments, parse_tournament

BUILTIN = ("h10", "h11", "h13", "h14")


class CertificateFormatError(ValueError):
    """Malformed certificate data; the message names the offending location."""


@dataclass(frozen=True)
class CertFamily:
    family: FlagFamily
    rows: tuple  # exact entries, not necessarily symmetric when read from a file
    kernel: Optional[tuple] = None
    scale: Fraction = Fraction(1)
    raw_rows: tuple = ()

    @property
    def size(self) -> int:
        return len(self.family)

    def symmetry_defect(self):
        """First ``(i, j)`` with ``A_ij != A_ji``, or ``None``."""
        n = len(self.rows)
        for i in range(n):
            for j in range(i + 1, n):
                if self.rows[i][j] != self.rows[j][i]:
                    return (i, j)
        return None

    def matrix(self) -> SymMatrix:
        return SymMatrix(self.rows)


@dataclass(frozen=True)
class Certificate:
    name: str
    target: LinComb
    constant: Fraction
    families: tuple
    m: int = 5
    sense: str = "min>="

    # -- JSON ---------------------------------------------------------------

    @classmethod
    def from_dict(cls, data) -> "Certificate":
        return _parse_certificate(data)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return _parse_certificate(data)

    @classmethod
    def load(cls, path) -> "Certificate":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def to_dict(self) -> dict:
        fams = []
        for cf in self.families:
            entry = {
                "root": cf.family.root.encode(),
                "k": cf.family.k,
                "flags": [f.encode() for f in cf.family],
            }
            if cf.scale != 1:
                entry["scale"] = format_rational(cf.scale)
                entry["matrix"] = [[format_rational(x) for x in row] for row in cf.raw_rows]
            else:
                entry["matrix"] = [[format_rational(x) for x in row] for row in cf.rows]
            if cf.kernel is not None:
                entry["kernel"] = [[format_rational(x) for x in v] for v in cf.kernel]
            fams.append(entry)
        return {
            "name": self.name,
            "target": [{"coeff": format_rational(c), "tournament": t.encode()} for c, t in self.target.terms],
            "constant": format_rational(self.constant),
            "m": self.m,
            "sense": self.sense,
            "families": fams,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def without_family(self, index: int) -> "Certificate":
        fams = tuple(f for i, f in enumerate(self.families) if i != index)
        return Certificate(self.name, self.target, self.constant, fams, self.m, self.sense)

    def with_entry(self, q: int, i: int, j: int, delta) -> "Certificate":
        """Copy with ``(A_q)_ij`` shifted by ``delta`` (a single entry)."""
        cf = self.families[q]
        rows = [list(r) for r in cf.rows]
        rows[i][j] += as_rational(delta)
        new = CertFamily(cf.family, tuple(tuple(r) for r in rows), cf.kernel)
        fams = tuple(new if k == q else f for k, f in enumerate(self.families))
        return Certificate(self.name, self.target, self.constant, fams, self.m, self.sense)


def _fail(where: str, msg: str):
    raise CertificateFormatError(f"{where}: {msg}")


def _rat(value, where):
    try:
        if isinstance(value, (int, str)) and not isinstance(value, bool):
            return as_rational(value)
    except (ValueError, ZeroDivisionError):
        pass
    _fail(where, f"expected a rational 'p/q', got {value!r}")


def _parse_certificate(data) -> Certificate:
    if not isinstance(data, dict):
        _fail("$", "certificate must be a JSON object")
    for key in ("target", "constant", "families"):
        if key not in data:
            _fail("$", f"missing field {key!r}")
    name = str(data.get("name", "certificate"))
    m = data.get("m", 5)
    if not isinstance(m, int) or isinstance(m, bool) or not 1 <= m <= 6:
        _fail("$.m", f"m must be an integer in 1..6, got {m!r}")
    sense = data.get("sense", "min>=")
    if sense != "min>=":
        _fail("$.sense", f"only 'min>=' is supported, got {sense!r}")
    if not isinstance(data["target"], list) or not data["target"]:
        _fail("$.target", "expected a non-empty list of terms")
    terms = []
    for i, term in enumerate(data["target"]):
        where = f"$.target[{i}]"
        if not isinstance(term, dict) or "coeff" not in term or "tournament" not in term:
            _fail(where, "expected {'coeff': ..., 'tournament': ...}")
        try:
            tour = parse_tournament(str(term["tournament"]))
        except (ValueError, KeyError) as exc:
            _fail(f"{where}.tournament", str(exc))
        if tour.n > m:
            _fail(f"{where}.tournament", f"target tournament has more than m={m} vertices")
        terms.append((_rat(term["coeff"], f"{where}.coeff"), tour))
    constant = _rat(data["constant"], "$.constant")
    if not isinstance(data["families"], list):
        _fail("$.families", "expected a list")
    fams = tuple(_parse_family(f, f"$.families[{q}]", m) for q, f in enumerate(data["families"]))
    return Certificate(name, LinComb(terms), constant, fams, m, sense)


def _parse_family(d, where, m) -> CertFamily:
    if not isinstance(d, dict):
        _fail(where, "expected an object")
    for key in ("root", "k", "flags", "matrix"):
        if key not in d:
            _fail(where, f"missing field {key!r}")
    try:
        root = parse_tournament(str(d["root"]))
    except (ValueError, KeyError) as exc:
        _fail(f"{where}.root", str(exc))
    k = d["k"]
    if not isinstance(k, int) or isinstance(k, bool) or not root.n < k:
        _fail(f"{where}.k", f"k must be an integer larger than the root size, got {k!r}")
    if 2 * k - root.n > m:
        _fail(f"{where}.k", f"2k - r = {2 * k - root.n} exceeds m = {m}")
    flags = []
    if not isinstance(d["flags"], list) or not d["flags"]:
        _fail(f"{where}.flags", "expected a non-empty list of flag encodings")
    for i, text in enumerate(d["flags"]):
        try:
            f = parse_flag(str(text))
        except (ValueError, KeyError) as exc:
            _fail(f"{where}.flags[{i}]", str(exc))
        if f.r != root.n or f.k != k or f.root != root:
            _fail(f"{where}.flags[{i}]", f"{text} is not a size-{k} flag over root {root.encode()}")
        flags.append(f)
    t = len(flags)
    scale = _rat(d.get("scale", "1"), f"{where}.scale")
    rows = d["matrix"]
    if not isinstance(rows, list) or len(rows) != t:
        _fail(f"{where}.matrix", f"expected {t} rows to match {t} flags")
    raw = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != t:
            _fail(f"{where}.matrix[{i}]", f"expected {t} entries")
        raw.append(tuple(_rat(x, f"{where}.matrix[{i}][{j}]") for j, x in enumerate(row)))
    kernel = None
    if d.get("kernel") is not None:
        if not isinstance(d["kernel"], list):
            _fail(f"{where}.kernel", "expected a list of vectors")
        kernel = []
        for i, v in enumerate(d["kernel"]):
            if not isinstance(v, list) or len(v) != t:
                _fail(f"{where}.kernel[{i}]", f"expected a vector of length {t}")
            kernel.append(tuple(_rat(x, f"{where}.kernel[{i}][{j}]") for j, x in enumerate(v)))
        kernel = tuple(kernel)
    family = FlagFamily(root, k, tuple(flags))
    scaled = tuple(tuple(scale * x for x in row) for row in raw)
    return CertFamily(family, scaled, kernel, scale, tuple(raw))


# ---------------------------------------------------------------- evaluation


def bound_values(cert: Certificate) -> dict:
    """``{J: c(J)}`` over the ``m``-vertex classes."""
    classes = enumerate_tournaments(cert.m)
    values = {j: t_inj(cert.target, j) for j in classes}
    for q, cf in enumerate(cert.families):
        fam = cf.family
        if len(cf.rows) != len(fam):
            raise ValueError(f"family {q + 1}: matrix order {len(cf.rows)} != family size {len(fam)}")
        for i, fi in enumerate(fam):
            for k, fk in enumerate(fam):
                a = cf.rows[i][k]
                if not a:
                    continue
                b = product_coefficients(fi, fk, cert.m)
                for j in classes:
                    if b[j]:
                        values[j] -= b[j] * a
    return values


@dataclass
class FamilyCheck:
    label: str
    symmetric: bool
    psd: Optional[PSDResult]
    kernel_claimed: bool
    kernel_ok: Optional[bool]
    kernel_dim: Optional[int] = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.symmetric and bool(self.psd) and self.kernel_ok is not False


@dataclass
class VerificationReport:
    name: str
    families: list
    values: dict
    constant: Fraction
    require_tight: bool
    names: dict = field(default_factory=dict)
    statement: str = ""

    @property
    def minimum(self) -> Fraction:
        return min(self.values.values())

    @property
    def constant_ok(self) -> bool:
        if self.require_tight:
            return all(v == self.constant for v in self.values.values())
        return self.minimum >= self.constant

    @property
    def passed(self) -> bool:
        return self.constant_ok and all(f.passed for f in self.families)

    def first_failure(self) -> str:
        for f in self.families:
            if not f.passed:
                return f"{f.label}: {f.detail}"
        for j, v in self.values.items():
            bad = v != self.constant if self.require_tight else v < self.constant
            if bad:
                return (
                    f"c({self._label(j)}) = {format_rational(v)}, "
                    f"{'required' if self.require_tight else 'at least'} {format_rational(self.constant)}"
                )
        return ""

    def _label(self, j):
        return self.names.get(j, j.encode())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "passed": self.passed,
            "constant": format_rational(self.constant),
            "minimum": format_rational(self.minimum),
            "require_tight": self.require_tight,
            "values": {self._label(j): format_rational(v) for j, v in self.values.items()},
            "families": [
                {
                    "label": f.label,
                    "symmetric": f.symmetric,
                    "psd": bool(f.psd),
                    "kernel_claimed": f.kernel_claimed,
                    "kernel_ok": f.kernel_ok,
                    "kernel_dim": f.kernel_dim,
                    "detail": f.detail,
                }
                for f in self.families
            ],
            "failure": self.first_failure(),
        }


def _family_name(fam: FlagFamily) -> str:
    from .flags import pictured_family

    for name in ("F1", "F2", "F3"):
        if pictured_family(name).members == fam.members:
            return name
    return f"F_{fam.k}({fam.root.encode()})"


def _check_family(q: int, cf: CertFamily) -> FamilyCheck:
    label = f"matrix {q + 1} on {_family_name(cf.family)}"
    defect = cf.symmetry_defect()
    if defect is not None:
        i, j = defect
        detail = (
            f"not symmetric at ({i + 1},{j + 1}): {format_rational(cf.rows[i][j])} "
            f"!= {format_rational(cf.rows[j][i])}"
        )
        return FamilyCheck(label, False, None, cf.kernel is not None, None, None, detail)
    mat = cf.matrix()
    res = psd_check(mat)
    detail = ""
    if not res:
        detail = "not PSD, witness v = (" + ", ".join(format_rational(x) for x in res.witness) + ")"
    from .exact import kernel_basis

    dim = len(kernel_basis(mat))
    kernel_ok = None
    if cf.kernel is not None:
        kernel_ok = same_span(mat, cf.kernel)
        if not kernel_ok and not detail:
            detail = f"claimed kernel vectors do not span the {dim}-dimensional kernel"
    return FamilyCheck(label, True, res, cf.kernel is not None, kernel_ok, dim, detail)


def statement(cert: Certificate, names: Optional[dict] = None) -> str:
    """Human-facing form; negated targets are shown as upper bounds."""
    coeffs = [c for c, _ in cert.target.terms]
    if all(c < 0 for c in coeffs):
        return f"{format_lincomb(-cert.target, names)} <= {format_rational(-cert.constant)}"
    return f"{format_lincomb(cert.target, names)} >= {format_rational(cert.constant)}"


def verify(cert: Certificate, require_tight: bool = False) -> VerificationReport:
    """Check PSD-ness, the per-class bound and any claimed kernels.

    ``require_tight`` demands ``c(J) == constant`` on every class instead of
    ``min_J c(J) >= constant``.
    """
    from .catalog import resolve_catalog

    names = resolve_catalog().display_names() if cert.m <= 5 else {}
    fams = [_check_family(q, cf) for q, cf in enumerate(cert.families)]
    values = bound_values(cert)
    return VerificationReport(cert.name, fams, values, cert.constant, require_tight, names, statement(cert, names))


# ---------------------------------------------------------------- built-ins


@lru_cache(maxsize=None)
def builtin_certificate(name: str) -> Certificate:
    key = name.lower()
    if key not in BUILTIN:
        raise KeyError(f"unknown theorem {name!r}; expected one of {', '.join(BUILTIN)}")
    text = resources.files("qrt").joinpath("data", "certificates", f"{key}.json").read_text()
    return Certificate.from_json(text)


def builtin_certificates() -> dict:
    return {k: builtin_certificate(k) for k in BUILTIN}


def uniqueness_coefficients() -> dict:
    """``t_inj(TT3, J)`` over the 4-vertex classes."""
    return {j: t_inj(Tournament.transitive(3), j) for j in enumerate_tournaments(4)}


def uniqueness_identity_check(count: int = 100, seed: int = 2024) -> bool:
    """``t(TT3,W) - 1/8 == t(TT4,W) - t(C4,W)`` on random step tournamentons.

    Also checks the coefficient data behind the identity.
    """
    from .tournamenton import constant_half, from_tournament, random_step, t_step
    from .tournaments import c3_plus_sink, c3_plus_source, cyclic4

    expected = {
        Tournament.transitive(4): Fraction(4, 24),
        cyclic4(): Fraction(2, 24),
        c3_plus_sink(): Fraction(3, 24),
        c3_plus_source(): Fraction(3, 24),
    }
    if uniqueness_coefficients() != expected:
        return False
    rng = random.Random(seed)
    samples = [constant_half(), from_tournament(Tournament.cyclic3())]
    samples += [random_step(rng) for _ in range(count)]
    tt3, tt4, c4 = Tournament.transitive(3), Tournament.transitive(4), cyclic4()
    for w in samples:
        if t_step(tt3, w) - Fraction(1, 8) != t_step(tt4, w) - t_step(c4, w):
            return False
    return True
