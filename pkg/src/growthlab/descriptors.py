"""Text descriptors for function specs, as used on the command line.

Grammar (whitespace ignored)::

    exp                      e^z
    exppoly:c_n,...,c_0      exp of a polynomial (highest degree first)
    const:c                  constant
    poly:c_n,...,c_0         polynomial (highest degree first)
    roots:a,b,...            monic polynomial with the given roots
    sin:S | sinc:S           sin(S z), sin(S z)/(S z); S is a number or 'pi'
    ml:RHO[,MU]              Mittag-Leffler E_RHO(z; MU)
    rgamma[:SHIFT]           1/Gamma(z + SHIFT), SHIFT defaults to 1
    zeros:PATH,q=Q | p=P     canonical product over a CSV/JSON zero list
    family:KIND,R=CUT,p=P    canonical product over a truncated lattice family
    catalog:NAME             entry of funcat.catalog()
    prod:A*B*...             product of factors
    quot:A|B                 meromorphic quotient A/B

Numbers accept Python complex syntax (``1+2j``) and ``pi`` / ``-pi``.
"""
from __future__ import annotations

import math

from . import funcat, points, products
from .errors import ParseError
from .funcat import FunctionSpec


def parse_number(text: str) -> complex:
    t = text.strip().lower().replace(" ", "")
    if not t:
        raise ParseError("empty number")
    sign = 1.0
    if t.startswith("-"):
        sign, t = -1.0, t[1:]
    elif t.startswith("+"):
        t = t[1:]
    if t == "pi":
        return complex(sign * math.pi)
    if t.endswith("*pi"):
        return sign * parse_number(t[:-3]) * math.pi
    try:
        return sign * complex(t)
    except ValueError as exc:
        raise ParseError(f"not a number: {text!r}") from exc


def _real(text: str, what: str) -> float:
    v = parse_number(text)
    if v.imag != 0:
        raise ParseError(f"{what} must be real, got {text!r}")
    return v.real


def _numbers(body: str) -> list[complex]:
    if not body.strip():
        raise ParseError("expected a comma-separated list of numbers")
    return [parse_number(x) for x in body.split(",")]


def _keyword_args(parts: list[str]) -> dict[str, str]:
    out = {}
    for part in parts:
        if "=" not in part:
            raise ParseError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _genus(kw: dict[str, str]) -> tuple[int | None, float | None]:
    if "q" in kw and "p" in kw:
        raise ParseError("give either q= or p=, not both")
    if "q" in kw:
        q = int(kw["q"])
        if q < 0:
            raise ParseError("genus q must be nonnegative")
        return q, None
    if "p" in kw:
        return None, _real(kw["p"], "p")
    raise ParseError("canonical products need q=GENUS or p=ORDER")


def parse(descriptor: str) -> FunctionSpec:
    """Parse a descriptor into a FunctionSpec; raises ParseError."""
    d = descriptor.strip()
    if not d:
        raise ParseError("empty descriptor")
    head, _, body = d.partition(":")
    head = head.strip().lower()
    try:
        return _parse(head, body, d)
    except ParseError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"cannot parse {descriptor!r}: {exc}") from exc


def _parse(head: str, body: str, whole: str) -> FunctionSpec:
    if head == "quot":
        num, sep, den = body.partition("|")
        if not sep:
            raise ParseError("quot needs 'A|B'")
        return funcat.Quotient(parse(num), parse(den))
    if head == "prod":
        factors = [parse(f) for f in body.split("*")]
        return funcat.Product(tuple(factors))
    if head == "exp":
        if body.strip():
            raise ParseError("'exp' takes no argument; use exppoly:")
        return funcat.EXP
    if head == "exppoly":
        return funcat.ExpPoly(tuple(_numbers(body)))
    if head == "const":
        return funcat.constant(parse_number(body))
    if head == "poly":
        return funcat.Polynomial(tuple(_numbers(body)))
    if head == "roots":
        return funcat.polynomial_from_roots(_numbers(body))
    if head in ("sin", "sinc"):
        s = parse_number(body) if body.strip() else complex(math.pi)
        s = s.real if s.imag == 0 else s
        return funcat.Sine(s) if head == "sin" else funcat.Sinc(s)
    if head == "ml":
        vals = [_real(x, "ml parameter") for x in body.split(",")]
        if len(vals) not in (1, 2):
            raise ParseError("ml takes RHO or RHO,MU")
        return funcat.MittagLeffler(*vals)
    if head == "rgamma":
        shift = parse_number(body) if body.strip() else 1.0
        return funcat.ReciprocalGamma(shift.real if isinstance(shift, complex) and shift.imag == 0 else shift)
    if head == "zeros":
        path, *rest = body.split(",")
        q, p = _genus(_keyword_args(rest))
        Z = points.load(path.strip())
        if p is not None:
            return products.build_f_Z(Z, p)
        return products.CanonicalProductSpec(Z, q)
    if head == "family":
        kind, *rest = body.split(",")
        kw = _keyword_args(rest)
        if "R" not in kw or "p" not in kw:
            raise ParseError("family needs R=CUTOFF and p=ORDER")
        return products.build_from_family(kind.strip(), _real(kw["R"], "R"), _real(kw["p"], "p"))
    if head == "catalog":
        cat = funcat.catalog()
        name = body.strip()
        if name not in cat:
            raise ParseError(f"unknown catalog entry {name!r}; known: {', '.join(cat)}")
        return cat[name]
    raise ParseError(f"unknown descriptor head {head!r} in {whole!r}")
