"""Loading and validating the group catalog (one YAML document per group)."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import yaml

from .groups import GroupCtx, a_from_signature, eval_word, format_word, parse_word
from .matrices import GMat, iota, scaled_matrix
from .quadratic import FLOAT_CTX, QuadVal, format_rational, parse_rational, qsign

__all__ = [
    "CatalogError",
    "DEFAULT_CATALOG_DIR",
    "load_group",
    "load_catalog",
    "get_group",
    "group_from_document",
    "group_to_document",
    "hecke_group",
    "validate_group",
]

DEFAULT_CATALOG_DIR = Path(__file__).with_name("catalog")

_KIND_ORDER = {"SL2Z": 0, "Gamma0": 1, "Gamma0Plus": 2, "HeckeTriangle": 3, "Custom": 4}
# lambda_q^2 for the Hecke groups whose lambda_q lies in a quadratic field
_QUADRATIC_HECKE = {3: 1, 4: 2, 6: 3}


class CatalogError(ValueError):
    """A catalog document is malformed or fails validation."""


def _rational_map(raw) -> dict[str, Fraction]:
    return {str(k): parse_rational(v) for k, v in (raw or {}).items()}


def _word_map(raw) -> dict:
    return {str(k): parse_word(str(v)) for k, v in (raw or {}).items()}


def _matrix(entry: dict, D: int) -> GMat:
    quad = entry.get("matrix")
    if not isinstance(quad, (list, tuple)) or len(quad) != 4:
        raise CatalogError(f"generator matrix must be a quadruple, got {quad!r}")
    a, b, c, d = (parse_rational(v) for v in quad)
    e = int(entry.get("scale", 1))
    try:
        return scaled_matrix(a, b, c, d, e, D)
    except ValueError as exc:
        raise CatalogError(str(exc)) from None


def hecke_group(q: int, name: str | None = None, description: str = "") -> GroupCtx:
    """The conjugated Hecke triangle group <(0 -1/l; l 0), (1 1; 0 1)>, l = 2cos(pi/q).

    For q in {3, 4, 6} the entries are exact in Q(sqrt(l^2)); otherwise they
    are 50-digit mpf values and ``exact`` is False.
    """
    if q < 3:
        raise CatalogError("Hecke triangle groups need q >= 3")
    if q in _QUADRATIC_HECKE:
        e = _QUADRATIC_HECKE[q]
        D = e
        pinf = scaled_matrix(1, 1, 0, 1, 1, D)
        w = scaled_matrix(0, -1, e, 0, e) if e > 1 else GMat(0, -1, 1, 0)
        exact = True
    else:
        D = 1
        lam = 2 * FLOAT_CTX.cos(FLOAT_CTX.pi / q)
        one, zero = FLOAT_CTX.mpf(1), FLOAT_CTX.mpf(0)
        pinf = GMat(one, one, zero, one)
        w = GMat(zero, -1 / lam, lam, zero)
        exact = False
    A = Fraction(q - 2, 4 * q)
    return GroupCtx(
        name=name or f"hecke_{q}",
        kind="HeckeTriangle",
        param=q,
        D=D,
        A=A,
        signature=(0, 1, (2, q)),
        generators={"Pinf": pinf, "w": w},
        relations=[parse_word("w^2"), tuple([("w", 1), ("Pinf", 1)] * q)],
        seed_S={"Pinf": A, "w": Fraction(-1, 4)},
        seed_theta=None,
        iota_images={"Pinf": parse_word("Pinf^-1"), "w": parse_word("w^-1")},
        elliptic_orders={"w": 4},
        parabolic={"Pinf": {"cusp_equiv_infty": True, "h": 1}},
        minus_identity=parse_word("w^2"),
        exact=exact,
        description=description,
    )


def group_from_document(doc: dict) -> GroupCtx:
    try:
        kind = doc["kind"]
        name = str(doc["name"])
    except KeyError as exc:
        raise CatalogError(f"catalog document lacks {exc.args[0]!r}") from None
    if kind not in _KIND_ORDER:
        raise CatalogError(f"unknown group kind {kind!r}")
    if kind == "HeckeTriangle" and "generators" not in doc:
        ctx = hecke_group(int(doc["param"]), name, doc.get("description", ""))
        validate_group(ctx)
        return ctx

    D = int(doc.get("D", 1))
    sig = doc.get("signature") or {}
    signature = (
        int(sig.get("genus", 0)),
        int(sig.get("cusps", 1)),
        tuple(int(m) for m in sig.get("elliptic_orders", [])),
    )
    gens_raw = doc.get("generators") or {}
    if not gens_raw:
        raise CatalogError(f"group {name} has no generators")
    generators = {str(g): _matrix(entry, D) for g, entry in gens_raw.items()}
    scales = {str(g): int(entry.get("scale", 1)) for g, entry in gens_raw.items()}
    seeds = doc.get("seeds") or {}
    modsym = doc.get("modsym") or {}
    comm = modsym.get("commutator_theta")
    minus = doc.get("minus_identity")
    ctx = GroupCtx(
        name=name,
        kind=kind,
        param=int(doc.get("param", 0)),
        D=D,
        A=parse_rational(doc["A"]) if "A" in doc else a_from_signature(*signature),
        signature=signature,
        generators=generators,
        relations=[parse_word(str(r)) for r in doc.get("relations", [])],
        seed_S=_rational_map(seeds.get("S")),
        seed_theta=_rational_map(seeds["theta"]) if "theta" in seeds else None,
        iota_images=_word_map(doc.get("iota")),
        modsym_basis={
            str(g): tuple(int(x) for x in v) for g, v in (modsym.get("basis") or {}).items()
        },
        commutator_theta=None if comm is None else parse_rational(comm),
        elliptic_orders={str(k): int(v) for k, v in (doc.get("elliptic") or {}).items()},
        parabolic={str(k): dict(v) for k, v in (doc.get("parabolic") or {}).items()},
        scales=scales,
        minus_identity=None if minus is None else parse_word(str(minus)),
        cusp_form=doc.get("cusp_form"),
        exact=True,
        description=str(doc.get("description", "")),
    )
    validate_group(ctx)
    return ctx


def _is_pm_identity(m: GMat, exact: bool) -> int:
    """Return 1 for I, -1 for -I, 0 otherwise."""
    if exact:
        if m.b == 0 and m.c == 0 and m.a == m.d and m.a in (1, -1):
            return 1 if m.a == 1 else -1
        return 0
    if qsign(m.b) or qsign(m.c) or qsign(m.a - m.d):
        return 0
    if qsign(m.a - 1) == 0:
        return 1
    return -1 if qsign(m.a + 1) == 0 else 0


def _close(m1: GMat, m2: GMat, exact: bool) -> bool:
    if exact:
        return m1 == m2
    return all(qsign(x - y) == 0 for x, y in zip(m1.entries, m2.entries))


def validate_group(ctx: GroupCtx) -> None:
    """Check Gauss-Bonnet, relations, seed/iota/parabolic names and iota images."""
    gb = a_from_signature(*ctx.signature)
    if gb != ctx.A:
        raise CatalogError(f"{ctx.name}: A = {ctx.A} but Gauss-Bonnet gives {gb}")
    names = set(ctx.generators)
    for label, mapping in (
        ("S seed", ctx.seed_S),
        ("theta seed", ctx.seed_theta or {}),
        ("iota image", ctx.iota_images),
        ("parabolic", ctx.parabolic),
        ("elliptic", ctx.elliptic_orders),
        ("modsym basis", ctx.modsym_basis),
    ):
        extra = set(mapping) - names
        if extra:
            raise CatalogError(f"{ctx.name}: {label} for unknown generators {sorted(extra)}")
    try:
        for rel in ctx.relations:
            if not _is_pm_identity(eval_word(ctx, rel), ctx.exact):
                raise CatalogError(f"{ctx.name}: relation {format_word(rel)} is not +-I")
        if ctx.minus_identity is not None:
            if _is_pm_identity(eval_word(ctx, ctx.minus_identity), ctx.exact) != -1:
                raise CatalogError(f"{ctx.name}: minus_identity word is not -I")
        for g, img in ctx.iota_images.items():
            if not _close(eval_word(ctx, img), iota(ctx.generators[g]), ctx.exact):
                raise CatalogError(f"{ctx.name}: iota image of {g} does not match")
    except KeyError as exc:
        raise CatalogError(str(exc)) from None
    for g, order in ctx.elliptic_orders.items():
        m = eval_word(ctx, ((g, order),))
        if _is_pm_identity(m, ctx.exact) != 1:
            raise CatalogError(f"{ctx.name}: {g}^{order} is not I")


def _entry_to_int(x, e: int):
    if isinstance(x, QuadVal):
        v = x.y * e if e > 1 else x.x
    else:
        v = Fraction(x) * (e if e > 1 else 1)
    v = Fraction(v)
    return int(v) if v.denominator == 1 else format_rational(v)


def group_to_document(ctx: GroupCtx) -> dict:
    """Serialize a group; the inverse of :func:`group_from_document`."""
    if ctx.kind == "HeckeTriangle":
        return {"name": ctx.name, "kind": ctx.kind, "param": ctx.param, "description": ctx.description}
    if not ctx.exact:
        raise CatalogError("only exact groups serialize generator matrices")
    gens = {}
    for g, m in ctx.generators.items():
        e = ctx.scales.get(g, 1)
        entry = {"matrix": [_entry_to_int(x, e) for x in m.entries]}
        if e > 1:
            entry["scale"] = e
        gens[g] = entry
    doc = {
        "name": ctx.name,
        "kind": ctx.kind,
        "param": ctx.param,
        "D": ctx.D,
        "description": ctx.description,
        "signature": {
            "genus": ctx.signature[0],
            "cusps": ctx.signature[1],
            "elliptic_orders": list(ctx.signature[2]),
        },
        "A": format_rational(ctx.A),
        "generators": gens,
        "relations": [format_word(r) for r in ctx.relations],
        "seeds": {"S": {g: format_rational(v) for g, v in ctx.seed_S.items()}},
        "iota": {g: format_word(w) for g, w in ctx.iota_images.items()},
        "parabolic": ctx.parabolic,
    }
    if ctx.seed_theta is not None:
        doc["seeds"]["theta"] = {g: format_rational(v) for g, v in ctx.seed_theta.items()}
    if ctx.minus_identity is not None:
        doc["minus_identity"] = format_word(ctx.minus_identity)
    if ctx.elliptic_orders:
        doc["elliptic"] = dict(ctx.elliptic_orders)
    if ctx.modsym_basis:
        doc["modsym"] = {
            "basis": {g: list(v) for g, v in ctx.modsym_basis.items()},
            "commutator_theta": (
                None if ctx.commutator_theta is None else format_rational(ctx.commutator_theta)
            ),
        }
    if ctx.cusp_form is not None:
        doc["cusp_form"] = ctx.cusp_form
    return doc


def load_group(path) -> GroupCtx:
    with open(path, encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict):
        raise CatalogError(f"{path}: expected a mapping")
    return group_from_document(doc)


def _sort_key(ctx: GroupCtx):
    return (_KIND_ORDER[ctx.kind], ctx.param, ctx.name)


def load_catalog(directory=None) -> dict[str, GroupCtx]:
    """Load every ``*.yaml`` group in ``directory`` (default: the bundled catalog)."""
    directory = Path(directory) if directory is not None else DEFAULT_CATALOG_DIR
    if not directory.is_dir():
        raise CatalogError(f"catalog directory {directory} does not exist")
    groups = [load_group(p) for p in sorted(directory.glob("*.yaml"))]
    out: dict[str, GroupCtx] = {}
    for ctx in sorted(groups, key=_sort_key):
        if ctx.name in out:
            raise CatalogError(f"duplicate group name {ctx.name}")
        out[ctx.name] = ctx
    return out


@lru_cache(maxsize=None)
def _cached_catalog(directory: str | None) -> dict[str, GroupCtx]:
    return load_catalog(directory)


def get_group(name: str, catalog_dir=None) -> GroupCtx:
    groups = _cached_catalog(None if catalog_dir is None else str(catalog_dir))
    try:
        return groups[name]
    except KeyError:
        raise KeyError(f"unknown group {name!r}; known: {', '.join(groups)}") from None
