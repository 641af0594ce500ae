"""Randomized law sweeps with deterministic, worker-count independent reports.

Sample ``i`` of a sweep draws from ``random.Random(f"{seed}:{law}:{i}")`` so
each sample is reproducible on its own; results are merged in sample order.
"""
from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .catalog import get_group
from .congruence import (
    CongruenceModel,
    complete_bottom_row,
    mobius_identity_defect,
    periodicity0_defect,
    random_gamma0_element,
    vassileva_S,
)
from .eta import EtaPairing, modsym
from .groups import GroupCtx, Word, eval_word, format_word, lcm, word_concat, word_inverse
from .laws import (
    PRINTED_LAWS,
    dieter_defect,
    fricke_defects,
    hid2q_defect,
    homogenization_check,
    involution_checks,
    printed_law_defect,
    three_term_defect,
    two_term_defect,
)
from .matrices import GMat, mat_inv, mat_mul
from .quadratic import qsign
from .symbols import (
    Element,
    MissingSeed,
    PairingUnavailable,
    SymbolValue,
    WordModel,
    elliptic_S,
    s_word,
    s_word_tree,
)

__all__ = [
    "Outcome",
    "RunReport",
    "SweepSpec",
    "WORD_LAWS",
    "GAMMA0_LAWS",
    "laws_for_group",
    "run_sweep",
    "run_gamma0_sweep",
    "random_word",
    "word_model",
]

PAIRING_TOL = 1e-8
FLOAT_TOL = 1e-10
# numerical laws regardless of the pairing in use
LAW_TOL = {"modsym": 1e-9, "pairing": PAIRING_TOL}


@dataclass(frozen=True)
class Outcome:
    law: str
    inputs: str
    defect: str
    tag: str
    magnitude: float
    ok: bool


@dataclass
class RunReport:
    law: str
    samples: int
    failures: list[tuple[str, str]] = field(default_factory=list)
    max_defect: float = 0.0
    elapsed: float = 0.0
    checks: int = 0
    outcomes: list[Outcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self, include_outcomes: bool = False) -> dict:
        out = {
            "law": self.law,
            "samples": self.samples,
            "checks": self.checks,
            "failures": [list(f) for f in self.failures],
            "max_defect": self.max_defect,
            "elapsed": self.elapsed,
        }
        if include_outcomes:
            out["outcomes"] = [asdict(o) for o in self.outcomes]
        return out


@dataclass(frozen=True)
class SweepSpec:
    group: str
    law: str
    samples: int = 100
    seed: int = 0
    tolerance: float | None = None
    max_len: int = 8
    pairing: str = "exact"
    catalog_dir: str | None = None


def _judge(law: str, inputs: str, value: SymbolValue, tol: float) -> Outcome:
    mag = value.magnitude()
    return Outcome(law, inputs, str(value), value.tag, mag, value.is_zero(tol))


# -- models and random words -------------------------------------------------


@lru_cache(maxsize=None)
def word_model(group: str, pairing: str = "exact", catalog_dir: str | None = None) -> WordModel:
    ctx = get_group(group, catalog_dir)
    if pairing == "eta":
        return WordModel(ctx, EtaPairing(ctx))
    if pairing != "exact":
        raise ValueError(f"unknown pairing {pairing!r}; use 'exact' or 'eta'")
    return WordModel(ctx)


def random_word(rng: random.Random, names, max_len: int, max_exp: int = 2) -> Word:
    length = rng.randint(1, max_len)
    exps = [e for e in range(-max_exp, max_exp + 1) if e]
    return tuple((rng.choice(names), rng.choice(exps)) for _ in range(length))


def _s_names(ctx: GroupCtx) -> list[str]:
    return [n for n in ctx.generators if n in ctx.seed_S]


def _theta_names(ctx: GroupCtx) -> list[str]:
    return [n for n in ctx.generators if n in (ctx.seed_theta or {})]


def _draw_element(model: WordModel, rng, names, max_len, accept, tries: int = 200):
    for _ in range(tries):
        el = model.element(random_word(rng, names, max_len))
        if accept(el):
            return el
    raise RuntimeError("could not draw an element satisfying the law's conditions")


def _c_nonzero(el: Element) -> bool:
    return qsign(el.matrix.c) != 0


def _tol(spec: SweepSpec, model: WordModel) -> float:
    if spec.tolerance is not None:
        return spec.tolerance
    if spec.law in LAW_TOL:
        return LAW_TOL[spec.law]
    if spec.pairing == "eta":
        return PAIRING_TOL
    return 0.0 if model.ctx.exact else FLOAT_TOL


# -- word-group laws ------------------------------------------------------------


def _law_cocycle(model, spec, rng):
    ctx = model.ctx
    w = random_word(rng, _s_names(ctx), spec.max_len)
    s = s_word(ctx, w)
    out = [("cocycle", format_word(w), SymbolValue(s_word_tree(ctx, w, rng)) - s)]
    if ctx.kind in ("Gamma0", "SL2Z") and ctx.exact:
        N = ctx.param if ctx.kind == "Gamma0" else 1
        out.append(("vassileva", format_word(w), SymbolValue(vassileva_S(eval_word(ctx, w), N)) - s))
    return out


def _law_three_term(model, spec, rng):
    names = _s_names(model.ctx)
    out = []
    g = _draw_element(model, rng, names, spec.max_len, _c_nonzero)
    t = _draw_element(model, rng, names, spec.max_len, lambda e: _c_nonzero(e) and _c_nonzero(g @ e))
    inputs = f"{g.label()} | {t.label()}"
    h, hs = three_term_defect(model, g, t)
    out.append(("three-term", inputs, h))
    if hs is not None:
        out.append(("three-term*", inputs, hs))
    t2 = _draw_element(
        model, rng, names, spec.max_len,
        lambda e: _c_nonzero(e) and _c_nonzero(g @ e),
    )
    h, hs = dieter_defect(model, g, t2)
    inputs = f"{g.label()} | {t2.label()}"
    out.append(("dieter", inputs, h))
    if hs is not None:
        out.append(("dieter*", inputs, hs))
    return out


def _two_term_taus(ctx: GroupCtx, rng) -> tuple[str, Word]:
    choices = [n for n in ctx.elliptic_orders if n in ctx.seed_S]
    choices += [n for n, p in ctx.parabolic.items() if not p.get("cusp_equiv_infty", False) and n in ctx.seed_S]
    if not choices:
        raise ValueError(f"{ctx.name} has no elliptic or non-infinite parabolic generator")
    name = rng.choice(choices)
    k = 1 if name in ctx.elliptic_orders else rng.choice((-3, -2, -1, 1, 2, 3))
    return name, ((name, k),)


def _law_two_term(model, spec, rng):
    ctx = model.ctx
    names = _s_names(ctx)
    name, tw = _two_term_taus(ctx, rng)
    t = model.element(tw)
    g = _draw_element(model, rng, names, spec.max_len, lambda e: _c_nonzero(e) and _c_nonzero(e @ t))
    inputs = f"{g.label()} | {t.label()}"
    reduced = name in ctx.elliptic_orders or name in ctx.parabolic
    out = [(f"two-term:{k}", inputs, v) for k, v in two_term_defect(model, g, t, reduced).items() if v is not None]
    if "w" in ctx.generators and ctx.lam is not None:
        dft = fricke_defects(model, g, model.element((("w", 1),)), ctx.lam)
        out += [(f"two-term:{k}", g.label(), v) for k, v in dft.items() if v is not None]
    if ctx.kind == "Gamma0" and "P0" in ctx.generators:
        k = rng.choice((1, 2, 3))
        h = hid2q_defect(model, g, model.element((("P0", k),)), ctx.param, k)
        if h is not None:
            out.append(("two-term:hid2q", f"{g.label()} | P0^{k}", h))
    return out


def _law_printed(model, spec, rng):
    ctx = model.ctx
    laws = [law for law in PRINTED_LAWS.values() if law.group == ctx.name]
    if not laws:
        raise ValueError(f"no printed closed-form laws for {ctx.name}")
    law = rng.choice(laws)
    names = _theta_names(ctx) if law.star else _s_names(ctx)
    g = _draw_element(model, rng, names, spec.max_len, lambda e: law.condition(e.matrix.c, e.matrix.d))
    out = [(law.name, g.label(), printed_law_defect(model, law, g))]
    try:
        out.append((law.name + ":direct", g.label(), printed_law_defect(model, law, g, direct=True)))
    except ValueError:
        pass
    return out


def _law_involution(model, spec, rng):
    ctx = model.ctx
    g = model.element(random_word(rng, _s_names(ctx), spec.max_len))
    k, m = rng.randint(-5, 5), rng.randint(-5, 5)
    return [
        (f"involution:{key}", g.label(), v)
        for key, v in involution_checks(model, g, k, m).items()
    ]


def _law_elliptic(model, spec, rng):
    ctx = model.ctx
    ell = [n for n in ctx.elliptic_orders if n in ctx.seed_S]
    if not ell:
        raise ValueError(f"{ctx.name} has no elliptic generators")
    name = rng.choice(ell)
    u = random_word(rng, _s_names(ctx), max(1, spec.max_len // 2))
    w = word_concat(u, ((name, 1),), word_inverse(u))
    gamma = eval_word(ctx, w)
    closed = elliptic_S(gamma, ctx.elliptic_orders[name])
    return [("elliptic", format_word(w), SymbolValue(closed) - SymbolValue(s_word(ctx, w)))]


def _hyperbolic_theta_generators(ctx: GroupCtx) -> list[str]:
    return [n for n in _theta_names(ctx) if ctx.generator_kind(n) == "hyperbolic"]


def _law_homogenization(model, spec, rng):
    ctx = model.ctx
    taus = _hyperbolic_theta_generators(ctx)
    if not taus:
        raise ValueError(f"{ctx.name} has no hyperbolic generator with a theta seed")
    tau = model.element(((rng.choice(taus), 1),))
    n = rng.randint(1, 50)
    row = homogenization_check(model, tau, n)[-1]
    excess = row.ratio_error.magnitude() - row.bound.magnitude()
    inputs = f"{tau.label()}^{n}"
    out = [("homogenization", inputs, row.defect)]
    bound_defect = SymbolValue(Fraction(0)) if excess <= 0 else SymbolValue.approx(excess, 0.0)
    out.append(("homogenization:bound", inputs, bound_defect))
    return out


def theta_level(ctx: GroupCtx) -> int:
    """L with 2L theta(gamma) integral: the lcm of the theta denominators."""
    dens = [v.denominator for v in (ctx.seed_theta or {}).values()]
    if ctx.commutator_theta is not None:
        dens.append(ctx.commutator_theta.denominator)
    return lcm(dens)


def _law_theta_integrality(model, spec, rng):
    ctx = model.ctx
    w = random_word(rng, _theta_names(ctx), spec.max_len)
    val = 2 * theta_level(ctx) * model.theta(model.element(w))
    nearest = round(float(val)) if not val.exact else round(val.value)
    return [("theta-integrality", format_word(w), val - nearest)]


def _law_modsym(model, spec, rng):
    ctx = model.ctx
    names = [n for n in ctx.generators if n != "negI"]
    u = random_word(rng, names, min(spec.max_len, 3), max_exp=1)
    v = random_word(rng, names, min(spec.max_len, 3), max_exp=1)
    mu, mv = eval_word(ctx, u), eval_word(ctx, v)
    su, sv, suv = modsym(mu), modsym(mv), modsym(mat_mul(mu, mv))
    add = suv - su - sv
    inputs = f"{format_word(u)} | {format_word(v)}"
    out = [("modsym:additivity", inputs, SymbolValue.approx(abs(add.value), add.error))]
    par = [n for n in ctx.parabolic]
    if par:
        p = rng.choice(par)
        k = rng.choice((-2, -1, 1, 2))
        conj = word_concat(u, ((p, k),), word_inverse(u))
        s = modsym(eval_word(ctx, conj))
        out.append(("modsym:parabolic", format_word(conj), SymbolValue.approx(abs(s.value), s.error)))
    return out


def _law_pairing(model, spec, rng):
    """theta of a commutator from the exact seeds against (V_f/pi) Im(<g> conj <t>)."""
    ctx = model.ctx
    exact = word_model(ctx.name, "exact", spec.catalog_dir)
    eta = model.pairing_provider if isinstance(model.pairing_provider, EtaPairing) else EtaPairing(ctx)
    names = [n for n in ctx.generators if n != "negI"]
    u = random_word(rng, names, min(spec.max_len, 3), max_exp=1)
    v = random_word(rng, names, min(spec.max_len, 3), max_exp=1)
    comm = word_concat(u, v, word_inverse(u), word_inverse(v))
    th = exact.theta(exact.element(comm))
    su, sv = modsym(eval_word(ctx, u)), modsym(eval_word(ctx, v))
    predicted = eta.pair_symbols(su, sv) * 2
    return [("pairing", f"{format_word(u)} | {format_word(v)}", th - predicted)]


WORD_LAWS = {
    "cocycle": _law_cocycle,
    "three-term": _law_three_term,
    "two-term": _law_two_term,
    "printed": _law_printed,
    "involution": _law_involution,
    "elliptic": _law_elliptic,
    "homogenization": _law_homogenization,
    "theta-integrality": _law_theta_integrality,
    "modsym": _law_modsym,
    "pairing": _law_pairing,
}


def laws_for_group(ctx: GroupCtx) -> list[str]:
    out = ["cocycle", "three-term", "involution"]
    if any(n in ctx.seed_S for n in ctx.elliptic_orders) or any(
        not p.get("cusp_equiv_infty", False) for p in ctx.parabolic.values()
    ):
        out.append("two-term")
    if any(law.group == ctx.name for law in PRINTED_LAWS.values()):
        out.append("printed")
    if ctx.elliptic_orders:
        out.append("elliptic")
    if ctx.seed_theta is not None and _hyperbolic_theta_generators(ctx):
        out.append("homogenization")
    if ctx.seed_theta is not None and (not ctx.modsym_basis or ctx.commutator_theta is not None):
        out.append("theta-integrality")
    if ctx.cusp_form is not None:
        out += ["modsym", "pairing"]
    return out


def _run_word_chunk(spec: SweepSpec, indices: list[int]) -> list[list[Outcome]]:
    model = word_model(spec.group, spec.pairing, spec.catalog_dir)
    tol = _tol(spec, model)
    fn = WORD_LAWS[spec.law]
    results = []
    for i in indices:
        rng = random.Random(f"{spec.seed}:{spec.law}:{i}")
        results.append([_judge(law, inputs, v, tol) for law, inputs, v in fn(model, spec, rng)])
    return results


# -- closed-form Gamma_0(N) laws ---------------------------------------------------


@dataclass(frozen=True)
class Gamma0Spec:
    levels: tuple[int, ...]
    law: str
    samples: int = 100
    seed: int = 0
    max_c: int = 200


def _g0_three_term(N, spec, rng):
    model = CongruenceModel(N)
    out = []
    while True:
        g = Element(random_gamma0_element(N, rng, spec.max_c, 2))
        t = Element(random_gamma0_element(N, rng, spec.max_c, 2))
        if all(qsign(x.matrix.c) for x in (g, t, g @ t)):
            break
    inputs = f"N={N} | {g.label()} | {t.label()}"
    out.append(("three-term", inputs, three_term_defect(model, g, t, star=False)[0]))
    out.append(("dieter", inputs, dieter_defect(model, g, t, star=False)[0]))
    h = model.H(g)
    out.append(("closed-H", f"N={N} | {g.label()}", h - model.H_closed(g)))
    return out


def _g0_two_term(N, spec, rng):
    model = CongruenceModel(N)
    while True:
        g = Element(random_gamma0_element(N, rng, spec.max_c, 2))
        t = Element(random_gamma0_element(N, rng, spec.max_c, 1))
        if all(qsign(x.matrix.c) for x in (g, t, g @ t)):
            break
    out = [("recip2a", f"N={N} | {g.label()} | {t.label()}", two_term_defect(model, g, t)["recip2a"])]
    k = rng.randint(1, 5)
    p0k = Element(GMat(1, 0, k * N, 1))
    h = hid2q_defect(model, g, p0k, N, k)
    if h is not None:
        out.append(("hid2q", f"N={N} k={k} | {g.label()}", h))
    return out


def _g0_mobius(N, spec, rng):
    if N < 2:
        return []
    j = rng.randint(1, 50)
    c = N * j
    d = rng.choice([x for x in range(1, 21) if math.gcd(x, c) == 1] or [1])
    k = rng.randint(1, 5)
    return [("mobius", f"N={N} c={c} d={d} k={k}", SymbolValue(mobius_identity_defect(N, c, d, k)))]


def _g0_periodicity(N, spec, rng):
    if N < 2:
        return []
    while True:
        c = N * rng.randint(1, max(1, spec.max_c // N))
        d = rng.randint(1, spec.max_c)
        if math.gcd(c, d) == 1:
            break
    k = rng.randint(1, 5)
    return [("periodicity", f"N={N} c={c} d={d} k={k}", SymbolValue(periodicity0_defect(N, d, c, k)))]


GAMMA0_LAWS = {
    "three-term": _g0_three_term,
    "two-term": _g0_two_term,
    "mobius": _g0_mobius,
    "periodicity": _g0_periodicity,
}


def _run_gamma0_chunk(spec: Gamma0Spec, indices: list[int]) -> list[list[Outcome]]:
    fn = GAMMA0_LAWS[spec.law]
    results = []
    for i in indices:
        level = spec.levels[i % len(spec.levels)]
        rng = random.Random(f"{spec.seed}:{spec.law}:{level}:{i}")
        results.append([_judge(law, inputs, v, 0.0) for law, inputs, v in fn(level, spec, rng)])
    return results


# -- orchestration ---------------------------------------------------------------


def _chunks(n: int, jobs: int) -> list[list[int]]:
    size = max(1, math.ceil(n / max(1, jobs * 4)))
    return [list(range(i, min(n, i + size))) for i in range(0, n, size)]


def _execute(worker, spec, total: int, jobs: int, label: str) -> RunReport:
    start = time.perf_counter()
    chunks = _chunks(total, jobs)
    if jobs <= 1:
        parts = [worker(spec, c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(worker, [spec] * len(chunks), chunks))
    report = RunReport(label, total)
    for part in parts:
        for sample in part:
            for o in sample:
                report.outcomes.append(o)
                report.checks += 1
                report.max_defect = max(report.max_defect, o.magnitude)
                if not o.ok:
                    report.failures.append((f"{o.law}: {o.inputs}", o.defect))
    report.elapsed = time.perf_counter() - start
    return report


def run_sweep(spec: SweepSpec, jobs: int = 1) -> RunReport:
    if spec.law not in WORD_LAWS:
        raise ValueError(f"unknown law {spec.law!r}; choose from {sorted(WORD_LAWS)}")
    applicable = laws_for_group(get_group(spec.group, spec.catalog_dir))
    if spec.law not in applicable:
        raise ValueError(f"law {spec.law!r} does not apply to {spec.group}; choose from {applicable}")
    if spec.catalog_dir is not None:
        spec = SweepSpec(**{**asdict(spec), "catalog_dir": str(Path(spec.catalog_dir))})
    return _execute(_run_word_chunk, spec, spec.samples, jobs, f"{spec.group}:{spec.law}")


def run_gamma0_sweep(levels, law: str, samples: int, seed: int = 0, max_c: int = 200, jobs: int = 1) -> RunReport:
    """``samples`` draws per level, cycling through the levels."""
    if law not in GAMMA0_LAWS:
        raise ValueError(f"unknown law {law!r}; choose from {sorted(GAMMA0_LAWS)}")
    levels = tuple(levels)
    spec = Gamma0Spec(levels, law, samples, seed, max_c)
    label = f"gamma0[{','.join(map(str, levels))}]:{law}"
    return _execute(_run_gamma0_chunk, spec, samples * len(levels), jobs, label)
