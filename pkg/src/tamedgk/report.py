"""The full analysis pipeline for a structure file, and its text and JSON reports."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Callable

import numpy as np

from .algebra import ComplexTensor, Form, Multivector, is_zero_array
from .connections import bismut, chern, connection_contracts, levi_civita, torsion, torsion_3form
from .hermitian import (DegenerateFormError, NotClosedError, NotTamedError, TamedPackage,
                        generalized_pair_checks, induce_tamed_package,
                        integrable, jd_omega, prop22_residual, skt_check)
from .lie import LieAlgebra, d_dense, jacobi_check
from . import poisson as P
from .structure_file import ParseError, parse_structure_file

EXIT_OK, EXIT_PARSE, EXIT_JACOBI, EXIT_TAMING, EXIT_IDENTITY = 0, 1, 2, 3, 4


class AnalysisError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


# ---------------------------------------------------------------------------
# Identity checks


@dataclass(frozen=True)
class Check:
    label: str
    residual: object
    passed: bool
    witness: str = ""


def _witness(obj) -> str:
    """First nonzero component of a residual, as text."""
    if isinstance(obj, (Form, Multivector)):
        if obj.is_zero():
            return ""
        key = sorted(obj.terms)[0]
        sym = "e" if isinstance(obj, Form) else "e_"
        return f"{sym}{''.join(map(str, key)) if obj.dim <= 9 else key} coefficient {obj.terms[key]}"
    if isinstance(obj, ComplexTensor):
        for part, arr in (("real", obj.re), ("imaginary", obj.im)):
            for idx in np.ndindex(arr.shape):
                if arr[idx] != 0:
                    triple = ", ".join(f"e{i + 1}" for i in idx)
                    return f"{part} part at ({triple}) = {arr[idx]}"
        return ""
    if isinstance(obj, np.ndarray):
        for idx in np.ndindex(obj.shape):
            if obj[idx] != 0:
                return f"component {tuple(i + 1 for i in idx)} = {obj[idx]}"
    return ""


def _is_zero(obj) -> bool:
    if isinstance(obj, (Form, Multivector, ComplexTensor)):
        return obj.is_zero()
    return is_zero_array(obj)


def _tensor_check(label: str, residual) -> Check:
    ok = _is_zero(residual)
    return Check(label, residual, ok, "" if ok else _witness(residual))


def _bool_check(label: str, ok: bool, witness: str = "") -> Check:
    return Check(label, ok, ok, "" if ok else (witness or "false"))


def _prop22(lie, pkg):
    a, b = prop22_residual(lie, pkg)
    return [_tensor_check("J+ identity", a), _tensor_check("J- identity", b)]


def _zabzine(lie, pkg):
    return [_tensor_check("(g, J+)", P.zabzine_identity_residual(lie, pkg.g, pkg.Jplus)),
            _tensor_check("(g, J-)", P.zabzine_identity_residual(lie, pkg.g, pkg.Jminus))]


def _lemma41(lie, pkg):
    res, b1 = P.lemma41_residual(lie, pkg)
    return [_tensor_check("[beta2, beta2] formula", res), _tensor_check("[beta1, beta1] = 0", b1)]


def _qq(lie, pkg):
    return P.schouten_bracket(lie, P.bivector_from_skew(P.commutator_skew(pkg)))


def _prop44(lie, pkg):
    return [_tensor_check("general formula", P.brac_explicit_rhs(lie, pkg, "general") - _qq(lie, pkg))]


def _dim4(lie, pkg):
    if lie.dim != 4:
        return []
    return [_tensor_check("dimension-4 formula", P.brac_explicit_rhs(lie, pkg, "dim4") - _qq(lie, pkg))]


def _chern_psi(lie, pkg):
    return [_tensor_check("printed display", P.chern_derivative_identity_residual(lie, pkg, "printed"))]


def _schouten_modes(lie, pkg):
    out = []
    for name, skew in (("Q", P.commutator_skew(pkg)), ("Q/2", P.commutator_skew(pkg, P.HALF))):
        modes = P.schouten_all_modes(lie, skew)
        ref = modes["frame"]
        for mode in P.SCHOUTEN_MODES[1:]:
            out.append(_tensor_check(f"{name}: frame = {mode}", modes[mode] - ref))
    return out


def _variants(lie, pkg):
    """The sign-corrected forms of the identities whose printed form fails."""
    a, b = prop22_residual(lie, pkg, "sign_flipped")
    out = [_tensor_check("prop22 with +J d omega, J+", a), _tensor_check("prop22 with +J d omega, J-", b)]
    if lie.dim == 4:
        out.append(_tensor_check("dim4 with +(P + M)(QX, Y, QZ)",
                                 P.brac_explicit_rhs(lie, pkg, "dim4_corrected") - _qq(lie, pkg)))
    out.append(_tensor_check("chern-psi with i/2 psi(X + iJX, ..)",
                             P.chern_derivative_identity_residual(lie, pkg, "rescaled")))
    out.append(_tensor_check("chern-psi real form",
                             P.chern_derivative_identity_residual(lie, pkg, "intermediate")))
    return out


def _package(lie, pkg):
    return [_bool_check(k, v) for k, v in pkg.invariants().items()]


def _generalized(lie, pkg):
    return [_bool_check(k, v) for k, v in generalized_pair_checks(pkg).items()]


def _connections(lie, pkg):
    out = []
    lc = levi_civita(lie, pkg.g)
    out += [_bool_check(f"Levi-Civita: {k}", v) for k, v in connection_contracts(lie, lc, pkg.g).items()]
    out.append(_tensor_check("Levi-Civita: torsion-free", torsion(lie, lc)))
    for sign, j in (("+", pkg.Jplus), ("-", pkg.Jminus)):
        conn = bismut(lie, pkg, sign)
        out += [_bool_check(f"Bismut{sign}: {k}", v)
                for k, v in connection_contracts(lie, conn, pkg.g, j).items()]
    out += [_bool_check(f"Chern: {k}", v)
            for k, v in connection_contracts(lie, chern(lie, pkg), pkg.g, pkg.Jplus).items()]
    if integrable(lie, pkg.Jplus):
        t = torsion_3form(lie, bismut(lie, pkg, "+"), pkg.g)
        if isinstance(t, Form):
            out.append(_tensor_check("Bismut+ torsion = J+ d omega+", t - jd_omega(lie, pkg, "+")))
            closed = lie.dim < 4 or is_zero_array(d_dense(lie, t.dense))
            out.append(_bool_check("d(torsion) = 0 iff SKT", closed == skt_check(lie, pkg)))
        else:
            out.append(_bool_check("Bismut+ torsion totally skew", False, str(t)))
    return out


IDENTITIES: dict[str, Callable[[LieAlgebra, TamedPackage], list[Check]]] = {
    "prop22": _prop22,
    "zabzine": _zabzine,
    "lemma41": _lemma41,
    "prop44": _prop44,
    "dim4": _dim4,
    "chern-psi": _chern_psi,
    "schouten-modes": _schouten_modes,
}

SUITE_EXTRAS = {
    "corrected-variants": _variants,
    "package-invariants": _package,
    "generalized-pair": _generalized,
    "connections": _connections,
}


def run_identity(name: str, lie: LieAlgebra, pkg: TamedPackage) -> list[Check]:
    table = {**IDENTITIES, **SUITE_EXTRAS}
    if name not in table:
        raise KeyError(name)
    return table[name](lie, pkg)


# ---------------------------------------------------------------------------
# Report


@dataclass(frozen=True)
class TwistingSummary:
    count: int
    representative: Form | None


@dataclass(frozen=True)
class AnalysisReport:
    input_digest: str
    jacobi: bool
    omega_closed: bool
    tames: bool
    jplus_integrable: bool
    jminus_table: tuple[tuple[Fraction, ...], ...]
    jminus_integrable: bool
    skt: bool
    generalized_pair_valid: bool
    q_rank: int
    imq_involutive: bool
    imq_subalgebra: bool
    schouten_QQ: Multivector
    twisting_solutions: TwistingSummary
    beta2_twisted: tuple[tuple[str, bool], ...]
    frakN_zero: bool
    identity_suite: tuple[tuple[str, bool], ...]

    @property
    def all_identities_pass(self) -> bool:
        return all(ok for _, ok in self.identity_suite)

    def to_json(self) -> str:
        # one line per field keeps the document diffable without exploding nested arrays
        body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in _to_plain(self).items())
        return "{\n" + body + "\n}\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return _from_plain(json.loads(text))

    def to_text(self) -> str:
        rows = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "jminus_table":
                rows.append((f.name, "; ".join(" ".join(str(x) for x in row) for row in value)))
            elif f.name == "twisting_solutions":
                rep = "none" if value.representative is None else str(value.representative)
                rows.append((f.name, f"{value.count} (representative {rep})"))
            elif f.name == "beta2_twisted":
                rows.append((f.name, " ".join(f"{k}={_yes(v)}" for k, v in value)))
            elif f.name == "identity_suite":
                continue
            else:
                rows.append((f.name, _yes(value) if isinstance(value, bool) else str(value)))
        width = max(len(k) for k, _ in rows)
        lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
        lines.append("identity_suite")
        name_width = max((len(n) for n, _ in self.identity_suite), default=0)
        lines += [f"  {n.ljust(name_width)}  {'pass' if ok else 'FAIL'}" for n, ok in self.identity_suite]
        return "\n".join(lines) + "\n"


def _yes(b: bool) -> str:
    return "yes" if b else "no"


def _alt_plain(x):
    if x is None:
        return None
    return {"dim": x.dim, "grade": x.grade,
            "terms": [[list(k), str(c)] for k, c in sorted(x.terms.items())]}


def _alt_from(d, cls):
    if d is None:
        return None
    return cls(d["dim"], d["grade"], {tuple(k): Fraction(c) for k, c in d["terms"]})


def _to_plain(r: AnalysisReport) -> dict:
    out = {}
    for f in fields(r):
        v = getattr(r, f.name)
        if f.name == "jminus_table":
            v = [[str(x) for x in row] for row in v]
        elif f.name == "schouten_QQ":
            v = _alt_plain(v)
        elif f.name == "twisting_solutions":
            v = {"count": v.count, "representative": _alt_plain(v.representative)}
        elif f.name in ("beta2_twisted", "identity_suite"):
            v = [[k, ok] for k, ok in v]
        out[f.name] = v
    return out


def _from_plain(d: dict) -> AnalysisReport:
    names = [f.name for f in fields(AnalysisReport)]
    if sorted(d) != sorted(names):
        raise ValueError("report fields do not match")
    kw = dict(d)
    kw["jminus_table"] = tuple(tuple(Fraction(x) for x in row) for row in d["jminus_table"])
    kw["schouten_QQ"] = _alt_from(d["schouten_QQ"], Multivector)
    ts = d["twisting_solutions"]
    kw["twisting_solutions"] = TwistingSummary(ts["count"], _alt_from(ts["representative"], Form))
    kw["beta2_twisted"] = tuple((k, ok) for k, ok in d["beta2_twisted"])
    kw["identity_suite"] = tuple((k, ok) for k, ok in d["identity_suite"])
    return AnalysisReport(**kw)


@dataclass(frozen=True)
class Analysis:
    report: AnalysisReport
    failures: tuple[tuple[str, Check], ...]
    exit_code: int


def load_package(text: str):
    """Parse and validate; raises AnalysisError with the pipeline's exit code."""
    try:
        sp = parse_structure_file(text)
    except ParseError as exc:
        raise AnalysisError(f"parse error: {exc}", EXIT_PARSE) from exc
    if "J" not in sp.endomorphisms or "Omega" not in sp.forms:
        raise AnalysisError("parse error: the file must declare J and Omega", EXIT_PARSE)
    lie = sp.algebra
    if lie.dim < 4:
        # no 3-forms below dimension 3, and a 2-dim package always has Q = 0
        raise AnalysisError("the pipeline needs dimension at least 4", EXIT_PARSE)
    if not jacobi_check(lie):
        raise AnalysisError("the structure equations violate the Jacobi identity (d^2 != 0)", EXIT_JACOBI)
    try:
        pkg = induce_tamed_package(lie, sp.forms["Omega"], sp.endomorphisms["J"])
    except (NotClosedError, NotTamedError, DegenerateFormError) as exc:
        raise AnalysisError(str(exc), EXIT_TAMING) from exc
    except ValueError as exc:
        raise AnalysisError(str(exc), EXIT_TAMING) from exc
    return lie, pkg


def analyze_text(text: str) -> Analysis:
    digest = hashlib.sha256(text.encode()).hexdigest()
    lie, pkg = load_package(text)

    gp = generalized_pair_checks(pkg)
    pair_valid = all(v for k, v in gp.items() if "closed form" not in k)

    skew = P.commutator_skew(pkg)
    image = P.image_analysis(lie, skew)
    twist = P.twist_bivector(pkg)
    qq = P.schouten_bracket(lie, twist)
    sols = P.solve_twisting_form(lie, twist)
    beta2 = P.beta_bivectors(pkg)[1]
    beta2_twisted = tuple((i, bool(P.solve_twisting_form(lie, beta2, "beta2", pkg, i)))
                          for i in P.INTERPRETATIONS)

    suite = []
    failures = []
    for name, fn in {**IDENTITIES, **SUITE_EXTRAS}.items():
        checks = fn(lie, pkg)
        for c in checks:
            label = f"{name}: {c.label}"
            suite.append((label, c.passed))
            if not c.passed:
                failures.append((label, c))

    report = AnalysisReport(
        input_digest=digest,
        jacobi=True,
        omega_closed=True,
        tames=True,
        jplus_integrable=integrable(lie, pkg.Jplus),
        jminus_table=tuple(tuple(row) for row in pkg.Jminus),
        jminus_integrable=integrable(lie, pkg.Jminus),
        skt=skt_check(lie, pkg),
        generalized_pair_valid=pair_valid,
        q_rank=image.rank,
        imq_involutive=image.involutive,
        imq_subalgebra=image.subalgebra,
        schouten_QQ=qq,
        twisting_solutions=TwistingSummary(len(sols.forms()), sols.particular),
        beta2_twisted=beta2_twisted,
        frakN_zero=P.frakN_holomorphy(lie, pkg)[1],
        identity_suite=tuple(suite),
    )
    return Analysis(report, tuple(failures), EXIT_IDENTITY if failures else EXIT_OK)
