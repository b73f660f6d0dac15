"""Full analysis pipeline producing a :class:`ClassificationReport`.

Reports state which defining tensor equations hold on the given homogeneous
frame.  Literature classification branches appear only as annotations
("consistent", "inconsistent", "label-only", "not-verified"), never as claims
about global isometry type.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

from ..contact_structure import (
    CheckReport,
    check_contact_axioms,
    check_h_identities,
    compute_h,
    sasakian_and_kcontact,
)
from ..report import ClassificationReport, Diagnostic, jsonable
from ..riemann_engine import (
    FrameSpec,
    constant_curvature_fit,
    geometry,
    levi_civita,
    metric_violations,
    torsion_violations,
)
from ..tensor_core import InputError, Tensor, exact_einsum, format_rational
from .boeckx import boeckx_invariant
from .conditions import (
    CONDITION_KINDS,
    INDETERMINATE,
    CurvatureTensors,
    check_curvature_condition,
    lemma31_check,
    pseudosymmetry_fit,
    r_dot_equals,
    s_square_formula_check,
)
from .curvature_tensors import concircular, weyl
from .fits import einstein_constant, eta_einstein_crosschecks, eta_einstein_fit, fit_kappa_mu
from .identities import FAIL, frame_n, identity_suite

SECTIONS = (
    "frame",
    "connection",
    "curvature",
    "contact",
    "nullity",
    "identities",
    "eta_einstein",
    "conditions",
    "branches",
)

SUBCOMMAND_SECTIONS = {
    "check": ("frame", "connection", "contact"),
    "curvature": ("frame", "connection", "curvature"),
    "identities": ("frame", "nullity", "identities"),
    "theorems": ("frame", "nullity", "conditions"),
    "classify": SECTIONS,
}


def vector_text(components) -> str:
    """``[2, 0, -1]`` -> ``"2e1 - e3"``."""
    parts = []
    for k, v in enumerate(components, start=1):
        v = Fraction(v)
        if v == 0:
            continue
        mag = abs(v)
        coef = "" if mag == 1 else format_rational(mag)
        sign = "-" if v < 0 else "+"
        parts.append((sign, f"{coef}e{k}"))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def sparse(components) -> dict[str, str]:
    return {str(k + 1): format_rational(v) for k, v in enumerate(components) if v != 0}


def _yes(flag) -> str:
    return "yes" if flag else "no"


class Analysis:
    """Lazily computed curvature stack and verdicts for one frame."""

    def __init__(self, frame: FrameSpec, use_override: bool = False, source: str = "input"):
        if use_override and frame.connection_override is None:
            raise InputError("frame has no connection override to activate")
        self.frame = frame
        self.use_override = use_override
        self.source = source

    # -- core quantities ----------------------------------------------------
    @cached_property
    def bundle(self):
        return geometry(self.frame, self.use_override)

    @cached_property
    def koszul(self):
        return levi_civita(self.frame)

    @cached_property
    def n(self) -> int | None:
        return frame_n(self.frame.dim)

    @property
    def has_contact(self) -> bool:
        return self.frame.contact is not None

    @cached_property
    def h(self):
        return compute_h(self.frame) if self.has_contact else None

    @cached_property
    def axioms(self) -> CheckReport | None:
        return check_contact_axioms(self.frame) if self.has_contact else None

    @cached_property
    def h_checks(self) -> CheckReport | None:
        return check_h_identities(self.frame, self.h, self.bundle.conn) if self.has_contact else None

    @cached_property
    def sas(self) -> CheckReport | None:
        return sasakian_and_kcontact(self.frame, self.bundle) if self.has_contact else None

    @property
    def sasakian(self) -> bool:
        return bool(self.sas and self.sas["sasakian"].passed and self.axioms.passed)

    @cached_property
    def nullity(self):
        return fit_kappa_mu(self.frame, self.bundle, self.h) if self.has_contact else None

    @property
    def kappa(self) -> Fraction | None:
        return self.nullity.kappa if self.nullity is not None and self.nullity.global_fit else None

    @property
    def n_kappa(self) -> bool:
        """Contact metric with xi in a kappa-nullity distribution (mu zero or free)."""
        return bool(
            self.has_contact
            and self.axioms.passed
            and self.kappa is not None
            and self.nullity.mu in (None, 0)
        )

    @cached_property
    def cc(self):
        return constant_curvature_fit(self.bundle.R, self.frame.metric)

    @cached_property
    def einstein(self) -> Fraction | None:
        return einstein_constant(self.bundle.S, self.frame.metric)

    @cached_property
    def eta_fit(self):
        return eta_einstein_fit(self.bundle.S, self.frame.metric, self.frame.contact.eta) if self.has_contact else None

    @cached_property
    def tensors(self) -> CurvatureTensors:
        b = self.bundle
        Ct = concircular(b.R, b.r, self.frame.metric)
        C = weyl(b.R, b.S, b.Q_op, b.r, self.frame.metric) if self.frame.dim >= 3 else None
        return CurvatureTensors(Ct, C)

    @cached_property
    def identities(self):
        if not self.has_contact:
            return None
        return identity_suite(self.frame, self.bundle, self.h, self.nullity, self.sasakian)

    @cached_property
    def verdicts(self):
        out = {}
        for kind in CONDITION_KINDS:
            if kind.startswith("CtildeXi") and not self.has_contact:
                continue
            if kind in ("CtildeXi_C", "C_dot_S") and self.tensors.C is None:
                continue
            out[kind] = check_curvature_condition(kind, self.frame, self.bundle, self.tensors)
        return out

    @cached_property
    def pseudo(self):
        if self.tensors.C is None:
            return None
        return pseudosymmetry_fit(self.bundle, self.tensors.C, self.kappa)

    @cached_property
    def s_square(self):
        cds = self.verdicts.get("C_dot_S")
        return s_square_formula_check(self.bundle, self.kappa, self.n, bool(cds and cds.holds))

    @cached_property
    def ricci_symmetric(self) -> bool:
        S = self.bundle.S.array
        return bool(np.all(S == S.T))

    @cached_property
    def lemma_s(self):
        # a non-metric override connection can produce a non-symmetric Ricci tensor
        if not self.ricci_symmetric:
            return None
        return lemma31_check(self.frame.metric, self.bundle.S)

    @cached_property
    def r_dot(self):
        return r_dot_equals(self.bundle, self.tensors.Ctilde, self.bundle.R, self.frame.metric,
                            "R.Ctilde=R.R")

    # -- report -------------------------------------------------------------
    def report(self, sections: Iterable[str] = SECTIONS) -> ClassificationReport:
        rep = ClassificationReport(self.source)
        for name in sections:
            if name not in SECTIONS:
                raise InputError(f"unknown report section {name!r}")
            getattr(self, f"_section_{name}")(rep)
        rep.sections = jsonable(rep.sections)
        return rep

    def _section_frame(self, rep: ClassificationReport) -> None:
        rep.sections["frame"] = {
            "dimension": self.frame.dim,
            "n": self.n,
            "params": dict(self.frame.params),
            "contact": self.has_contact,
            "connection": "override" if self.use_override else "koszul",
        }

    def _connection_entries(self, conn) -> list[dict]:
        m = self.frame.dim
        return [
            {"i": i + 1, "j": j + 1, "components": sparse(conn.gamma[i, j])}
            for i in range(m)
            for j in range(m)
            if any(v != 0 for v in conn.gamma[i, j])
        ]

    def _section_connection(self, rep: ClassificationReport) -> None:
        frame, conn = self.frame, self.bundle.conn
        tors = torsion_violations(frame, conn)
        metr = metric_violations(frame, conn)
        sec = {
            "source": "override" if self.use_override else "koszul",
            "nonzero": self._connection_entries(conn),
            "torsion_free": not tors,
            "torsion_witness": tors[0][0] if tors else None,
            "metric_compatible": not metr,
            "metric_witness": metr[0][0] if metr else None,
        }
        sev = "error" if self.use_override else "warning"
        for label, viol, what in (("torsion", tors, "torsion-free"), ("metric", metr, "metric-compatible")):
            if viol and self.use_override:
                rep.diagnostics.append(Diagnostic(
                    "error", f"connection-{label}",
                    f"active connection is not {what}", list(viol[0][0]), "0", format_rational(viol[0][1])))
        override = frame.connection_override
        if override is not None:
            o_tors = torsion_violations(frame, override)
            o_metr = metric_violations(frame, override)
            diffs = []
            m = frame.dim
            K = self.koszul.gamma
            for i in range(m):
                for j in range(m):
                    if any(a != b for a, b in zip(K[i, j], override.gamma[i, j])):
                        diffs.append({
                            "i": i + 1, "j": j + 1,
                            "koszul": sparse(K[i, j]), "printed": sparse(override.gamma[i, j]),
                        })
            sec["printed_table"] = {
                "matches_koszul": not diffs,
                "differences": diffs,
                "torsion_free": not o_tors,
                "torsion_witness": o_tors[0][0] if o_tors else None,
                "metric_compatible": not o_metr,
                "metric_witness": o_metr[0][0] if o_metr else None,
            }
            if not self.use_override:
                if o_tors:
                    rep.diagnostics.append(Diagnostic(
                        sev, "printed-connection-torsion",
                        "printed connection table is not torsion-free for the given brackets",
                        list(o_tors[0][0]), "0", format_rational(o_tors[0][1])))
                if o_metr:
                    rep.diagnostics.append(Diagnostic(
                        sev, "printed-connection-metric",
                        "printed connection table is not metric-compatible",
                        list(o_metr[0][0]), "0", format_rational(o_metr[0][1])))
            for d in diffs:
                i, j = d["i"], d["j"]
                rep.diagnostics.append(Diagnostic(
                    "warning", "printed-connection-discrepancy",
                    f"nabla_e{i} e{j}: Koszul gives {vector_text(K[i - 1, j - 1])}, "
                    f"printed table gives {vector_text(override.gamma[i - 1, j - 1])}",
                    [i, j], vector_text(override.gamma[i - 1, j - 1]), vector_text(K[i - 1, j - 1])))
        rep.sections["connection"] = sec

    def _section_curvature(self, rep: ClassificationReport) -> None:
        b = self.bundle
        R = b.R.array
        m = self.frame.dim
        entries = [
            {"i": i + 1, "j": j + 1, "k": k + 1, "components": sparse(R[i, j, k])}
            for i in range(m)
            for j in range(m)
            for k in range(m)
            if any(v != 0 for v in R[i, j, k])
        ]
        bianchi = R + np.transpose(R, (1, 2, 0, 3)) + np.transpose(R, (2, 0, 1, 3))
        bw = next((tuple(int(a) + 1 for a in idx) for idx in zip(*np.nonzero(bianchi != 0))), None)
        rep.sections["curvature"] = {
            "nonzero": entries,
            "flat": b.R.is_zero(),
            "constant_curvature": self.cc.value,
            "constant_curvature_witness": self.cc.witness,
            "ricci": b.S,
            "ricci_operator": b.Q_op,
            "ricci_square": b.S2,
            "scalar": b.r,
            "einstein_constant": self.einstein,
            "first_bianchi": bw is None,
            "first_bianchi_witness": bw,
            "concircular_zero": self.tensors.Ctilde.is_zero(),
            "weyl_zero": None if self.tensors.C is None else self.tensors.C.is_zero(),
        }
        if bw is not None:
            rep.diagnostics.append(Diagnostic(
                "error" if not self.use_override else "warning", "first-bianchi",
                "first Bianchi identity fails", list(bw)))

    def _section_contact(self, rep: ClassificationReport) -> None:
        if not self.has_contact:
            rep.sections["contact"] = {"present": False}
            return
        cd = self.frame.contact
        for c in self.axioms.failures():
            rep.diagnostics.append(Diagnostic(
                "error", "contact-axiom", f"contact axiom {c.name} fails",
                list(c.witness) if c.witness else None, c.expected, c.computed))
        for c in self.h_checks.failures():
            rep.diagnostics.append(Diagnostic(
                "error", "h-identity", f"identity {c.name} fails",
                list(c.witness) if c.witness else None, c.expected, c.computed))
        h = self.h.array
        printed = self.frame.expected.get("h")
        if printed is not None:
            for i in range(self.frame.dim):
                if any(a != b for a, b in zip(h[i], printed.array[i])):
                    rep.diagnostics.append(Diagnostic(
                        "warning", "printed-value-discrepancy",
                        f"h(e{i + 1}): derived {vector_text(h[i])}, printed {vector_text(printed.array[i])}",
                        [i + 1], vector_text(printed.array[i]), vector_text(h[i])))
        sas, kc = self.sas["sasakian"], self.sas["k-contact"]
        rep.sections["contact"] = {
            "present": True,
            "xi": cd.xi,
            "phi": cd.phi,
            "axioms": list(self.axioms.checks),
            "contact_metric": self.axioms.passed,
            "h": self.h,
            "h_printed": printed,
            "h_identities": list(self.h_checks.checks),
            "sasakian": sas.passed,
            "sasakian_witness": sas.witness,
            "k_contact": kc.passed,
            "k_contact_witness": kc.witness,
        }

    def _section_nullity(self, rep: ClassificationReport) -> None:
        if not self.has_contact:
            rep.sections["nullity"] = None
            return
        fit = self.nullity
        boeckx = None
        if fit.global_fit and fit.kappa < 1:
            mu = fit.mu if fit.mu is not None else Fraction(0)
            boeckx = {"value": boeckx_invariant(fit.kappa, mu), "approximate": True,
                      "mu_assumed_zero": fit.mu is None}
        rep.sections["nullity"] = {
            "kappa": fit.kappa,
            "mu": fit.mu,
            "mu_indeterminate": fit.mu_indeterminate,
            "global_fit": fit.global_fit,
            "per_pair": {f"e{i},xi": v for i, v in fit.per_pair.items()},
            "witness": fit.witness,
            "residual": fit.residual,
            "boeckx_invariant": boeckx,
        }
        if not fit.global_fit:
            rep.diagnostics.append(Diagnostic(
                "warning", "no-global-nullity-fit",
                "R(X,Y)xi is not of (kappa,mu)-nullity form; per-pair kappa values reported",
                list(fit.witness), "0", fit.residual))

    def _section_identities(self, rep: ClassificationReport) -> None:
        suite = self.identities
        if suite is None:
            rep.sections["identities"] = {"skipped": "no contact data", "results": []}
            return
        for res in suite.failures:
            rep.diagnostics.append(Diagnostic(
                "error", "identity-failure", f"identity {res.ident} fails",
                list(res.witness) if res.witness else None,
                None if res.rhs is None else format_rational(res.rhs),
                None if res.lhs is None else format_rational(res.lhs)))
        rep.sections["identities"] = {"skipped": suite.skipped, "results": list(suite.results)}

    def _section_eta_einstein(self, rep: ClassificationReport) -> None:
        if not self.has_contact:
            rep.sections["eta_einstein"] = None
            return
        fit = self.eta_fit
        rep.sections["eta_einstein"] = {
            "c1": fit.c1,
            "c2": fit.c2,
            "exact": fit.exact,
            "einstein": fit.einstein,
            "witness": fit.witness,
            "crosschecks": eta_einstein_crosschecks(fit, self.bundle.r, self.kappa, self.n),
        }

    def _section_conditions(self, rep: ClassificationReport) -> None:
        rep.sections["conditions"] = {
            "verdicts": list(self.verdicts.values()),
            "pseudosymmetry": self.pseudo,
            "s_square": self.s_square,
            "kulkarni_nomizu_ricci": self.lemma_s,
            "r_dot_concircular_equals_r_dot_r": self.r_dot,
        }
        if self.s_square.status == "fail":
            rep.diagnostics.append(Diagnostic(
                "warning", "branch-inconsistent",
                "S^2 relation implied by C.S = 0 fails", list(self.s_square.witness),
                self.s_square.rhs, self.s_square.lhs))
        if self.lemma_s is not None and self.lemma_s.premise_holds and self.lemma_s.identity_holds is False:
            rep.diagnostics.append(Diagnostic(
                "error", "kulkarni-nomizu-identity",
                "T.T = alpha Q(g,T) fails for T = g ^ S although S^2 = alpha S + lambda g",
                list(self.lemma_s.witness)))

    # -- literature branches --------------------------------------------------
    def _branch(self, rep, ident, statement, status, detail=None):
        rep.branches.append({"id": ident, "statement": statement, "status": status, "detail": detail})
        if status == "inconsistent":
            rep.diagnostics.append(Diagnostic(
                "warning", "branch-inconsistent", f"{ident}: {statement}"))

    def _section_branches(self, rep: ClassificationReport) -> None:
        flat = self.bundle.R.is_zero()
        cc = self.cc.value
        if not self.n_kappa:
            if self.has_contact:
                self._branch(rep, "n-kappa-structure", "frame is an N(kappa)-contact metric structure",
                             "not-applicable", "contact axioms or nullity fit fail")
            return
        k, n = self.kappa, self.n
        sas = self.sasakian
        eta_e = self.eta_fit.exact
        einstein = self.eta_fit.einstein
        special = n is not None and n > 1 and k == 1 - Fraction(1, n)
        hyper = cc is not None and cc == -k

        def status(ok):
            return "consistent" if ok else "inconsistent"

        self._branch(rep, "sasakian-iff-kappa-one", "N(kappa) structure is Sasakian iff kappa = 1",
                     status((k == 1) == sas))
        if k == 0:
            if n == 1:
                self._branch(rep, "kappa-zero-flat", "kappa = 0 in dimension 3: flat", status(flat))
            else:
                self._branch(rep, "kappa-zero-product",
                             "kappa = 0: locally E^{n+1}(0) x S^n(4)", "not-verified",
                             "isometry type is not computed")
        if special:
            self._branch(rep, "kappa-one-minus-one-over-n", "N(1 - 1/n) branch", "consistent")
        if hyper:
            self._branch(rep, "hyperbolic-minus-kappa", "constant curvature -kappa branch", "consistent")
        if eta_e:
            ok = k == 1 and sas
            self._branch(rep, "eta-einstein-forces-sasakian",
                         "eta-Einstein N(kappa) structure has kappa = 1 and is Sasakian",
                         status(ok),
                         None if ok else f"eta-Einstein with c1={self.eta_fit.c1}, c2={self.eta_fit.c2} "
                                         f"but kappa={k}")
        v = self.verdicts
        if n == 1:
            # these statements rest on kappa = 0, which fails for Sasakian 3-frames
            for kind in ("CtildeXi_Ctilde", "CtildeXi_S", "CtildeXi_C"):
                if kind in v and v[kind].holds:
                    self._branch(rep, f"{kind}-three-dim-flat",
                                 f"3-dim N(kappa) structure with {kind} is flat",
                                 status(flat) if k == 0 else "out-of-hypothesis",
                                 None if k == 0 else "requires kappa = 0")
            for kind in ("CtildeXi_Ctilde", "CtildeXi_R"):
                if kind in v and v[kind].holds:
                    self._branch(rep, f"{kind}-three-dim-trichotomy",
                                 f"3-dim N(kappa) structure with {kind} is Sasakian, flat, "
                                 "or a left-invariant metric on SU(2) or SL(2,R)",
                                 "consistent" if (sas or flat) else "label-only")
        elif n is not None:
            for kind in ("CtildeXi_Ctilde", "CtildeXi_R"):
                if kind in v:
                    self._branch(rep, f"{kind}-iff-special-or-hyperbolic",
                                 f"{kind} iff N(1 - 1/n) or constant curvature -kappa",
                                 status(v[kind].holds == (special or hyper)))
            if "CtildeXi_S" in v:
                self._branch(rep, "CtildeXi_S-iff-special-or-einstein",
                             "CtildeXi_S iff N(1 - 1/n) or Einstein",
                             status(v["CtildeXi_S"].holds == (special or einstein)))
                if v["CtildeXi_S"].holds:
                    self._branch(rep, "CtildeXi_S-einstein-sasakian",
                                 "CtildeXi_S implies Einstein-Sasakian", status(einstein and sas))
            if "CtildeXi_C" in v:
                self._branch(rep, "CtildeXi_C-iff-special-or-eta-einstein",
                             "CtildeXi_C iff N(1 - 1/n) or eta-Einstein",
                             status(v["CtildeXi_C"].holds == (special or eta_e)))
            if "C_dot_S" in v and eta_e:
                self._branch(rep, "eta-einstein-implies-C_dot_S",
                             "eta-Einstein N(kappa) structure satisfies C.S = 0",
                             status(v["C_dot_S"].holds))
            if self.pseudo is not None and self.pseudo.holds:
                self._branch(rep, "pseudosymmetric-kappa-zero-or-eta-einstein",
                             "Weyl-pseudosymmetric N(kappa): kappa = 0 or eta-Einstein",
                             status(k == 0 or eta_e))
                f = self.pseudo.fitted_fC
                if f != INDETERMINATE:
                    self._branch(rep, "pseudosymmetric-fC-minus-kappa",
                                 "Weyl-pseudosymmetric N(kappa): R.C = -kappa Q(g,C)", status(f == -k))

    # -- flags used by text rendering -----------------------------------------
    def flags(self) -> dict:
        eta = self.eta_fit
        return {
            "flat": self.bundle.R.is_zero(),
            "constant_curvature": self.cc.value,
            "einstein": self.einstein,
            "eta_einstein": (eta.c1, eta.c2) if eta is not None and eta.exact else None,
            "contact_metric": None if not self.has_contact else self.axioms.passed,
            "sasakian": None if not self.has_contact else self.sas["sasakian"].passed,
            "k_contact": None if not self.has_contact else self.sas["k-contact"].passed,
        }


def classify(frame: FrameSpec, use_override: bool = False, source: str = "input") -> ClassificationReport:
    """Run the whole pipeline on ``frame``."""
    analysis = Analysis(frame, use_override, source)
    rep = analysis.report(SECTIONS)
    rep.sections["flags"] = jsonable(analysis.flags())
    return rep
