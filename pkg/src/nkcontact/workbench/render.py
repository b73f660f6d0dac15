"""Human-readable rendering of a structured report."""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from ..nullity_lab.classify import vector_text


def _yn(flag) -> str:
    if flag is None:
        return "n/a"
    return "yes" if flag else "no"


def _vec(components: dict[str, str], dim: int) -> str:
    dense = ["0"] * dim
    for k, v in components.items():
        dense[int(k) - 1] = v
    return vector_text([Fraction(v) for v in dense])


def _witness(w) -> str:
    return "" if w is None else " at (" + ",".join(str(i) for i in w) + ")"


def _frame(sec, dim, out):
    n = sec["n"]
    out.append(f"dimension: {sec['dimension']}" + (f" (n = {n})" if n is not None else ""))
    if sec["params"]:
        out.append("params: " + ", ".join(f"{k}={v}" for k, v in sorted(sec["params"].items())))
    out.append(f"connection: {sec['connection']}")


def _connection(sec, dim, out):
    for e in sec["nonzero"]:
        out.append(f"  nabla_e{e['i']} e{e['j']} = {_vec(e['components'], dim)}")
    out.append(f"torsion-free: {_yn(sec['torsion_free'])}{_witness(sec['torsion_witness'])}")
    out.append(f"metric-compatible: {_yn(sec['metric_compatible'])}{_witness(sec['metric_witness'])}")
    pt = sec.get("printed_table")
    if pt is not None:
        out.append(f"printed connection table matches Koszul: {_yn(pt['matches_koszul'])}")
        out.append(f"printed table torsion-free: {_yn(pt['torsion_free'])}{_witness(pt['torsion_witness'])}")
        out.append(f"printed table metric-compatible: {_yn(pt['metric_compatible'])}"
                   f"{_witness(pt['metric_witness'])}")


def _curvature(sec, dim, out):
    component = sec.get("component")
    entries = sec["nonzero"] if component is None else [component]
    for e in entries:
        out.append(f"  R(e{e['i']},e{e['j']})e{e['k']} = {_vec(e['components'], dim)}")
    out.append(f"flat: {_yn(sec['flat'])}")
    cc = sec["constant_curvature"]
    out.append("constant curvature: " + ("no" + _witness(sec["constant_curvature_witness"]) if cc is None else cc))
    out.append("ricci: " + str(sec["ricci"]))
    out.append(f"scalar curvature r = {sec['scalar']}")
    ec = sec["einstein_constant"]
    out.append("einstein: " + ("no" if ec is None else f"yes (c1={ec}, c2=0)"))
    out.append(f"first bianchi: {_yn(sec['first_bianchi'])}{_witness(sec['first_bianchi_witness'])}")
    out.append(f"concircular zero: {_yn(sec['concircular_zero'])}")
    out.append(f"weyl zero: {_yn(sec['weyl_zero'])}")


def _checks(title, checks, out):
    for c in checks:
        tail = "" if c["passed"] else _witness(c["witness"])
        if not c["passed"] and c["expected"] is not None:
            tail += f" (expected {c['expected']}, computed {c['computed']})"
        out.append(f"  [{'pass' if c['passed'] else 'FAIL'}] {title}{c['name']}{tail}")


def _contact(sec, dim, out):
    if not sec["present"]:
        out.append("contact: none")
        return
    out.append(f"contact metric: {_yn(sec['contact_metric'])}")
    _checks("", sec["axioms"], out)
    for i, row in enumerate(sec["h"], start=1):
        comps = {str(k): v for k, v in enumerate(row, start=1) if v != "0"}
        out.append(f"  h(e{i}) = {_vec(comps, dim)}")
    _checks("", sec["h_identities"], out)
    out.append(f"sasakian: {_yn(sec['sasakian'])}{_witness(sec['sasakian_witness'])}")
    out.append(f"k-contact: {_yn(sec['k_contact'])}{_witness(sec['k_contact_witness'])}")


def _nullity(sec, dim, out):
    if sec is None:
        out.append("nullity: no contact data")
        return
    if sec["global_fit"]:
        out.append(f"kappa = {sec['kappa']}")
        out.append("mu = " + ("indeterminate" if sec["mu_indeterminate"] else str(sec["mu"])))
    else:
        out.append(f"kappa: no global fit{_witness(sec['witness'])} (residual {sec['residual']})")
    out.append("per-pair kappa: " + ", ".join(
        f"({k})={'none' if v is None else v}" for k, v in sec["per_pair"].items()))
    b = sec["boeckx_invariant"]
    if b is not None:
        out.append(f"boeckx invariant ~ {b['value']:.12g}")


def _identities(sec, dim, out):
    if sec["skipped"]:
        out.append(f"identities: skipped ({sec['skipped']})")
        return
    for r in sec["results"]:
        tail = _witness(r["witness"]) if r["status"] == "fail" else ""
        out.append(f"  [{r['status']}] {r['ident']}{tail}")


def _eta_einstein(sec, dim, out):
    if sec is None:
        return
    if sec["exact"]:
        out.append(f"eta-einstein: yes (c1={sec['c1']}, c2={sec['c2']})")
    else:
        out.append(f"eta-einstein: no{_witness(sec['witness'])}")
    cf = sec["crosschecks"].get("closed_form")
    if cf is not None:
        out.append(f"  closed-form coefficients match: {_yn(cf['matches'])}")


def _conditions(sec, dim, out):
    for v in sec["verdicts"]:
        out.append(f"  {v['condition']}: " + ("holds" if v["holds"] else "fails" + _witness(v["witness"])))
    p = sec["pseudosymmetry"]
    if p is not None:
        text = "holds" if p["holds"] else "fails" + _witness(p["witness"])
        if p["holds"]:
            text += f" (f_C = {p['fitted_fC']})"
        out.append(f"  pseudosymmetry: {text}")
    s = sec["s_square"]
    out.append(f"  S^2 relation: {s['status']}")
    lem = sec["kulkarni_nomizu_ricci"]
    if lem is not None:
        if lem["premise_holds"]:
            out.append(f"  S^2 = alpha S + lambda g: alpha={lem['alpha']}, lambda={lem['lam']}; "
                       f"T.T = alpha Q(g,T): {_yn(lem['identity_holds'])}")
        else:
            out.append("  S^2 = alpha S + lambda g: no" + _witness(lem["premise_witness"]))
    rd = sec["r_dot_concircular_equals_r_dot_r"]
    out.append("  R.Ctilde = R.R: " + ("holds" if rd["holds"] else "fails" + _witness(rd["witness"])))


_RENDERERS = {
    "frame": _frame,
    "connection": _connection,
    "curvature": _curvature,
    "contact": _contact,
    "nullity": _nullity,
    "identities": _identities,
    "eta_einstein": _eta_einstein,
    "conditions": _conditions,
}


def render_text(data: dict[str, Any]) -> str:
    """Render ``ClassificationReport.to_dict()`` output."""
    sections = data["sections"]
    dim = sections.get("frame", {}).get("dimension", 0)
    out = [f"source: {data['source']}"]
    for name, fn in _RENDERERS.items():
        if name in sections:
            fn(sections[name], dim, out)
    if data["branches"]:
        out.append("branches:")
        for b in data["branches"]:
            detail = f" ({b['detail']})" if b["detail"] else ""
            out.append(f"  - {b['id']}: {b['status']}{detail}")
    if data["diagnostics"]:
        out.append("diagnostics:")
        for d in data["diagnostics"]:
            line = f"  {d['severity']} [{d['code']}] {d['message']}{_witness(d['witness'])}"
            out.append(line)
    out.append(f"exit code: {data['exit_code']}")
    return "\n".join(out) + "\n"
