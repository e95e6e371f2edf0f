"""``twpair`` command-line front end."""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import oracle
from .alexander import AlexanderError, adj_map, adj_rank, h1_presentation, twisted_alexander, twisted_gram
from .coloring import RepresentationError, as_coloring, colorings, ring_basis
from .config import ConfigError, RunConfig, parse_psi, read_mapping, rep_from_config
from .diagram import DiagramError, LinkDiagram, builtin, parse_pd
from .exactalg import PolySyntaxError, UnsupportedRing
from .pairing import (
    BilinearFormSpec,
    PairingError,
    cocycle_invariant,
    diagonal_correction,
    pairing_matrix,
    phi_cocycle,
    q_value,
    state_sum,
)
from .repcatalog import FIXTURES, fixture

EXIT_OK, EXIT_CONFIG, EXIT_UNSUPPORTED, EXIT_MISMATCH = 0, 2, 3, 4


class Mismatch(RuntimeError):
    pass


@dataclass
class Inputs:
    diagram: LinkDiagram
    rep: object
    psi: BilinearFormSpec
    alexander_rep: object = None
    printed: dict | None = None


def _diagram(cfg: RunConfig) -> LinkDiagram | None:
    if cfg.knot:
        return builtin(cfg.knot)
    if cfg.pd:
        try:
            with open(cfg.pd) as fh:
                return parse_pd(fh.read(), name=cfg.pd)
        except OSError as exc:
            raise ConfigError(f"cannot read {cfg.pd}: {exc}") from exc
    return None


def load_inputs(cfg: RunConfig) -> Inputs:
    d = _diagram(cfg)
    psi = parse_psi(cfg.psi)
    if cfg.fixture:
        if cfg.fixture not in FIXTURES:
            raise ConfigError(f"unknown fixture {cfg.fixture!r}; known: {', '.join(sorted(FIXTURES))}")
        fx = fixture(cfg.fixture)
        if d is not None and d != fx.diagram:
            raise ConfigError("the fixture carries its own diagram; drop --knot/--pd")
        return Inputs(fx.diagram, fx.rep, psi or fx.psi, fx.alexander_rep, fx.printed)
    rc = rep_from_config(read_mapping(cfg.rep), d)
    f = rc.representation
    return Inputs(rc.diagram, f, psi or rc.psi or BilinearFormSpec(), f if f.rho is not None else None)


# ---------------------------------------------------------------------------
# commands


def cmd_colorings(cfg: RunConfig, inp: Inputs) -> dict:
    cm = colorings(inp.diagram, inp.rep)
    return {
        "ring": repr(cm.ring),
        "module_dim": cm.dim_module,
        "full_dim": cm.dim_full,
        "red_dim": cm.dim_red,
        "red_basis": [[str(a) for a in v] for v in cm.red_basis],
    }


def _component(cfg: RunConfig, d: LinkDiagram) -> int:
    if cfg.component > d.n_components:
        raise ConfigError(f"component {cfg.component} out of range (diagram has {d.n_components})")
    return cfg.component - 1


def cmd_pair(cfg: RunConfig, inp: Inputs) -> dict:
    d, f = inp.diagram, inp.rep
    ell = _component(cfg, d)
    which = cfg.options.get("basis", "ring")
    if which == "printed":
        if not inp.printed:
            raise ConfigError("this input has no printed basis vectors")
        basis = list(inp.printed.values())
    else:
        cm = colorings(d, f)
        basis = ring_basis(cm) if which == "ring" else cm.red_basis
    rep = pairing_matrix(d, f, f, inp.psi, ell, basis, basis)
    out = rep.to_dict()
    out["basis"] = [[str(a) for a in v] for v in basis]
    return out


def _twisted_pairing(d: LinkDiagram, fa, delta, psi, ell: int) -> dict:
    quotient = fa.ring.quotient(fa.t_vars[0], delta)
    adj = adj_map(d, fa, quotient)
    gram = twisted_gram(adj, psi, ell)
    det = gram.det()
    return {"adj_rank": adj_rank(adj), "gram": gram.to_strings(), "determinant": str(det),
            "nonsingular": det.is_unit()}


def cmd_alexander(cfg: RunConfig, inp: Inputs) -> dict:
    if inp.alexander_rep is None:
        raise ConfigError("the twisted polynomial needs a representation with a 'rho' section")
    d, fa = inp.diagram, inp.alexander_rep
    out = twisted_alexander(d, fa).to_dict()
    try:
        out["elementary_divisors"] = [str(x) for x in h1_presentation(d, fa).divisors]
    except UnsupportedRing:
        out["elementary_divisors"] = None  # Smith form needs a univariate Laurent ring over a field
    out["pairing"] = None
    if out["delta"] is not None and not fa.ring.convert(out["delta"]).is_unit():
        try:
            out["pairing"] = _twisted_pairing(d, fa, fa.ring.convert(out["delta"]), inp.psi, _component(cfg, d))
        except (UnsupportedRing, AlexanderError):
            pass
    return out


def cmd_twisted_pair(cfg: RunConfig, inp: Inputs) -> dict:
    fa = inp.alexander_rep
    if fa is None:
        raise ConfigError("the twisted pairing needs a representation with a 'rho' section")
    d = inp.diagram
    data = twisted_alexander(d, fa)
    if data.delta is None:
        raise UnsupportedRing("the twisted polynomial is not an exact Laurent polynomial here")
    return {"delta": str(data.delta), **_twisted_pairing(d, fa, data.delta, inp.psi, _component(cfg, d))}


def _is_finite(f) -> bool:
    return f.ring.base.kind == "GF" and not f.ring.free_names


def cmd_invariant(cfg: RunConfig, inp: Inputs) -> dict:
    d, f = inp.diagram, inp.rep
    form = inp.psi.bind(f.ring, f.n)
    phi = phi_cocycle(form)
    zero = f.ring.zero()
    if _is_finite(f):
        X = oracle.FiniteQuandle.from_representation(f)
        cols = [oracle.to_coloring(X, f, c) for c in oracle.enumerate_colorings(d, X, oracle.group_labels(X, f))]
    else:
        cm = colorings(d, f)
        cols = [as_coloring(d, f, v) for v in cm.full_basis]
    multiset = cocycle_invariant(d, cols, phi, zero)
    # the state sum splits as the total diagonal pairing plus a correction term
    bad = 0
    for c in cols:
        total = sum((q_value(d, f, f, form, k, c, c, check=False) for k in range(d.n_components)), zero)
        if state_sum(d, c, phi, zero) != total + diagonal_correction(d, c, form):
            bad += 1
    if bad:
        raise Mismatch(f"state sum decomposition failed on {bad} colorings")
    return {"colorings": len(cols), "state_sums": multiset}


def cmd_oracle_check(cfg: RunConfig, inp: Inputs) -> dict:
    d, f = inp.diagram, inp.rep
    ell = _component(cfg, d)
    if _is_finite(f):
        X = oracle.FiniteQuandle.from_representation(f)
        cs = oracle.enumerate_colorings(d, X, oracle.group_labels(X, f))
        expected = oracle.kernel_size(d, f)
        form = inp.psi.bind(f.ring, f.n)
        B = oracle.form_matrix(form.b)
        rng = random.Random(cfg.seed)
        pairs = [(a, b) for a in cs for b in cs]
        limit = int(cfg.options.get("max_pairs", 10 ** 5))
        if len(pairs) > limit:
            pairs = rng.sample(pairs, limit)
        agree = 0
        for a, b in pairs:
            qv = q_value(d, f, f, form, ell, oracle.to_coloring(X, f, a), oracle.to_coloring(X, f, b))
            agree += oracle._from_ring_vector(f.ring, [qv]) == oracle.brute_q(d, X, X, B, ell, a, b)
        ok = len(cs) == expected and agree == len(pairs)
        line = f"{'OK' if ok else 'MISMATCH'} {len(cs)} colorings, Q agreement {agree}/{len(pairs)}"
        out = {"colorings": len(cs), "kernel_count": expected, "q_agree": agree, "q_pairs": len(pairs),
               "summary": line}
    else:
        cm = colorings(d, f)
        cs = oracle.cocycle_space(d, f)
        ok = cs.dim_z_rel == cm.dim_full and cs.dim_h_rel == cm.dim_red
        line = f"{'OK' if ok else 'MISMATCH'} Col {cm.dim_full} = Z1 {cs.dim_z_rel}, Col^red {cm.dim_red} = H1 {cs.dim_h_rel}"
        out = {"cocycles": cs.to_dict(), "col_dim": cm.dim_full, "red_dim": cm.dim_red, "summary": line}
    if not ok:
        raise Mismatch(line, out)
    return out


HANDLERS = {
    "colorings": cmd_colorings,
    "pair": cmd_pair,
    "alexander": cmd_alexander,
    "twisted-pair": cmd_twisted_pair,
    "invariant": cmd_invariant,
    "oracle-check": cmd_oracle_check,
}


# ---------------------------------------------------------------------------
# text rendering


def render_text(command: str, out: dict) -> str:
    if command == "colorings":
        lines = [f"ring: {out['ring']}", f"module dim (over base field): {out['module_dim']}",
                 f"full dim (over base field): {out['full_dim']}",
                 f"red dim (over base field): {out['red_dim']}", "red basis:"]
        lines += ["  (" + ", ".join(v) + ")" for v in out["red_basis"]]
        return "\n".join(lines)
    if command == "pair":
        lines = [f"component {out['component']} over {out['ring']}", "gram:"]
        lines += ["  [" + ", ".join(r) + "]" for r in out["gram"]]
        lines.append("flags: " + ", ".join(k for k, v in out["flags"].items() if v))
        return "\n".join(lines)
    if command == "alexander":
        lines = [out["delta"] if out["delta"] is not None else f"({out['numerator']}) / ({out['denominator']})"]
        if out["elementary_divisors"] is not None:
            lines.append("elementary divisors: " + (", ".join(out["elementary_divisors"]) or "none"))
        if out["pairing"] is not None:
            lines.append("twisted gram: " + "; ".join("[" + ", ".join(r) + "]" for r in out["pairing"]["gram"]))
        return "\n".join(lines)
    if command == "twisted-pair":
        lines = [f"delta: {out['delta']}", f"adjugate rank: {out['adj_rank']}", "gram:"]
        lines += ["  [" + ", ".join(r) + "]" for r in out["gram"]]
        lines.append(f"determinant: {out['determinant']} ({'nonsingular' if out['nonsingular'] else 'singular'})")
        return "\n".join(lines)
    if command == "invariant":
        lines = [f"{out['colorings']} colorings"]
        lines += [f"  {k}: {v}" for k, v in out["state_sums"].items()]
        return "\n".join(lines)
    return out["summary"]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twpair", description="Quandle colorings, cohomology pairings and twisted Alexander data.")
    ap.add_argument("--config", help="run config file (JSON or TOML); command-line flags override it")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in HANDLERS:
        sp = sub.add_parser(name)
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--knot", help="built-in diagram, e.g. trefoil, figure8, hopf, torus_mm:3")
        src.add_argument("--pd", help="file holding a PD code")
        rep = sp.add_mutually_exclusive_group()
        rep.add_argument("--rep", help="representation config (JSON or TOML)")
        rep.add_argument("--fixture", help=f"named example ({', '.join(sorted(FIXTURES))})")
        sp.add_argument("--psi", help="hermitian_dot, det2, trace_form or a JSON custom spec")
        sp.add_argument("--component", type=int, default=None, help="1-based link component")
        sp.add_argument("--format", choices=("text", "json"), default=None)
        sp.add_argument("--seed", type=int, default=None)
        if name == "pair":
            sp.add_argument("--basis", choices=("ring", "coefficient", "printed"), default=None)
        if name == "oracle-check":
            sp.add_argument("--max-pairs", type=int, default=None)
    return ap


def _merge(args: argparse.Namespace) -> RunConfig:
    data = read_mapping(args.config) if args.config else {}
    data = dict(data)
    data["command"] = args.command
    for key in ("knot", "pd", "rep", "fixture", "psi", "component", "format", "seed"):
        v = getattr(args, key, None)
        if v is not None:
            data[key] = v
    opts = dict(data.get("options", {}))
    if getattr(args, "basis", None):
        opts["basis"] = args.basis
    if getattr(args, "max_pairs", None):
        opts["max_pairs"] = args.max_pairs
    data["options"] = opts
    return RunConfig.from_mapping(data)


def run(argv: list[str] | None = None) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge(args)
        inp = load_inputs(cfg)
        out = HANDLERS[cfg.command](cfg, inp)
        code = EXIT_OK
    except Mismatch as exc:
        out = exc.args[1] if len(exc.args) > 1 else {"error": str(exc)}
        out.setdefault("summary", exc.args[0])
        cfg_fmt = getattr(locals().get("cfg"), "format", "text")
        return EXIT_MISMATCH, json.dumps(out, indent=2, sort_keys=True) if cfg_fmt == "json" else out["summary"]
    except UnsupportedRing as exc:
        return EXIT_UNSUPPORTED, f"unsupported ring: {exc}"
    except (ConfigError, DiagramError, RepresentationError, PairingError, PolySyntaxError, AlexanderError,
            ValueError, KeyError) as exc:
        return EXIT_CONFIG, f"error: {exc}"
    if cfg.format == "json":
        return code, json.dumps(out, indent=2, sort_keys=True)
    return code, render_text(cfg.command, out)


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    stream = sys.stdout if code in (EXIT_OK, EXIT_MISMATCH) else sys.stderr
    print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
