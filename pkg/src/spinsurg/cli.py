"""Command-line front end: ``spinsurg spins|invariants|equiv|move|classify``.

Presentation files are JSON objects with keys ``name`` (optional), ``matrix``
(square symmetric integer array) and ``spin`` (optional 0/1 array).  Form
files for ``classify`` use ``group`` (invariant factors), ``gram`` (strings
``"n/d"``) and optionally ``q``.  A file argument ``@name`` refers to a
bundled fixture (``@s3``, ``@rp3``, ``@torus3``, ``@poincare``, ``@lens3``).

Exit codes: 0 success, 1 usage or parse error, 2 mathematical precondition
violated, 3 size cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Any

from .classification import kk_invariants, is_special, pairing_iso, quadratic_iso, wall_psi
from .forms import (
    FiniteAbelianGroup,
    GroupTooLargeError,
    LinkingPairing,
    QuadraticForm,
    gauss_brown,
    is_nondegenerate,
    p_primary_decomposition,
)
from .intmat import SymIntMatrix, kernel_rank, signature
from .qz import QZ
from .surgery import (
    PreconditionError,
    SpinPresentation,
    blow_down,
    blow_up,
    handle_slide,
    manifold_invariants,
    reverse_orientation,
    spin_invariants,
    spin_structures,
    stabilize_Gamma8,
    stabilize_H,
    stably_equivalent_even,
    y_equivalent,
    y_surgery,
    ys_equivalent,
)

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_SIZE = 0, 1, 2, 3

FIXTURES = ("s3", "rp3", "torus3", "poincare", "lens3")


class ParseError(ValueError):
    """Malformed input file."""


# -- files ------------------------------------------------------------------

def _resolve(path: str) -> Path:
    if path.startswith("@"):
        name = path[1:]
        if name not in FIXTURES:
            raise ParseError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
        return Path(str(resources.files("spinsurg") / "fixtures" / f"{name}.json"))
    return Path(path)


def _read_json(path: str) -> dict:
    try:
        data = json.loads(_resolve(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    return data


def _int_list(value: Any, what: str) -> list[int]:
    if not isinstance(value, list) or any(type(v) is not int for v in value):
        raise ParseError(f"{what} must be an array of integers")
    return value


def parse_presentation(data: dict) -> tuple[str | None, SymIntMatrix, tuple[int, ...] | None]:
    """Validate a presentation object; returns ``(name, matrix, spin)``."""
    extra = set(data) - {"name", "matrix", "spin"}
    if extra:
        raise ParseError(f"unexpected keys: {sorted(extra)}")
    if "matrix" not in data:
        raise ParseError("missing key 'matrix'")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("'name' must be a string")
    if not isinstance(data["matrix"], list):
        raise ParseError("'matrix' must be an array of arrays")
    rows = [_int_list(r, "each matrix row") for r in data["matrix"]]
    try:
        matrix = SymIntMatrix(rows)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc
    spin = None
    if data.get("spin") is not None:
        spin = _int_list(data["spin"], "'spin'")
        if any(v not in (0, 1) for v in spin):
            raise ParseError("'spin' entries must be 0 or 1")
        SpinPresentation(matrix, tuple(spin))
        spin = tuple(spin)
    return name, matrix, spin


def load_presentation(path: str) -> tuple[str | None, SymIntMatrix, tuple[int, ...] | None]:
    return parse_presentation(_read_json(path))


def presentation_to_json(name: str | None, p: SpinPresentation) -> dict:
    out: dict[str, Any] = {}
    if name is not None:
        out["name"] = name
    out["matrix"] = p.matrix.tolist()
    out["spin"] = list(p.spin)
    return out


def form_to_json(form: LinkingPairing | QuadraticForm) -> dict:
    b = form.pairing if isinstance(form, QuadraticForm) else form
    out: dict[str, Any] = {
        "group": list(form.group.invariants),
        "gram": [[str(v) for v in row] for row in b.gram],
    }
    if isinstance(form, QuadraticForm):
        out["q"] = [str(v) for v in form.qgen]
    return out


def form_from_json(data: dict) -> LinkingPairing | QuadraticForm:
    try:
        group = FiniteAbelianGroup(tuple(_int_list(data["group"], "'group'")))
        gram = tuple(tuple(QZ.parse(str(v)) for v in row) for row in data["gram"])
        pairing = LinkingPairing(group, gram)
        if data.get("q") is None:
            return pairing
        return QuadraticForm(group, tuple(QZ.parse(str(v)) for v in data["q"]), pairing)
    except KeyError as exc:
        raise ParseError(f"missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise PreconditionError(str(exc)) from exc


# -- commands -----------------------------------------------------------------

def cmd_spins(path: str) -> dict:
    name, matrix, _ = load_presentation(path)
    spins = spin_structures(matrix)
    return {
        "command": "spins",
        "name": name,
        "count": len(spins),
        "spin_structures": [list(s) for s in spins],
        "provenance": ["characteristic equation B s = diag(B) mod 2"],
    }


def cmd_invariants(path: str) -> dict:
    name, matrix, spin = load_presentation(path)
    betti1, pairing = manifold_invariants(matrix)
    report: dict[str, Any] = {
        "command": "invariants",
        "name": name,
        "betti1": betti1,
        "signature": signature(matrix),
        "torsion": list(pairing.group.invariants),
        "linking_form": [[str(v) for v in row] for row in pairing.gram],
        "provenance": ["betti1 = corank(B)", "linking form presented by -B"],
    }
    if spin is not None:
        inv = spin_invariants(SpinPresentation(matrix, spin))
        report.update({
            "spin": list(spin),
            "phi": [str(v) for v in inv.phi.qgen],
            "gauss_brown": gauss_brown(inv.phi).to_json(),
            "rochlin_mod8": inv.rochlin_mod8,
        })
        report["provenance"] += [
            "phi presented by (-B, s)",
            "Rochlin mod 8 = sgn(B) - s^T B s",
            "Gauss-Brown(phi) = -Rochlin mod 8 (checked)",
        ]
    return report


def cmd_equiv(path_a: str, path_b: str, mode: str = "spin") -> dict:
    name_a, ma, sa = load_presentation(path_a)
    name_b, mb, sb = load_presentation(path_b)
    table: dict[str, Any] = {}
    if mode == "spin":
        if sa is None or sb is None:
            raise PreconditionError("spin mode needs a 'spin' field in both files")
        pa, pb = SpinPresentation(ma, sa), SpinPresentation(mb, sb)
        ia, ib = spin_invariants(pa), spin_invariants(pb)
        verdict = ys_equivalent(pa, pb)
        table = {
            "betti1": [ia.betti1, ib.betti1],
            "torsion": [list(ia.phi.group.invariants), list(ib.phi.group.invariants)],
            "rochlin_mod8": [ia.rochlin_mod8, ib.rochlin_mod8],
            "gauss_brown": [gauss_brown(ia.phi).to_json(), gauss_brown(ib.phi).to_json()],
            "quadratic_forms_isomorphic": verdict if ia.betti1 == ib.betti1 else quadratic_iso(ia.phi, ib.phi),
        }
        provenance = ["Y^s-equivalent iff equal betti1 and isomorphic quadratic forms",
                      "cross-checked: isomorphic linking forms and equal Rochlin mod 8"]
    elif mode == "unspun":
        beta_a, lam_a = manifold_invariants(ma)
        beta_b, lam_b = manifold_invariants(mb)
        verdict = y_equivalent(ma, mb)
        table = {
            "betti1": [beta_a, beta_b],
            "torsion": [list(lam_a.group.invariants), list(lam_b.group.invariants)],
            "linking_forms_isomorphic": pairing_iso(lam_a, lam_b),
        }
        provenance = ["Y-equivalent iff equal betti1 and isomorphic linking forms"]
    elif mode == "stable-even":
        verdict = stably_equivalent_even(ma, mb)
        table = {"kernel_rank": [kernel_rank(ma), kernel_rank(mb)]}
        provenance = ["stably equivalent iff equal kernel rank and isomorphic forms phi_f"]
    else:
        raise ParseError(f"unknown mode {mode!r}")
    return {
        "command": "equiv",
        "mode": mode,
        "names": [name_a, name_b],
        "equivalent": verdict,
        "comparison": table,
        "provenance": provenance,
    }


def apply_move(p: SpinPresentation, move: str, args: argparse.Namespace) -> SpinPresentation:
    """Apply one move; component indices in ``args`` are 1-based."""
    if move == "y":
        return y_surgery(p, args.linkings, args.framing)
    if move == "blow-up":
        return blow_up(p, args.sign)
    if move == "blow-down":
        return blow_down(p, args.index - 1)
    if move == "slide":
        return handle_slide(p, args.i - 1, args.j - 1, args.sign)
    if move == "reverse":
        return reverse_orientation(p, args.index - 1)
    if move == "stabilize-h":
        return stabilize_H(p)
    if move == "stabilize-gamma8":
        return stabilize_Gamma8(p)
    raise ParseError(f"unknown move {move!r}")


def cmd_move(path: str, move: str, args: argparse.Namespace) -> dict:
    name, matrix, spin = load_presentation(path)
    if spin is None:
        raise PreconditionError("moves need a 'spin' field")
    out = apply_move(SpinPresentation(matrix, spin), move, args)
    data = presentation_to_json(name, out)
    parse_presentation(data)
    return data


def _classify_form(form: LinkingPairing | QuadraticForm) -> dict:
    pairing = form.pairing if isinstance(form, QuadraticForm) else form
    if not is_nondegenerate(pairing):
        raise PreconditionError("pairing is degenerate")
    report: dict[str, Any] = {"form": form_to_json(form), "primary_parts": []}
    if isinstance(form, QuadraticForm):
        report["gauss_brown"] = gauss_brown(form).to_json()
    for p, part in p_primary_decomposition(form):
        entry: dict[str, Any] = {"prime": p, "form": form_to_json(part)}
        if p == 2:
            b = part.pairing if isinstance(part, QuadraticForm) else part
            entry["kk_invariants"] = kk_invariants(b).to_json()
            if is_special(b):
                entry["wall_psi"] = form_to_json(wall_psi(b))
        report["primary_parts"].append(entry)
    return report


def cmd_classify(path: str) -> dict:
    data = _read_json(path)
    if "group" in data:
        form = form_from_json(data)
        source = "form"
    else:
        _, matrix, spin = parse_presentation(data)
        if spin is None:
            form = manifold_invariants(matrix)[1]
            source = "linking form of the presentation"
        else:
            form = spin_invariants(SpinPresentation(matrix, spin)).phi
            source = "quadratic form of the spin presentation"
    report = {"command": "classify", "source": source}
    report.update(_classify_form(form))
    report["provenance"] = ["p-primary splitting", "Kawauchi-Kojima invariants (r_k, sigma_k) on the 2-part"]
    return report


# -- output -------------------------------------------------------------------

def _human(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if key in ("command", "provenance"):
            continue
        if isinstance(value, (dict, list)) and value and any(isinstance(v, (dict, list)) for v in (value.values() if isinstance(value, dict) else value)):
            lines.append(f"{key}:")
            items = value.items() if isinstance(value, dict) else enumerate(value)
            for k, v in items:
                lines.append(f"  {k}: {json.dumps(v)}")
        else:
            lines.append(f"{key}: {json.dumps(value) if not isinstance(value, str) else value}")
    if report.get("provenance"):
        lines.append("via: " + "; ".join(report["provenance"]))
    return "\n".join(lines)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_csv(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinsurg", description=__doc__.split("\n\n")[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spins", parents=[common], help="list spin structures")
    p.add_argument("file")
    p = sub.add_parser("invariants", parents=[common], help="betti1, linking form, phi, Rochlin mod 8")
    p.add_argument("file")
    p = sub.add_parser("equiv", parents=[common], help="decide equivalence of two presentations")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--mode", choices=("spin", "unspun", "stable-even"), default="spin")
    p = sub.add_parser("classify", parents=[common], help="p-primary parts and Kawauchi-Kojima invariants")
    p.add_argument("file")

    p = sub.add_parser("move", parents=[common], help="apply a move and print the new presentation")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the result here instead of stdout")
    moves = p.add_subparsers(dest="move", required=True, parser_class=_Parser)
    m = moves.add_parser("y", help="Y-surgery given leaf linking numbers and framing")
    m.add_argument("--linkings", type=_int_csv, default=[], help="comma-separated, one per component")
    m.add_argument("--framing", type=int, default=0)
    m = moves.add_parser("blow-up")
    m.add_argument("--sign", type=int, choices=(1, -1), default=1)
    m = moves.add_parser("blow-down")
    m.add_argument("--index", type=int, required=True, help="1-based component")
    m = moves.add_parser("slide", help="basis vector j becomes e_j + sign e_i")
    m.add_argument("i", type=int)
    m.add_argument("j", type=int)
    m.add_argument("--sign", type=int, choices=(1, -1), default=1)
    m = moves.add_parser("reverse")
    m.add_argument("--index", type=int, required=True)
    moves.add_parser("stabilize-h")
    moves.add_parser("stabilize-gamma8")
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Run the CLI; returns ``(exit code, text for stdout)``.  Errors are
    reported on stderr."""
    args = build_parser().parse_args(argv)
    try:
        if args.command == "spins":
            report = cmd_spins(args.file)
        elif args.command == "invariants":
            report = cmd_invariants(args.file)
        elif args.command == "equiv":
            report = cmd_equiv(args.file_a, args.file_b, args.mode)
        elif args.command == "classify":
            report = cmd_classify(args.file)
        else:
            data = cmd_move(args.file, args.move, args)
            text = json.dumps(data)
            if args.output:
                Path(args.output).write_text(text + "\n")
                return EXIT_OK, ""
            return EXIT_OK, text
    except ParseError as exc:
        print(f"spinsurg: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE, ""
    except GroupTooLargeError as exc:
        print(f"spinsurg: size cap exceeded: {exc}", file=sys.stderr)
        return EXIT_SIZE, ""
    except (PreconditionError, ValueError) as exc:
        print(f"spinsurg: precondition violated: {exc}", file=sys.stderr)
        return EXIT_MATH, ""
    return EXIT_OK, json.dumps(report) if args.json else _human(report)


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
