"""JSON interchange for algebras, bilinear forms, and cochains.

All scalars travel as exact strings "p" or "p/q"; serialization is canonical
(fixed entry order, fixed indentation), so load-save-load is byte-stable and
suitable for golden-file comparisons.
"""

from __future__ import annotations

import json
from typing import Any

from .algebra import NLieSuperalgebra
from .cohomology import Cochain
from .linalg import GradedVectorSpace, Vec
from .metric import BilinearForm
from .representation import Representation
from .scalars import Scalar, format_scalar, parse_scalar
from .wedge import WedgeBasis, canonicalize_word


class SerializationError(ValueError):
    """Malformed input file; the message carries the offending JSON path."""


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _scalar(path: str, text: Any) -> Scalar:
    if not isinstance(text, str):
        raise SerializationError(f"{path}: scalar must be a string 'p/q'")
    try:
        return parse_scalar(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SerializationError(f"{path}: bad scalar {text!r}: {exc}") from None


# ---------------------------------------------------------------------------
# algebras
# ---------------------------------------------------------------------------

def algebra_to_data(g: NLieSuperalgebra) -> dict:
    basis = [{"name": n, "parity": "even" if p == 0 else "odd"}
             for n, p in zip(g.space.names, g.space.parities)]
    brackets = []
    for key in sorted(g.constants):
        value = g.constants[key]
        brackets.append({
            "args": [g.space.names[i] for i in key],
            "value": {g.space.names[i]: format_scalar(value[i])
                      for i in sorted(value)},
        })
    return {"name": g.name, "n": g.n, "basis": basis, "brackets": brackets}


def algebra_from_data(data: Any) -> NLieSuperalgebra:
    if not isinstance(data, dict):
        raise SerializationError("$: algebra file must be a JSON object")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise SerializationError("$.name: must be a string")
    n = data.get("n")
    if not isinstance(n, int) or n < 2:
        raise SerializationError("$.n: arity must be an integer >= 2")
    raw_basis = data.get("basis")
    if not isinstance(raw_basis, list) or not raw_basis:
        raise SerializationError("$.basis: must be a nonempty list")
    names: list[str] = []
    parities: list[int] = []
    for i, entry in enumerate(raw_basis):
        path = f"$.basis[{i}]"
        if not isinstance(entry, dict) or "name" not in entry:
            raise SerializationError(f"{path}: expected {{name, parity}}")
        nm = entry["name"]
        if not isinstance(nm, str) or not nm:
            raise SerializationError(f"{path}.name: must be a nonempty string")
        par = entry.get("parity")
        if par not in ("even", "odd"):
            raise SerializationError(
                f"{path}.parity: must be 'even' or 'odd', got {par!r}")
        names.append(nm)
        parities.append(0 if par == "even" else 1)
    if len(set(names)) != len(names):
        raise SerializationError("$.basis: duplicate basis names")
    space = GradedVectorSpace(tuple(names), tuple(parities))
    index = {nm: i for i, nm in enumerate(names)}

    brackets: dict[tuple[int, ...], Vec] = {}
    raw_brackets = data.get("brackets", [])
    if not isinstance(raw_brackets, list):
        raise SerializationError("$.brackets: must be a list")
    for i, entry in enumerate(raw_brackets):
        path = f"$.brackets[{i}]"
        if not isinstance(entry, dict):
            raise SerializationError(f"{path}: expected an object")
        args = entry.get("args")
        if not isinstance(args, list) or len(args) != n:
            raise SerializationError(f"{path}.args: expected {n} basis names")
        try:
            idx = tuple(index[a] for a in args)
        except (KeyError, TypeError):
            raise SerializationError(
                f"{path}.args: unknown basis name in {args}") from None
        if canonicalize_word(idx, parities) is None:
            raise SerializationError(
                f"{path}.args: repeated even argument, bracket is forced zero")
        value = entry.get("value")
        if not isinstance(value, dict) or not value:
            raise SerializationError(f"{path}.value: expected a nonempty map")
        vec: Vec = {}
        for nm, sval in value.items():
            if nm not in index:
                raise SerializationError(
                    f"{path}.value: unknown basis name {nm!r}")
            c = _scalar(f"{path}.value[{nm!r}]", sval)
            if c != 0:
                vec[index[nm]] = c
        if idx in brackets:
            raise SerializationError(f"{path}.args: duplicate bracket key")
        brackets[idx] = vec
    try:
        return NLieSuperalgebra(space, n, brackets, name=name)
    except ValueError as exc:
        raise SerializationError(f"$.brackets: {exc}") from None


def algebra_dumps(g: NLieSuperalgebra) -> str:
    return canonical_dumps(algebra_to_data(g))


def algebra_loads(text: str) -> NLieSuperalgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid JSON: {exc}") from None
    return algebra_from_data(data)


# ---------------------------------------------------------------------------
# bilinear forms
# ---------------------------------------------------------------------------

def form_to_data(form: BilinearForm) -> list:
    out = []
    d = form.space.dim
    for i in range(d):
        for j in range(i, d):
            c = form.gram[i][j]
            if c != 0:
                out.append({"x": form.space.names[i],
                            "y": form.space.names[j],
                            "value": format_scalar(c)})
    return out


def form_from_data(data: Any, space: GradedVectorSpace) -> BilinearForm:
    if not isinstance(data, list):
        raise SerializationError("$: form file must be a JSON list of pairs")
    d = space.dim
    index = {nm: i for i, nm in enumerate(space.names)}
    gram: list[list[Scalar]] = [[0] * d for _ in range(d)]
    seen: set[tuple[int, int]] = set()
    for k, entry in enumerate(data):
        path = f"$[{k}]"
        if not isinstance(entry, dict):
            raise SerializationError(f"{path}: expected {{x, y, value}}")
        try:
            i = index[entry["x"]]
            j = index[entry["y"]]
        except (KeyError, TypeError):
            raise SerializationError(f"{path}: unknown basis name") from None
        c = _scalar(f"{path}.value", entry.get("value"))
        sgn = -1 if (space.parities[i] and space.parities[j]) else 1
        for (a, b, v) in ((i, j, c), (j, i, sgn * c)):
            if (a, b) in seen:
                if gram[a][b] != v:
                    raise SerializationError(
                        f"{path}: conflicts with an earlier pair under "
                        "supersymmetric completion")
            else:
                seen.add((a, b))
                gram[a][b] = v
    return BilinearForm(space, tuple(tuple(r) for r in gram))


def form_dumps(form: BilinearForm) -> str:
    return canonical_dumps(form_to_data(form))


def form_loads(text: str, space: GradedVectorSpace) -> BilinearForm:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid JSON: {exc}") from None
    return form_from_data(data, space)


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------

def _target_index(space: GradedVectorSpace, name: str) -> int:
    try:
        return space.names.index(name)
    except ValueError:
        raise SerializationError(
            f"unknown target name {name!r} (dual names end in '*')") from None


def cochain_to_data(f: Cochain) -> dict:
    g = f.algebra
    wedge = WedgeBasis(g.space, g.n - 1)
    entries = []
    for key in sorted(f.coeffs):
        c = f.coeffs[key]
        words = key[:f.m]
        z = key[f.m]
        t = key[f.m + 1]
        args: list = [[g.space.names[i] for i in wedge.words[w]]
                      for w in words]
        args.append(g.space.names[z])
        entries.append({
            "args": args,
            "target": f.rho.target.names[t],
            "value": format_scalar(c),
        })
    return {"degree": f.m, "parity": f.parity, "entries": entries}


def cochain_from_data(data: Any, rho: Representation) -> Cochain:
    if not isinstance(data, dict):
        raise SerializationError("$: cochain file must be a JSON object")
    g = rho.algebra
    m = data.get("degree")
    if not isinstance(m, int) or m < 0:
        raise SerializationError("$.degree: must be a nonnegative integer")
    parity = data.get("parity")
    if parity not in (0, 1):
        raise SerializationError("$.parity: must be 0 or 1")
    entries = data.get("entries", [])
    if not isinstance(entries, list):
        raise SerializationError("$.entries: must be a list")
    wedge = WedgeBasis(g.space, g.n - 1)
    index = {nm: i for i, nm in enumerate(g.space.names)}
    coeffs: dict[tuple[int, ...], Scalar] = {}
    for k, entry in enumerate(entries):
        path = f"$.entries[{k}]"
        if not isinstance(entry, dict):
            raise SerializationError(f"{path}: expected an object")
        args = entry.get("args")
        if not isinstance(args, list) or len(args) != m + 1:
            raise SerializationError(
                f"{path}.args: expected {m} wedge blocks plus one basis name")
        sign = 1
        widx: list[int] = []
        for bno, block in enumerate(args[:m]):
            if (not isinstance(block, list)
                    or len(block) != g.n - 1
                    or not all(isinstance(x, str) for x in block)):
                raise SerializationError(
                    f"{path}.args[{bno}]: expected {g.n - 1} basis names")
            try:
                raw = tuple(index[x] for x in block)
            except KeyError:
                raise SerializationError(
                    f"{path}.args[{bno}]: unknown basis name") from None
            cz = canonicalize_word(raw, g.space.parities)
            if cz is None:
                raise SerializationError(
                    f"{path}.args[{bno}]: repeated even name, block is zero")
            sign *= cz[0]
            widx.append(wedge.index(cz[1]))
        zname = args[m]
        if not isinstance(zname, str) or zname not in index:
            raise SerializationError(f"{path}.args[{m}]: unknown basis name")
        z = index[zname]
        t = _target_index(rho.target, entry.get("target"))
        c = _scalar(f"{path}.value", entry.get("value"))
        in_par = g.space.parities[z]
        for w in widx:
            in_par ^= wedge.parities[w]
        if (in_par ^ rho.target.parities[t]) != parity:
            raise SerializationError(
                f"{path}: entry parity does not match the declared parity")
        key = tuple(widx) + (z, t)
        cur = coeffs.get(key, 0) + sign * c
        if cur == 0:
            coeffs.pop(key, None)
        else:
            coeffs[key] = cur
    return Cochain(g, rho, m, parity, coeffs)


def cochain_dumps(f: Cochain) -> str:
    return canonical_dumps(cochain_to_data(f))


def cochain_loads(text: str, rho: Representation) -> Cochain:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid JSON: {exc}") from None
    return cochain_from_data(data, rho)
