"""Plain-text model persistence.

Format (one model per file)::

    moodpipe-svm v1
    kernel rbf gamma=<g>                      # or: linear / polynomial degree=<d> coef0=<c>
    scaler mean=<csv floats> scale=<csv floats>
    pair <classA> <classB> bias=<b> svs=<n> converged=<0|1>
    <signed alpha> <feature values...>        # n lines
    pair <classA> <classB> absent
    end

Floats are written with 17 significant digits so a load(save(model)) round
trip reproduces every prediction bit-exactly.
"""

from __future__ import annotations

import os

import numpy as np

from ..errors import ModelFormatError
from .kernels import KernelSpec
from .multiclass import CLASS_PAIRS, MultiClassSvmModel
from .scaling import Scaler
from .smo import BinarySvmModel

HEADER = "moodpipe-svm v1"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_list(values) -> str:
    return ",".join(_fmt(v) for v in values)


def save_model(model: MultiClassSvmModel, path: str | os.PathLike) -> None:
    lines = [HEADER]
    k = model.kernel
    if k.kind == "linear":
        lines.append("kernel linear")
    elif k.kind == "polynomial":
        lines.append(f"kernel polynomial degree={k.degree} coef0={_fmt(k.coef0)}")
    else:
        lines.append(f"kernel rbf gamma={_fmt(k.gamma)}")
    lines.append(f"scaler mean={_fmt_list(model.scaler.mean)} scale={_fmt_list(model.scaler.scale)}")
    for pair in CLASS_PAIRS:
        m = model.pairs.get(pair)
        if m is None:
            lines.append(f"pair {pair[0]} {pair[1]} absent")
            continue
        lines.append(
            f"pair {pair[0]} {pair[1]} bias={_fmt(m.bias)} svs={len(m.alphas)} "
            f"converged={1 if m.converged else 0}"
        )
        for alpha, sv in zip(m.alphas, m.support_vectors):
            lines.append(_fmt(alpha) + " " + " ".join(_fmt(v) for v in sv))
    lines.append("end")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_kv(tokens: list[str]) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ModelFormatError(f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        out[key] = val
    return out


def load_model(path: str | os.PathLike) -> MultiClassSvmModel:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != HEADER:
        raise ModelFormatError(f"bad header, expected {HEADER!r}")

    def need(prefix: str, line: str) -> list[str]:
        parts = line.split()
        if not parts or parts[0] != prefix:
            raise ModelFormatError(f"expected {prefix!r} line, got {line!r}")
        return parts[1:]

    ktoks = need("kernel", lines[1])
    kind = ktoks[0]
    kv = _parse_kv(ktoks[1:])
    if kind == "linear":
        kernel = KernelSpec(kind="linear")
    elif kind == "polynomial":
        kernel = KernelSpec(kind="polynomial", degree=int(kv["degree"]), coef0=float(kv["coef0"]))
    elif kind == "rbf":
        kernel = KernelSpec(kind="rbf", gamma=float(kv["gamma"]))
    else:
        raise ModelFormatError(f"unknown kernel kind {kind!r}")

    sv = _parse_kv(need("scaler", lines[2]))
    mean = np.array([float(v) for v in sv["mean"].split(",")])
    scale = np.array([float(v) for v in sv["scale"].split(",")])
    if mean.shape != scale.shape:
        raise ModelFormatError("scaler mean and scale lengths differ")
    scaler = Scaler(mean, scale)

    pairs: dict[tuple[str, str], BinarySvmModel | None] = {}
    i = 3
    while i < len(lines) and lines[i] != "end":
        toks = lines[i].split()
        if toks[0] != "pair" or len(toks) < 4:
            raise ModelFormatError(f"expected pair line, got {lines[i]!r}")
        pair = (toks[1], toks[2])
        if pair not in CLASS_PAIRS:
            raise ModelFormatError(f"unknown class pair {pair}")
        if toks[3] == "absent":
            pairs[pair] = None
            i += 1
            continue
        kv = _parse_kv(toks[3:])
        n_sv = int(kv["svs"])
        rows = lines[i + 1 : i + 1 + n_sv]
        if len(rows) != n_sv:
            raise ModelFormatError(f"truncated SV block for pair {pair}")
        alphas = np.empty(n_sv)
        vectors = np.empty((n_sv, mean.size))
        for j, row in enumerate(rows):
            try:
                vals = [float(v) for v in row.split()]
            except ValueError:
                raise ModelFormatError(f"unparsable SV row {row!r}") from None
            if len(vals) != mean.size + 1:
                raise ModelFormatError(f"SV row has {len(vals)} values, expected {mean.size + 1}")
            alphas[j] = vals[0]
            vectors[j] = vals[1:]
        pairs[pair] = BinarySvmModel(
            support_vectors=vectors,
            alphas=alphas,
            bias=float(kv["bias"]),
            kernel=kernel,
            converged=kv.get("converged", "1") == "1",
        )
        i += 1 + n_sv
    if i >= len(lines) or lines[i] != "end":
        raise ModelFormatError("missing end marker")
    for pair in CLASS_PAIRS:
        pairs.setdefault(pair, None)
    return MultiClassSvmModel(scaler, pairs, kernel, mean.size)
