"""Invariant profiles and invariant-based inequivalence tests.

Only the differential and absolute Walsh histograms go into the CCZ
fingerprint.  Boomerang uniformity survives affine equivalence and inversion
but not CCZ equivalence, so it is hashed separately into ``affine_fingerprint``.
A matching profile never proves equivalence; :func:`distinguish` then answers
``Unknown``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import spectra
from .errors import ParameterError
from .funcrep import LutFunction, algebraic_degree, is_permutation


def _digest(payload) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class InvariantProfile:
    n: int
    walsh_abs_histogram: dict[int, int]
    differential_histogram: dict[int, int]
    degree: int
    beta: int | None

    @property
    def fingerprint(self) -> str:
        return _digest({"delta": _keys(self.differential_histogram), "walsh": _keys(self.walsh_abs_histogram)})

    @property
    def affine_fingerprint(self) -> str:
        return _digest({"ccz": self.fingerprint, "beta": self.beta})

    def ccz_fields(self) -> dict[str, dict[int, int]]:
        return {"differential_histogram": self.differential_histogram,
                "walsh_abs_histogram": self.walsh_abs_histogram}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "fingerprint": self.fingerprint,
            "degree": self.degree,
            "delta_hist": _keys(self.differential_histogram),
            "walsh_abs_hist": _keys(self.walsh_abs_histogram),
            "beta": self.beta,
            "affine_fingerprint": self.affine_fingerprint,
        }


def _keys(h: dict[int, int]) -> dict[str, int]:
    return {str(k): int(v) for k, v in sorted(h.items())}


def profile(lut: LutFunction, threads: int = 1, with_beta: bool = True) -> InvariantProfile:
    d = spectra.ddt(lut, threads=threads)
    w = spectra.walsh(lut, threads=threads)
    beta = None
    if with_beta and is_permutation(lut):
        beta = spectra.bct(lut, threads=threads).uniformity
    return InvariantProfile(lut.n, w.abs_histogram(), d.histogram, algebraic_degree(lut), beta)


@dataclass(frozen=True)
class Inequivalent:
    witness_field: str

    def __str__(self) -> str:
        return f"inequivalent ({self.witness_field} differs)"


@dataclass(frozen=True)
class Unknown:
    def __str__(self) -> str:
        return "unknown (all invariants agree)"


def distinguish(a: LutFunction | InvariantProfile, b: LutFunction | InvariantProfile,
                threads: int = 1) -> Inequivalent | Unknown:
    pa = a if isinstance(a, InvariantProfile) else profile(a, threads, with_beta=False)
    pb = b if isinstance(b, InvariantProfile) else profile(b, threads, with_beta=False)
    if pa.n != pb.n:
        raise ParameterError(f"cannot compare functions on GF(2^{pa.n}) and GF(2^{pb.n})")
    fa, fb = pa.ccz_fields(), pb.ccz_fields()
    for name in ("differential_histogram", "walsh_abs_histogram"):
        if fa[name] != fb[name]:
            return Inequivalent(name)
    return Unknown()


@dataclass
class Classification:
    classes: list[list[int]]
    fingerprints: list[str]

    @property
    def count(self) -> int:
        """Lower bound on the number of CCZ classes among the inputs."""
        return len(self.classes)


def classify(items: list[LutFunction | InvariantProfile], threads: int = 1) -> Classification:
    """Group by CCZ fingerprint, classes ordered by first occurrence."""
    profiles = [p if isinstance(p, InvariantProfile) else profile(p, threads, with_beta=False) for p in items]
    ns = {p.n for p in profiles}
    if len(ns) > 1:
        raise ParameterError(f"classify needs a common n, got {sorted(ns)}")
    groups: dict[str, list[int]] = {}
    for i, p in enumerate(profiles):
        groups.setdefault(p.fingerprint, []).append(i)
    return Classification(list(groups.values()), list(groups))
