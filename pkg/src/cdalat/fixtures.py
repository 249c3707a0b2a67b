"""Registry of the shipped algebra fixtures.

Extensions are data, not computation: each entry carries its minimal
polynomial, automorphism image, ring-of-integers basis over the center, and
a designated complex embedding root.  The three "formula fixtures" carry
only (relative discriminant, gamma, degree) plus local index data and feed
the closed-form discriminant checks; no element arithmetic is built on them.

The registry file can be overridden (CDALAT_FIXTURES env var or explicit
path) which is how the tamper-detection test drives a negative control.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .algebra import AlgebraDescriptor
from .fields import FieldExtension
from .scalars import QuadScalar, center_by_tag


def _scalar(center, pair):
    return QuadScalar.from_rationals(center, Fraction(pair[0]), Fraction(pair[1]))


def _refine_root(minpoly_c, hint):
    """A few Newton steps pin the stored root hint to full double precision."""
    z = complex(*hint)
    for _ in range(40):
        f = 0j
        df = 0j
        for c in reversed(minpoly_c):
            df = df * z + f
            f = f * z + c
        if df == 0:
            break
        step = f / df
        z -= step
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


@dataclass
class AlgebraFixture:
    name: str
    algebra: AlgebraDescriptor
    division_primes: tuple
    compressed_prime: object  # QuadScalar or None

    @property
    def extension(self):
        return self.algebra.extension


@dataclass
class FormulaFixture:
    name: str
    center: object
    degree: int
    rel_disc: QuadScalar
    gamma: QuadScalar
    local_data: tuple  # ((prime, m), ...)


class FixtureRegistry:
    def __init__(self, path=None):
        if path is None:
            path = os.environ.get("CDALAT_FIXTURES")
        if path is None:
            raw = resources.files("cdalat").joinpath("data/fixtures.json").read_text()
        else:
            with open(path) as fh:
                raw = fh.read()
        doc = json.loads(raw)
        self.version = doc["version"]
        self.algebras = {}
        self.formula = {}
        for entry in doc["algebras"]:
            fx = self._load_algebra(entry)
            self.algebras[fx.name] = fx
        for entry in doc["formula_fixtures"]:
            center = center_by_tag(entry["center"])
            self.formula[entry["name"]] = FormulaFixture(
                name=entry["name"],
                center=center,
                degree=entry["degree"],
                rel_disc=_scalar(center, entry["rel_disc"]),
                gamma=_scalar(center, entry["gamma"]),
                local_data=tuple(
                    (_scalar(center, d["prime"]), d["m"]) for d in entry["local_data"]
                ),
            )

    def _load_algebra(self, entry):
        center = center_by_tag(entry["center"])
        n = entry["degree"]
        minpoly = [_scalar(center, c) for c in entry["minpoly"]]
        sigma = [_scalar(center, c) for c in entry["sigma_image"]]
        if entry["oe_basis"] == "power":
            oe = []
            for j in range(n):
                row = [_scalar(center, ["0", "0"])] * n
                row[j] = _scalar(center, ["1", "0"])
                oe.append(row)
        else:
            oe = [[_scalar(center, c) for c in row] for row in entry["oe_basis"]]
        root = _refine_root([c.to_complex() for c in minpoly], entry["embedding_root_hint"])
        ext = FieldExtension(
            name=entry["name"],
            center=center,
            degree=n,
            minpoly=minpoly,
            sigma_image_coeffs=sigma,
            embedding_root=root,
            oe_basis_coeffs=oe,
        )
        gamma = _scalar(center, entry["gamma"])
        alg = AlgebraDescriptor(entry["name"], ext, gamma)
        comp = entry.get("compressed_prime")
        return AlgebraFixture(
            name=entry["name"],
            algebra=alg,
            division_primes=tuple(_scalar(center, p) for p in entry["division_primes"]),
            compressed_prime=_scalar(center, comp) if comp else None,
        )

    def names(self):
        return sorted(self.algebras) + sorted(self.formula)

    def algebra(self, name) -> AlgebraFixture:
        if name not in self.algebras:
            raise KeyError(f"unknown algebra fixture {name!r}; have {sorted(self.algebras)}")
        return self.algebras[name]

    def formula_fixture(self, name) -> FormulaFixture:
        if name not in self.formula:
            raise KeyError(f"unknown formula fixture {name!r}")
        return self.formula[name]


_default = None


def default_registry() -> FixtureRegistry:
    global _default
    if _default is None:
        _default = FixtureRegistry()
    return _default
