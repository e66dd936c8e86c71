"""Shared fixtures and brute-force oracles.

The oracles follow the definitions literally (tuples of members, cylinder
pairs, transversals) and share no code with the library beyond SetFamily.
"""

from __future__ import annotations

import itertools

import pytest
from hypothesis import HealthCheck, settings

from satlab import kernels
from satlab.family import SetFamily

# the backend fixture only swaps a module attribute, so reuse across examples is safe
settings.register_profile("satlab", deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("satlab")


@pytest.fixture(params=[k.NAME for k in kernels.available()])
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    kern = {k.NAME: k for k in kernels.available()}[request.param]
    monkeypatch.setattr(kernels, "active", kern)
    return kern


requires_compiled = pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")


def members(f: SetFamily) -> list[int]:
    return [m for m in range(1 << f.n) if f.bits >> m & 1]


def oracle_has_k_disjoint(f: SetFamily, k: int) -> bool:
    """Some k-tuple of members (repetition allowed) is pairwise disjoint."""
    ms = members(f)
    for combo in itertools.combinations_with_replacement(ms, k):
        if all(a & b == 0 for a, b in itertools.combinations(combo, 2)):
            return True
    return False


def oracle_saturated(f: SetFamily, s: int) -> bool:
    if oracle_has_k_disjoint(f, s):
        return False
    for a in range(1 << f.n):
        if not f.bits >> a & 1 and not oracle_has_k_disjoint(SetFamily(f.n, f.bits | 1 << a), s):
            return False
    return True


def oracle_cylinder_inside(f: SetFamily, index: int, base: int) -> bool:
    return all(f.bits >> m & 1 for m in range(1 << f.n) if (m ^ base) & index == 0)


def oracle_box(a: SetFamily, b: SetFamily) -> SetFamily:
    """S such that disjoint I, J exist with C(I,S) inside A and C(J,S) inside B."""
    n = a.n
    full = (1 << n) - 1
    bits = 0
    for s in range(1 << n):
        for i in range(1 << n):
            if not oracle_cylinder_inside(a, i, s):
                continue
            if oracle_cylinder_inside(b, full ^ i, s):
                bits |= 1 << s
                break
    return SetFamily(n, bits)


def oracle_box_increasing(a: SetFamily, b: SetFamily) -> SetFamily:
    n = a.n
    bits = 0
    for s in range(1 << n):
        if any(x & y == 0 and (x | y) & ~s == 0 for x in members(a) for y in members(b)):
            bits |= 1 << s
    return SetFamily(n, bits)


def oracle_has_transversal(families, within: int) -> bool:
    for combo in itertools.product(*[members(f) for f in families]):
        used = 0
        ok = True
        for m in combo:
            if m & used or m & ~within:
                ok = False
                break
            used |= m
        if ok:
            return True
    return False


def oracle_cross_saturated(families) -> bool:
    n = families[0].n
    full = (1 << n) - 1
    if oracle_has_transversal(families, full):
        return False
    for i, f in enumerate(families):
        for a in range(1 << n):
            if f.bits >> a & 1:
                continue
            grown = list(families)
            grown[i] = SetFamily(n, f.bits | 1 << a)
            if not oracle_has_transversal(grown, full):
                return False
    return True


def all_families(n: int):
    for bits in range(1 << (1 << n)):
        yield SetFamily(n, bits)


def increasing_families(n: int):
    for f in all_families(n):
        if all(f.bits >> (m | 1 << i) & 1 for m in members(f) for i in range(n)):
            yield f
