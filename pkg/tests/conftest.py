"""Shared builders for the test suite."""

import numpy as np
import pytest

from mcifc.info_theory import DmcChannel


def random_channel(rng, x1=2, x2=2, outputs=(("Y1", 2), ("Z1", 2)), alpha=1.0):
    """Channel with iid Dirichlet transition rows."""
    sizes = tuple(k for _, k in outputs)
    cells = int(np.prod(sizes))
    probs = rng.dirichlet(np.full(cells, alpha), size=(x1, x2)).reshape(
        (x1, x2) + sizes
    )
    return DmcChannel(x1, x2, tuple(outputs), probs)


def shared_law_channel(rng, n_primary=2, x1=2, x2=2, card=2, enhance_first=False):
    """All outputs draw from one conditional law (iid copies), which provably
    satisfies both very-strong inequalities for every input distribution.
    With enhance_first, Y1 additionally sees a noisy function of (X1, X2)."""
    base = rng.dirichlet(np.ones(card), size=(x1, x2))
    outputs = []
    laws = []
    for j in range(n_primary):
        outputs.append((f"Y{j + 1}", card))
        laws.append(base)
    outputs.append(("Z1", card))
    laws.append(base)
    if enhance_first:
        extra = rng.dirichlet(np.ones(2), size=(x1, x2))
        outputs = [("Y1", card * 2)] + outputs[1:]
        law1 = np.einsum("abi,abj->abij", base, extra).reshape(x1, x2, card * 2)
        laws[0] = law1
    probs = None
    for law in laws:
        probs = law if probs is None else np.einsum(
            "ab...,abk->ab...k", probs, law
        )
    return DmcChannel(x1, x2, tuple(outputs), probs)


def degraded_pair_channel(rng, x1=2, x2=2, y_card=3, z_card=3):
    """Y1 gets a base law, Z a garbling of it, Y2 a copy of Z's law: provably
    very strong for every input distribution, while Y1 can strictly beat Z."""
    base = rng.dirichlet(np.ones(y_card), size=(x1, x2))
    garble = rng.dirichlet(np.ones(z_card), size=y_card)
    zlaw = base @ garble
    probs = np.einsum("abi,abj,abk->abijk", base, zlaw, zlaw)
    return DmcChannel(
        x1, x2, (("Y1", y_card), ("Y2", z_card), ("Z1", z_card)), probs
    )


def weak_family_channel(rng, x1=2, x2=2, card=3):
    """Every Y_j is a garbling of Z, so the weak-interference inequality holds
    for every joint by data processing."""
    zlaw = rng.dirichlet(np.ones(card), size=(x1, x2))
    g1 = rng.dirichlet(np.ones(card), size=card)
    g2 = rng.dirichlet(np.ones(card), size=card)
    y1 = zlaw @ g1
    y2 = zlaw @ g2
    probs = np.einsum("abi,abj,abk->abijk", y1, y2, zlaw)
    return DmcChannel(x1, x2, (("Y1", card), ("Y2", card), ("Z1", card)), probs)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
