import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nkcontact.contact_structure import ContactData  # noqa: E402
from nkcontact.riemann_engine import FrameSpec, jacobi_violation  # noqa: E402
from nkcontact.tensor_core import Metric, Tensor, zeros  # noqa: E402
from nkcontact.workbench.fixtures import builtin_fixture  # noqa: E402


def make_frame(m, brackets, contact=None, metric=None):
    """``brackets`` maps ``(i, j)`` (1-based, i<j) to ``{k: value}``."""
    c = zeros((m, m, m))
    for (i, j), comps in brackets.items():
        for k, v in comps.items():
            c[i - 1, j - 1, k - 1] = Fraction(v)
            c[j - 1, i - 1, k - 1] = -Fraction(v)
    g = Metric.identity(m) if metric is None else Metric(metric)
    cd = None
    if contact is not None:
        xi, phimap = contact
        phi = zeros((m, m))
        for i, comps in phimap.items():
            for k, v in comps.items():
                phi[i - 1, k - 1] = Fraction(v)
        cd = ContactData(Tensor.basis_vector(m, xi), Tensor(phi, ("l", "u")), g)
    return FrameSpec(m, c, g, cd)


def random_metric(rng, m):
    """Positive-definite ``L L^T`` with unit lower-triangular integer ``L``."""
    L = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        L[i][i] = Fraction(rng.choice([1, 1, 2]))
        for j in range(i):
            L[i][j] = Fraction(rng.randint(-1, 1))
    return [[sum((L[i][a] * L[j][a] for a in range(m)), Fraction(0)) for j in range(m)] for i in range(m)]


def random_frames(count, seed=20261015):
    """Jacobi-valid frames of dimension 3..6 with brackets in {-2..2}.

    Half are sparse random tables filtered by Jacobi; half come from
    semidirect products ``[e1, e_i] = sum_j D_ij e_j`` which satisfy Jacobi
    automatically, so the sample is not dominated by near-abelian frames.
    """
    rng = random.Random(seed)
    frames = []
    while len(frames) < count:
        m = rng.randint(3, 6)
        c = zeros((m, m, m))
        if len(frames) % 2:
            for i in range(1, m):
                for j in range(1, m):
                    c[0, i, j] = Fraction(rng.randint(-2, 2))
                    c[i, 0, j] = -c[0, i, j]
        else:
            for i in range(m):
                for j in range(i + 1, m):
                    for k in range(m):
                        if rng.random() < 0.15:
                            c[i, j, k] = Fraction(rng.randint(-2, 2))
                            c[j, i, k] = -c[i, j, k]
            if jacobi_violation(c) is not None:
                continue
        metric = Metric.identity(m) if rng.random() < 0.4 else Metric(random_metric(rng, m))
        frames.append(FrameSpec(m, c, metric))
    return frames


@pytest.fixture(scope="session")
def ex41():
    return builtin_fixture("example-4.1")


@pytest.fixture(scope="session")
def ex42():
    return builtin_fixture("example-4.2", {"lambda": Fraction(1)})


@pytest.fixture(scope="session")
def su2():
    return builtin_fixture("su2-sasakian")


@pytest.fixture(scope="session")
def pfs():
    return builtin_fixture("product-flat-sphere")


def nested(t):
    return np.asarray(t, dtype=object)
