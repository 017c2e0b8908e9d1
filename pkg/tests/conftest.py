import numpy as np
import pytest

from crownkit import build_handle

ACCEPTANCE_SPACES = ("sl2r", "su21", "sp4r")


@pytest.fixture(scope="session")
def handles():
    return {name: build_handle(name) for name in ACCEPTANCE_SPACES}


@pytest.fixture(scope="session")
def sl2r(handles):
    return handles["sl2r"]


@pytest.fixture(scope="session")
def su21(handles):
    return handles["su21"]


@pytest.fixture(scope="session")
def sp4r(handles):
    return handles["sp4r"]


def brute_force_killing(matrices):
    """Independent Killing-form oracle: expand brackets over the given basis by
    least squares and trace products of the resulting adjoint matrices."""
    n = len(matrices)
    vecs = np.stack(
        [np.concatenate([m.real.ravel(), m.imag.ravel()]) for m in matrices], axis=1
    )

    def coords(m):
        c, *_ = np.linalg.lstsq(vecs, np.concatenate([m.real.ravel(), m.imag.ravel()]),
                                rcond=None)
        return c

    ad = np.empty((n, n, n))
    for i in range(n):
        for j in range(n):
            ad[i, :, j] = coords(matrices[i] @ matrices[j] - matrices[j] @ matrices[i])
    return np.einsum("ikl,jlk->ij", ad, ad), ad
