import numpy as np
import pytest

import wavedg as w
from wavedg.scheme import State


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def constant_coupling_problem(dim=1, alpha=1.0):
    """beta = 1, f = 1: the coupling is constant at the quadrature nodes."""
    if dim == 1:
        beta = lambda x: np.ones_like(np.asarray(x, dtype=float))
        zero = lambda x: np.zeros_like(np.asarray(x, dtype=float), dtype=complex)
    else:
        beta = lambda x, y: np.ones_like(np.asarray(x, dtype=float))
        zero = lambda x, y: np.zeros_like(np.asarray(x, dtype=float), dtype=complex)
    return w.ProblemSpec(alpha=alpha, beta=beta,
                         nonlinearity=w.make_nonlinearity("constant"),
                         u0=zero, u1=zero, bc="periodic", dim=dim)


def random_state(rng, n_elements, dim_q, dim_s, t=0.0, scale=1.0):
    u = scale * (rng.standard_normal((n_elements, dim_q))
                 + 1j * rng.standard_normal((n_elements, dim_q)))
    v = scale * (rng.standard_normal((n_elements, dim_s))
                 + 1j * rng.standard_normal((n_elements, dim_s)))
    return State(t, u, v)
