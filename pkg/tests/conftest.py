import numpy as np

from modent import PureState, compose_layout


def rand_amplitude_pair(rng):
    """Haar-random normalized (alpha, beta)."""
    v = rng.normal(size=4)
    alpha = v[0] + 1j * v[1]
    beta = v[2] + 1j * v[3]
    n = np.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    return alpha / n, beta / n


def rand_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_pure_vector(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def rand_density_matrix(rng, n, rank=None):
    """Random mixed state from a Ginibre factor."""
    k = rank or n
    g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    m = g @ g.conj().T
    return m / np.trace(m)


def rand_pure_state(rng, layout) -> PureState:
    return PureState(layout, rand_pure_vector(rng, layout.dim))


def rand_hermitian(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (z + z.conj().T)


def single_qubit_layout(label="q"):
    from modent import TwoLevel
    return compose_layout([(label, TwoLevel)])
