"""Reference computations that avoid the code paths under test.

Nothing here calls into the SVD/seesaw machinery of the package; these use
closed forms, exact rational arithmetic or plain enumeration.
"""

import itertools
import math

import numpy as np
import sympy


def max_product_overlap_2x2(v):
    """Largest |<a (x) b|v>|^2 over product states of two qubits, in closed form.

    Equals the largest eigenvalue of V V^H for the 2x2 coefficient matrix V.
    """
    V = np.asarray(v).reshape(2, 2)
    G = V @ V.conj().T
    tr = G[0, 0].real + G[1, 1].real
    det = (G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0]).real
    return (tr + math.sqrt(max(tr * tr - 4 * det, 0.0))) / 2


def is_product_2x2(v, tol=1e-9):
    """Two-qubit vector is a product iff its coefficient matrix is singular."""
    V = np.asarray(v).reshape(2, 2)
    return abs(V[0, 0] * V[1, 1] - V[0, 1] * V[1, 0]) < tol


def vandermonde_det(xs):
    return np.prod([xs[j] - xs[i] for i, j in itertools.combinations(range(len(xs)), 2)])


def exact_reciprocal(rows):
    """Reciprocal vectors (unnormalized) of exact sympy rows: conj of rows of inv(M^T)."""
    M = sympy.Matrix(rows)
    R = M.T.inv()
    return [sympy.Matrix(R.row(k)).conjugate() for k in range(R.rows)]


def gram_det(vectors):
    V = np.array(vectors)
    return np.linalg.det(V.conj() @ V.T)
