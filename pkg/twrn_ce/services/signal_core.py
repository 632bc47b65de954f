# Noyau numérique : convolution, matrices de Toeplitz, moindres carrés
import numpy as np
import scipy.linalg as spla

from ..core.exceptions import InvalidArgumentError, RankDeficiencyError
from ..schemas.signal import DOMINANCE_EPS, SupportSet

# Seuil relatif de rang sur la diagonale de R
RANK_RTOL = 1e-10


def _as_vector(v, name: str) -> np.ndarray:
    array = np.asarray(v, dtype=np.complex128)
    if array.ndim != 1:
        raise InvalidArgumentError(f"{name} doit être un vecteur")
    if not np.all(np.isfinite(array)):
        raise InvalidArgumentError(f"{name} contient des valeurs non finies")
    return array


def convolve(a, b) -> np.ndarray:
    """Convolution discrète directe, longueur len(a) + len(b) - 1"""
    a = _as_vector(a, "a")
    b = _as_vector(b, "b")
    if a.size == 0 or b.size == 0:
        raise InvalidArgumentError("convolution d'un vecteur vide")
    return np.convolve(a, b)


def build_training_matrix(x, L: int) -> np.ndarray:
    """Matrice de Toeplitz (Ñ x (2L-1)) telle que matrice·v == convolve(x, v)"""
    x = _as_vector(x, "x")
    if x.size < 1:
        raise InvalidArgumentError("séquence d'apprentissage vide")
    if L < 1:
        raise InvalidArgumentError("L doit être >= 1")
    pad = np.zeros(2 * L - 2, dtype=np.complex128)
    first_column = np.concatenate((x, pad))
    first_row = np.concatenate(([x[0]], pad))
    return spla.toeplitz(first_column, first_row)


def least_squares(A, b) -> np.ndarray:
    """argmin ||b - A z||, par QR avec pivotage de colonnes"""
    A = np.asarray(A, dtype=np.complex128)
    b = _as_vector(b, "b")
    if A.ndim != 2:
        raise InvalidArgumentError("A doit être une matrice")
    rows, cols = A.shape
    if rows != b.size:
        raise InvalidArgumentError(f"A a {rows} lignes mais b est de longueur {b.size}")
    if rows < cols:
        raise InvalidArgumentError(f"système sous-déterminé ({rows} x {cols})")
    if cols == 0:
        return np.zeros(0, dtype=np.complex128)

    Q, R, perm = spla.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.count_nonzero(diag > RANK_RTOL * diag[0])) if diag[0] > 0 else 0
    if rank < cols:
        raise RankDeficiencyError(rank, cols)

    z = np.empty(cols, dtype=np.complex128)
    z[perm] = spla.solve_triangular(R, Q.conj().T @ b)
    return z


def least_squares_on_support(A, b, S: SupportSet) -> np.ndarray:
    """Solution pleine dimension, nulle hors de S, LS sur les colonnes de S"""
    A = np.asarray(A, dtype=np.complex128)
    if S.dim != A.shape[1]:
        raise InvalidArgumentError(f"support de dimension {S.dim} pour {A.shape[1]} colonnes")
    if len(S) > A.shape[0]:
        raise InvalidArgumentError(f"support de taille {len(S)} pour {A.shape[0]} lignes")
    z = np.zeros(A.shape[1], dtype=np.complex128)
    if len(S) == 0:
        return z
    columns = S.as_array()
    z[columns] = least_squares(A[:, columns], b)
    return z


def top_k_support(v, k: int) -> SupportSet:
    """Indices des k plus grands modules (égalités : plus petit indice), module > eps"""
    v = _as_vector(v, "v")
    if not 0 <= k <= v.size:
        raise InvalidArgumentError(f"k={k} hors de [0, {v.size}]")
    magnitudes = np.abs(v)
    order = np.argsort(-magnitudes, kind="stable")[:k]
    kept = order[magnitudes[order] > DOMINANCE_EPS]
    return SupportSet.from_indices(kept, v.size)


def expected_ls_error(X, noise_var: float, S: SupportSet = None) -> float:
    """Erreur LS attendue : noise_var · trace((X_S^H X_S)^-1)"""
    X = np.asarray(X, dtype=np.complex128)
    if S is not None:
        X = X[:, S.as_array()]
    if X.shape[1] == 0:
        return 0.0
    R = spla.qr(X, mode="r")[0][: X.shape[1]]
    R_inv = spla.solve_triangular(R, np.eye(X.shape[1], dtype=np.complex128))
    return float(noise_var * np.sum(np.abs(R_inv) ** 2))
