"""Symmetric Toeplitz products in O(n log n) by circulant embedding."""
import numpy as np


class SymmetricToeplitz:
    """Parsimonious symmetric Toeplitz matrix T[j, k] = top[|j - k|].

    The matrix is embedded in a circulant of size 2n so that products are
    one forward and one inverse real FFT.
    """

    def __init__(self, top: np.ndarray):
        """
        Args:
            top: First row t_0..t_{n-1}, one-dimensional

        Raises:
            ValueError: If ``top`` is empty or not one-dimensional
        """
        top = np.asarray(top, dtype=float)
        if top.ndim != 1:
            raise ValueError(f"top shape {top.shape} is not 1D")
        if top.size == 0:
            raise ValueError("top is empty")

        n = top.size
        circ = np.zeros(2 * n)
        circ[:n] = top
        circ[n + 1:] = top[1:][::-1]
        self._circ_fft = np.fft.rfft(circ)
        self.shape = (n, n)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Return T @ x."""
        x = np.asarray(x, dtype=float)
        n = self.shape[0]
        if x.shape != (n,):
            raise ValueError(f"vector shape {x.shape} does not match {self.shape}")
        x_fft = np.fft.rfft(x, n=2 * n)
        return np.fft.irfft(self._circ_fft * x_fft, n=2 * n)[:n]

    def quadratic_form(self, x: np.ndarray) -> float:
        """Return x^T T x."""
        x = np.asarray(x, dtype=float)
        return float(np.dot(x, self.matvec(x)))


def trapezoid_weights(n_points: int, step: float) -> np.ndarray:
    """Composite trapezoid weights for ``n_points`` equispaced nodes."""
    weights = np.full(n_points, step)
    weights[0] = weights[-1] = 0.5 * step
    return weights
