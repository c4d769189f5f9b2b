"""Independent oracle for the classical lattice expansion fixtures.

Exact law by numpy convolution; expansion with hand-written q_1, q_2.
"""
from fractions import Fraction
import math

import numpy as np

PMF = {0: Fraction(1, 5), 1: Fraction(1, 2), 2: Fraction(3, 10)}
NS = [64, 128, 256, 512]


def cumulants(pmf):
    mu = sum(k * p for k, p in pmf.items())
    c = {j: sum((k - mu) ** j * p for k, p in pmf.items()) for j in (2, 3, 4)}
    return mu, c[2], c[3], c[4] - 3 * c[2] ** 2


def he(j, x):
    return {3: x**3 - 3 * x, 4: x**4 - 6 * x**2 + 3, 6: x**6 - 15 * x**4 + 45 * x**2 - 15}[j]


def main():
    mu, var, k3, k4 = (float(v) for v in cumulants(PMF))
    s = math.sqrt(var)
    step = np.array([float(PMF[k]) for k in sorted(PMF)])
    for n in NS:
        law = np.array([1.0])
        for _ in range(n):
            law = np.convolve(law, step)
        k = np.arange(len(law), dtype=float)
        x = (k - n * mu) / (s * math.sqrt(n))
        base = np.exp(-x * x / 2) / (s * math.sqrt(2 * math.pi * n))
        q1 = k3 / (6 * s**3) * he(3, x)
        q2 = k3**2 / (72 * s**6) * he(6, x) + k4 / (24 * s**4) * he(4, x)
        terms = [base, base * q1 / math.sqrt(n), base * q2 / n]
        approx = np.zeros_like(law)
        for r in range(3):
            approx = approx + terms[r]
            e = n ** ((r + 1) / 2) * np.max(np.abs(law - approx))
            print(f"classical.e{r}.{n} = {e:.6e}")


if __name__ == "__main__":
    main()
