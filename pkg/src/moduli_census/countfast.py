"""Vectorized affine character sums for curves over prime fields.

For a prime p and extension degree r, elements of F_{p^r} are numbered by
their coordinate digits base p.  We pre-tabulate the digit rows of x^i for
every x (one table per (p, r), grown to the needed degree) together with
the quadratic-character table, so sum_x chi(F(x)) for a curve with prime
coefficients is one small integer tensordot per extension.
"""

from __future__ import annotations

import numpy as np

from .ffield import extend_field, make_field


class _FieldTable:
    __slots__ = ("p", "r", "Q", "pvec", "chi", "powd")

    def __init__(self, p: int, r: int):
        self.p = p
        self.r = r
        K = extend_field(make_field(p), r)
        Q = K.order
        self.Q = Q
        self.pvec = np.array([p**j for j in range(r)], dtype=np.int64)
        chi = np.zeros(Q, dtype=np.int8)
        raws = [K.raw_of_index(i) for i in range(Q)]
        for i in range(1, Q):
            chi[K.index_of_raw(K.mul_raw(raws[i], raws[i]))] = 1
        chi[1:][chi[1:] == 0] = -1
        self.chi = chi
        if r == 1:
            digits = np.arange(Q, dtype=np.uint8).reshape(Q, 1)
        else:
            digits = np.empty((Q, r), dtype=np.uint8)
            idx = np.arange(Q)
            for j in range(r):
                digits[:, j] = (idx // p**j) % p
        one = np.zeros((Q, r), dtype=np.uint8)
        one[:, 0] = 1
        self.powd = [one, digits.copy()]
        self._grow_to(2, K, raws)

    def _grow_to(self, deg: int, K=None, raws=None) -> None:
        if len(self.powd) > deg:
            return
        if K is None:
            K = extend_field(make_field(self.p), self.r)
            raws = [K.raw_of_index(i) for i in range(self.Q)]
        cur = [K.raw_of_index(int(row @ self.pvec)) for row in self.powd[-1]]
        while len(self.powd) <= deg:
            cur = [K.mul_raw(c, x) for c, x in zip(cur, raws)]
            arr = np.empty((self.Q, self.r), dtype=np.uint8)
            for i, c in enumerate(cur):
                if self.r == 1:
                    arr[i, 0] = c
                else:
                    arr[i] = c
            self.powd.append(arr)


_tables: dict[tuple[int, int], _FieldTable] = {}


def field_table(p: int, r: int, deg: int) -> _FieldTable:
    tab = _tables.get((p, r))
    if tab is None:
        tab = _FieldTable(p, r)
        _tables[(p, r)] = tab
    tab._grow_to(deg)
    return tab


def affine_chi_sum(p: int, r: int, coeffs: list[int]) -> int:
    """sum over x in F_{p^r} of chi(F(x)) for F with coefficients in F_p."""
    tab = field_table(p, r, len(coeffs) - 1)
    c = np.array(coeffs, dtype=np.int64)
    stack = np.stack(tab.powd[: len(coeffs)])  # (d+1, Q, r)
    dig = np.tensordot(c, stack, axes=(0, 0)) % p
    idx = dig.astype(np.int64) @ tab.pvec
    return int(tab.chi[idx].sum())
