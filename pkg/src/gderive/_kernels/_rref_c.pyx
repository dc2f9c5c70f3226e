# cython: language_level=3
"""Integer fraction-free reduced row echelon kernel (compiled twin).

Entries stay arbitrary-precision Python ints; the speedup comes from typed
loop bookkeeping. Semantics must match rref_py exactly.
"""

from math import gcd


cdef list _normalize(list row):
    cdef Py_ssize_t i, n = len(row)
    g = 0
    for i in range(n):
        g = gcd(g, row[i])
        if g == 1:
            break
    if g > 1:
        row = [a // g for a in row]
    for i in range(n):
        if row[i] > 0:
            return row
        if row[i] < 0:
            return [-a for a in row]
    return row


def rref_int(rows):
    """See gderive._kernels.rref_py.rref_int; identical contract."""
    cdef list work = [list(row) for row in rows]
    cdef Py_ssize_t nrows = len(work)
    cdef Py_ssize_t ncols = len(<list>work[0]) if nrows else 0
    cdef list pivot_cols = []
    cdef Py_ssize_t r = 0, c, i, j, src
    cdef list piv, rowj
    for c in range(ncols):
        src = -1
        for i in range(r, nrows):
            if (<list>work[i])[c] != 0:
                src = i
                break
        if src < 0:
            continue
        work[r], work[src] = work[src], work[r]
        if (<list>work[r])[c] < 0:
            work[r] = [-a for a in <list>work[r]]
        work[r] = _normalize(<list>work[r])
        p = (<list>work[r])[c]
        for j in range(nrows):
            if j == r:
                continue
            rowj = <list>work[j]
            v = rowj[c]
            if v == 0:
                continue
            piv = <list>work[r]
            work[j] = [p * a - v * b for a, b in zip(rowj, piv)]
            work[j] = _normalize(<list>work[j])
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    return work[:r], pivot_cols
