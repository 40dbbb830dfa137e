# cython: language_level=3
"""Compiled sampling kernel: one C loop over rounds.

Mirrors _sampling_py bit for bit: the same counter-based generator, the
same draw layout, and a first-passage scan over the cumulative table
equivalent to searchsorted(side="right").
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef unsigned long long u64

cdef u64 GAMMA = 0x9E3779B97F4A7C15ULL
cdef u64 MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 MIX2 = 0x94D049BB133111EBULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef u64 STRIDE = 8


cdef inline double u01(u64 seed, u64 counter) nogil:
    cdef u64 z = seed + counter * GAMMA
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    z = z ^ (z >> 31)
    return <double>(z >> 11) * INV_2_53


def sample_rounds(seed, n_rounds, engage_p_b, engage_p_c, cum_tables):
    cdef u64 s = <u64>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t n = n_rounds
    cdef double pb = engage_p_b
    cdef double pc = engage_p_c

    cdef cnp.ndarray[cnp.uint8_t, ndim=1] bob = np.empty(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] charlie = np.empty(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] eng_b = np.empty(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] eng_c = np.empty(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] atoms = np.empty(n, dtype=np.uint8)

    cdef const double[:, :, :, :, ::1] cum = cum_tables
    cdef unsigned char[::1] bb = bob
    cdef unsigned char[::1] cb = charlie
    cdef unsigned char[::1] eb = eng_b
    cdef unsigned char[::1] ec = eng_c
    cdef unsigned char[::1] at = atoms

    cdef Py_ssize_t r, k
    cdef u64 base
    cdef double draw
    cdef unsigned char b0, c0, e0, e1

    with nogil:
        for r in range(n):
            base = (<u64>r) * STRIDE
            b0 = 1 if u01(s, base) >= 0.5 else 0
            c0 = 1 if u01(s, base + 1) >= 0.5 else 0
            e0 = 1 if u01(s, base + 2) < pb else 0
            e1 = 1 if u01(s, base + 3) < pc else 0
            draw = u01(s, base + 4)
            for k in range(32):
                if draw < cum[b0, c0, e0, e1, k]:
                    break
            bb[r] = b0
            cb[r] = c0
            eb[r] = e0
            ec[r] = e1
            at[r] = <unsigned char>k
    return bob, charlie, eng_b, eng_c, atoms
