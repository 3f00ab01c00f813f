# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled observe-and-propagate kernel.

Hot-loop twin of ``gridloom._pykernel.PureKernel``: identical operations in
identical order on the same splitmix64 stream, so runs are bit-identical
across the two backends.  Compiled with -ffp-contract=off to keep the float
sequences exactly reproducible.  Weight logs go through libm ``log`` (not
numpy's SIMD log) for the same reason.
"""

from libc.math cimport INFINITY
from libc.math cimport log as c_log

import numpy as np

cdef double NOISE_SCALE = 1e-6
cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef unsigned long long GOLDEN = 0x9E3779B97F4A7C15

cdef int[4] OPPOSITE_D = [2, 3, 0, 1]

STATUS_SOLVED = 0
STATUS_CONTRADICTION = 1


cdef inline unsigned long long _finalize(unsigned long long z) nogil:
    z = (z ^ (z >> 30)) * <unsigned long long>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <unsigned long long>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef class CompiledKernel:
    backend = "compiled"

    cdef public int width, height, num_cells, num_patterns
    cdef public bint wrap
    cdef public bint contradiction
    cdef public int contradiction_cell
    cdef public long long observations, propagations
    cdef public int undecided

    cdef long long[::1] weights
    cdef double[::1] wlog
    cdef int[::1] compat_flat
    cdef int[::1] compat_off
    cdef int[::1] nbr
    cdef unsigned char[::1] domain
    cdef unsigned char[::1] domain0
    cdef int[::1] support
    cdef int[::1] support0
    cdef int[::1] remaining
    cdef long long[::1] wsum
    cdef double[::1] wlogsum
    cdef double[::1] entropy
    cdef double[::1] noise
    cdef int[::1] queue
    cdef long long q_head, q_tail
    cdef int remaining0
    cdef long long wsum0
    cdef double wlogsum0
    cdef unsigned long long rng_state

    def __init__(self, width, height, wrap, weights, compat_flat, compat_off):
        cdef int p
        self.width = width
        self.height = height
        self.wrap = wrap
        self.num_cells = width * height
        self.num_patterns = len(weights)
        cdef int C = self.num_cells
        cdef int P = self.num_patterns

        w_arr = np.asarray(weights, dtype=np.int64)
        self.weights = w_arr
        wl = np.zeros(P, dtype=np.float64)
        for p in range(P):
            if w_arr[p] > 0:
                wl[p] = w_arr[p] * c_log(<double> w_arr[p])
        self.wlog = wl
        self.compat_flat = np.ascontiguousarray(compat_flat, dtype=np.int32)
        self.compat_off = np.ascontiguousarray(compat_off, dtype=np.int32)

        xs = np.arange(C, dtype=np.int64) % width
        ys = np.arange(C, dtype=np.int64) // width
        nbr = np.empty((C, 4), dtype=np.int32)
        for d, (dx, dy) in enumerate(((1, 0), (0, 1), (-1, 0), (0, -1))):
            nx = xs + dx
            ny = ys + dy
            if wrap:
                nbr[:, d] = (ny % height) * width + (nx % width)
            else:
                ok = (0 <= nx) & (nx < width) & (0 <= ny) & (ny < height)
                nbr[:, d] = np.where(ok, ny * width + nx, -1)
        self.nbr = np.ascontiguousarray(nbr.reshape(-1))

        # pristine (pre-sweep) templates; seed-independent
        eligible = (w_arr > 0)
        self.remaining0 = int(eligible.sum())
        self.wsum0 = int(w_arr[eligible].sum())
        self.wlogsum0 = 0.0
        for p in range(P):
            if w_arr[p] > 0:
                self.wlogsum0 += wl[p]
        self.domain0 = np.tile(eligible.astype(np.uint8), C)
        deg = np.diff(np.asarray(compat_off, dtype=np.int64)).reshape(P, 4)
        base = np.where(eligible[:, None], deg, 0).astype(np.int32)
        sup = np.empty((C, P, 4), dtype=np.int32)
        sup[:] = base[None, :, :]
        sup[np.broadcast_to((nbr < 0)[:, None, :], (C, P, 4))] = -1
        self.support0 = np.ascontiguousarray(sup.reshape(-1))

        self.domain = np.zeros(C * P, dtype=np.uint8)
        self.support = np.zeros(C * P * 4, dtype=np.int32)
        self.remaining = np.zeros(C, dtype=np.int32)
        self.wsum = np.zeros(C, dtype=np.int64)
        self.wlogsum = np.zeros(C, dtype=np.float64)
        self.entropy = np.zeros(C, dtype=np.float64)
        self.noise = np.zeros(C, dtype=np.float64)
        self.queue = np.zeros(C * P, dtype=np.int32)
        self.q_head = 0
        self.q_tail = 0
        self.rng_state = 0

    # -- deterministic rng (splitmix64) ---------------------------------------

    cdef inline unsigned long long _next64(self) nogil:
        self.rng_state = self.rng_state + GOLDEN
        return _finalize(self.rng_state)

    cdef inline double _next_float(self) nogil:
        return <double>(self._next64() >> 11) * INV_2_53

    # -- core steps ------------------------------------------------------------

    cdef bint _remove(self, int c, int p) nogil:
        cdef int P = self.num_patterns
        cdef double ws
        self.domain[c * P + p] = 0
        self.remaining[c] -= 1
        self.wsum[c] -= self.weights[p]
        self.wlogsum[c] -= self.wlog[p]
        self.propagations += 1
        if self.remaining[c] == 0:
            self.contradiction = True
            self.contradiction_cell = c
            return False
        if self.remaining[c] == 1:
            self.undecided -= 1
        ws = <double> self.wsum[c]
        self.entropy[c] = c_log(ws) - self.wlogsum[c] / ws + self.noise[c]
        self.queue[self.q_tail] = c * P + p
        self.q_tail += 1
        return True

    cdef bint _propagate(self) nogil:
        cdef int c, removed, d, nb, od, p
        cdef long long i, lo, hi, si
        cdef int P = self.num_patterns
        while self.q_head < self.q_tail:
            c = self.queue[self.q_head] // P
            removed = self.queue[self.q_head] % P
            self.q_head += 1
            for d in range(4):
                nb = self.nbr[c * 4 + d]
                if nb < 0:
                    continue
                od = OPPOSITE_D[d]
                lo = self.compat_off[removed * 4 + d]
                hi = self.compat_off[removed * 4 + d + 1]
                for i in range(lo, hi):
                    p = self.compat_flat[i]
                    si = (<long long> nb * P + p) * 4 + od
                    self.support[si] -= 1
                    if self.support[si] == 0 and self.domain[nb * P + p]:
                        if not self._remove(nb, p):
                            return False
        return True

    cdef int _observe(self) nogil:
        cdef int best = -1
        cdef double best_e = INFINITY
        cdef int c, p, chosen
        cdef long long acc
        cdef unsigned long long r
        cdef int P = self.num_patterns
        if self.undecided == 0:
            return -1
        for c in range(self.num_cells):
            if self.remaining[c] >= 2 and self.entropy[c] < best_e:
                best = c
                best_e = self.entropy[c]
        r = self._next64() % <unsigned long long> self.wsum[best]
        chosen = -1
        acc = 0
        for p in range(P):
            if self.domain[best * P + p]:
                acc += self.weights[p]
                if <long long> r < acc:
                    chosen = p
                    break
        for p in range(P):
            if p != chosen and self.domain[best * P + p]:
                self._remove(best, p)
        self.observations += 1
        return best

    cdef bint _reset(self, unsigned long long seed) nogil:
        cdef int C = self.num_cells
        cdef int P = self.num_patterns
        cdef int c, p, d
        cdef long long k
        cdef bint dead
        cdef double base
        for k in range(<long long> C * P):
            self.domain[k] = self.domain0[k]
        for k in range(<long long> C * P * 4):
            self.support[k] = self.support0[k]
        for c in range(C):
            self.remaining[c] = self.remaining0
            self.wsum[c] = self.wsum0
            self.wlogsum[c] = self.wlogsum0
        self.undecided = C if self.remaining0 >= 2 else 0
        self.contradiction = False
        self.contradiction_cell = -1
        self.observations = 0
        self.propagations = 0
        self.q_head = 0
        self.q_tail = 0
        self.rng_state = seed
        for c in range(C):
            self.noise[c] = self._next_float() * NOISE_SCALE
        if self.wsum0 > 0:
            base = c_log(<double> self.wsum0) - self.wlogsum0 / <double> self.wsum0
        else:
            base = 0.0
        for c in range(C):
            self.entropy[c] = base + self.noise[c]
        # initial sweep: anything unsupported from the start goes now
        for c in range(C):
            for p in range(P):
                if self.domain[c * P + p]:
                    dead = False
                    for d in range(4):
                        if self.support[(<long long> c * P + p) * 4 + d] == 0:
                            dead = True
                            break
                    if dead:
                        if not self._remove(c, p):
                            return False
        return self._propagate()

    # -- python-visible API (same shape as the pure kernel) ---------------------

    def reset(self, seed):
        return bool(self._reset(<unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)))

    def observe(self):
        return self._observe()

    def propagate(self):
        return bool(self._propagate())

    def run_attempt(self, seed):
        cdef int cell
        if not self._reset(<unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)):
            return STATUS_CONTRADICTION
        while True:
            cell = self._observe()
            if cell < 0:
                return STATUS_SOLVED
            if not self._propagate():
                return STATUS_CONTRADICTION

    # -- inspection --------------------------------------------------------------

    def result_ids(self):
        cdef int c, p
        cdef int P = self.num_patterns
        out = []
        for c in range(self.num_cells):
            for p in range(P):
                if self.domain[c * P + p]:
                    out.append(p)
                    break
        return out

    def domain_mask(self):
        cdef int P = self.num_patterns
        return [
            [bool(self.domain[c * P + p]) for p in range(P)]
            for c in range(self.num_cells)
        ]

    def support_counts(self):
        cdef int P = self.num_patterns
        return [
            [
                [self.support[(c * P + p) * 4 + d] for d in range(4)]
                for p in range(P)
            ]
            for c in range(self.num_cells)
        ]

    def entropy_values(self):
        return [self.entropy[c] for c in range(self.num_cells)]

    def remaining_counts(self):
        return [self.remaining[c] for c in range(self.num_cells)]

    def neighbor(self, c, d):
        return self.nbr[c * 4 + d]
