"""Pure-Python observe-and-propagate kernel.

This is the fallback used when the compiled extension is unavailable, and
the readable reference for what the compiled kernel does.  Both kernels
execute the same operations in the same order on IEEE doubles and the same
splitmix64 stream, so a run is bit-identical regardless of which one is
active (the parity tests hold them to that).

State per cell: a Boolean domain over pattern ids, AC-4 style support
counters per (pattern, direction), the remaining integer weight mass, and a
cached noised entropy used to pick the next cell to collapse.
"""

from __future__ import annotations

from collections import deque
from math import log

from .rng import GOLDEN, MASK64, _finalize

NOISE_SCALE = 1e-6
_INV_2_53 = 1.0 / 9007199254740992.0

STATUS_SOLVED = 0
STATUS_CONTRADICTION = 1


class PureKernel:
    """Observe-and-propagate over a cell grid with whitelist constraints.

    Parameters
    ----------
    width, height : pattern-grid dimensions (cells)
    wrap : toroidal neighbor topology when true, else edges are unconstrained
    weights : per-pattern occurrence counts; zero-weight patterns never
        enter any domain
    compat_flat, compat_off : CSR adjacency lists; for pattern p and
        direction d, ``compat_flat[compat_off[p*4+d]:compat_off[p*4+d+1]]``
        holds every eligible q with (p, d, q) in the whitelist, ascending.
    """

    backend = "pure"

    def __init__(self, width, height, wrap, weights, compat_flat, compat_off):
        self.width = width
        self.height = height
        self.wrap = wrap
        self.num_cells = width * height
        self.num_patterns = len(weights)
        self.weights = [int(w) for w in weights]
        self.wlog = [w * log(w) if w > 0 else 0.0 for w in self.weights]
        self.compat_flat = list(compat_flat)
        self.compat_off = list(compat_off)
        self._build_neighbors()
        self._build_templates()
        # live state, filled by reset()
        self.domain = bytearray()
        self.support = []
        self.remaining = []
        self.wsum = []
        self.wlogsum = []
        self.entropy = []
        self.noise = []
        self.undecided = 0
        self.contradiction = False
        self.contradiction_cell = -1
        self.observations = 0
        self.propagations = 0
        self._queue = deque()
        self._rng_state = 0

    # -- construction ------------------------------------------------------

    def _build_neighbors(self):
        w, h = self.width, self.height
        dxs, dys = (1, 0, -1, 0), (0, 1, 0, -1)
        nbr = []
        for c in range(self.num_cells):
            x, y = c % w, c // w
            for d in range(4):
                nx, ny = x + dxs[d], y + dys[d]
                if self.wrap:
                    nbr.append((ny % h) * w + (nx % w))
                elif 0 <= nx < w and 0 <= ny < h:
                    nbr.append(ny * w + nx)
                else:
                    nbr.append(-1)
        self.nbr = nbr

    def _build_templates(self):
        P = self.num_patterns
        eligible = [1 if self.weights[p] > 0 else 0 for p in range(P)]
        count = sum(eligible)
        wsum0 = sum(self.weights[p] for p in range(P) if eligible[p])
        wlogsum0 = 0.0
        for p in range(P):
            if eligible[p]:
                wlogsum0 += self.wlog[p]
        deg = [self.compat_off[i + 1] - self.compat_off[i] for i in range(P * 4)]
        support0 = []
        for c in range(self.num_cells):
            for p in range(P):
                for d in range(4):
                    if self.nbr[c * 4 + d] < 0:
                        support0.append(-1)
                    elif eligible[p]:
                        support0.append(deg[p * 4 + d])
                    else:
                        support0.append(0)
        self._domain0 = bytearray(eligible * self.num_cells)
        self._support0 = support0
        self._remaining0 = count
        self._wsum0 = wsum0
        self._wlogsum0 = wlogsum0

    # -- deterministic rng (splitmix64) -------------------------------------

    def _next64(self):
        self._rng_state = (self._rng_state + GOLDEN) & MASK64
        return _finalize(self._rng_state)

    def _next_float(self):
        return (self._next64() >> 11) * _INV_2_53

    # -- lifecycle -----------------------------------------------------------

    def reset(self, seed):
        """Restore pristine domains, derive per-cell noise from ``seed``,
        and run the initial arc-consistency sweep.  Returns False when the
        sweep alone empties a domain."""
        C, P = self.num_cells, self.num_patterns
        self.domain = bytearray(self._domain0)
        self.support = list(self._support0)
        self.remaining = [self._remaining0] * C
        self.wsum = [self._wsum0] * C
        self.wlogsum = [self._wlogsum0] * C
        self.undecided = C if self._remaining0 >= 2 else 0
        self.contradiction = False
        self.contradiction_cell = -1
        self.observations = 0
        self.propagations = 0
        self._queue.clear()
        self._rng_state = seed & MASK64
        self.noise = [self._next_float() * NOISE_SCALE for _ in range(C)]
        base = (
            log(self._wsum0) - self._wlogsum0 / self._wsum0 if self._wsum0 > 0 else 0.0
        )
        self.entropy = [base + self.noise[c] for c in range(C)]
        # initial sweep: anything unsupported from the start goes now
        for c in range(C):
            for p in range(P):
                if self.domain[c * P + p]:
                    s = self.support[(c * P + p) * 4 : (c * P + p) * 4 + 4]
                    if 0 in s:
                        if not self._remove(c, p):
                            return False
        return self.propagate()

    # -- core steps ----------------------------------------------------------

    def _remove(self, c, p):
        P = self.num_patterns
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
        ws = self.wsum[c]
        self.entropy[c] = log(ws) - self.wlogsum[c] / ws + self.noise[c]
        self._queue.append((c, p))
        return True

    def propagate(self):
        """Drain the removal queue, decrementing neighbor support counters;
        False means a domain emptied (contradiction)."""
        q = self._queue
        P = self.num_patterns
        opposite = (2, 3, 0, 1)
        while q:
            c, removed = q.popleft()
            for d in range(4):
                nb = self.nbr[c * 4 + d]
                if nb < 0:
                    continue
                od = opposite[d]
                lo = self.compat_off[removed * 4 + d]
                hi = self.compat_off[removed * 4 + d + 1]
                for i in range(lo, hi):
                    p = self.compat_flat[i]
                    si = (nb * P + p) * 4 + od
                    self.support[si] -= 1
                    if self.support[si] == 0 and self.domain[nb * P + p]:
                        if not self._remove(nb, p):
                            return False
        return True

    def observe(self):
        """Collapse the lowest-entropy undecided cell; -1 when every cell is
        already decided.  Enqueues the removals for propagate()."""
        if self.undecided == 0:
            return -1
        best, best_e = -1, float("inf")
        for c in range(self.num_cells):
            if self.remaining[c] >= 2 and self.entropy[c] < best_e:
                best, best_e = c, self.entropy[c]
        P = self.num_patterns
        r = self._next64() % self.wsum[best]
        chosen = -1
        acc = 0
        for p in range(P):
            if self.domain[best * P + p]:
                acc += self.weights[p]
                if r < acc:
                    chosen = p
                    break
        for p in range(P):
            if p != chosen and self.domain[best * P + p]:
                self._remove(best, p)
        self.observations += 1
        return best

    def run_attempt(self, seed):
        """One full solve attempt from ``seed``; STATUS_SOLVED or
        STATUS_CONTRADICTION."""
        if not self.reset(seed):
            return STATUS_CONTRADICTION
        while True:
            cell = self.observe()
            if cell < 0:
                return STATUS_SOLVED
            if not self.propagate():
                return STATUS_CONTRADICTION

    # -- inspection ----------------------------------------------------------

    def result_ids(self):
        """Per-cell decided pattern ids (row-major)."""
        P = self.num_patterns
        out = []
        for c in range(self.num_cells):
            for p in range(P):
                if self.domain[c * P + p]:
                    out.append(p)
                    break
        return out

    def domain_mask(self):
        P = self.num_patterns
        return [
            [bool(self.domain[c * P + p]) for p in range(P)]
            for c in range(self.num_cells)
        ]

    def support_counts(self):
        P = self.num_patterns
        return [
            [
                [self.support[(c * P + p) * 4 + d] for d in range(4)]
                for p in range(P)
            ]
            for c in range(self.num_cells)
        ]

    def entropy_values(self):
        return list(self.entropy)

    def remaining_counts(self):
        return list(self.remaining)

    def neighbor(self, c, d):
        return self.nbr[c * 4 + d]
