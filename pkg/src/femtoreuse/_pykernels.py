"""Pure-Python/numpy versions of the hot kernels.

Semantics must match ``_ckernels.pyx`` exactly; ``tests/test_kernels.py``
checks the two against each other.

Edge labels are integer codes: 0 = full edge third, 1..3 = its thirds,
4/5 = its lower/upper halves, -1 = not installed.
"""

import numpy as np

# Label extents inside the edge third, in sixths.
SPAN_LO = (0, 0, 2, 4, 0, 3)
SPAN_HI = (6, 2, 4, 6, 3, 6)
SUCCESSOR = (-1, 2, 3, 1, 5, 4)


def pairs_within(x, y, threshold):
    """Index pairs ``(i, j)``, ``i < j``, with Euclidean distance <= threshold."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy()
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    close = dx * dx + dy * dy <= threshold * threshold
    ii, jj = np.nonzero(np.triu(close, k=1))
    return ii.astype(np.int64), jj.astype(np.int64)


def overlap(a, b):
    return max(SPAN_LO[a], SPAN_LO[b]) < min(SPAN_HI[a], SPAN_HI[b])


def choose_edge(foes):
    """Edge label for a new cell given interferer labels (ascending id).

    Returns ``(label, demotions)``; ``demotions`` is a list of
    ``(foe_index, new_label)``. ``label == -1`` means the cells must shrink.
    """
    k = len(foes)
    if k == 0:
        return 0, []
    if k > 3:
        return -1, []
    if k == 1:
        if foes[0] == 0:
            return 5, [(0, 4)]
        return SUCCESSOR[foes[0]], []
    if k == 2:
        a, b = foes
        if (a == 4 and b == 5) or (a == 5 and b == 4):
            return 3, [(0, 1 if a == 4 else 2), (1, 1 if b == 4 else 2)]
        if a != b and 1 <= a <= 3 and 1 <= b <= 3:
            return 6 - a - b, []
    if k == 3 and all(1 <= f <= 3 for f in foes):
        for t in (1, 2, 3):
            if t not in foes:
                return t, []
        return -1, []
    return _choose_generic(foes)


def _choose_generic(foes):
    has_third = any(1 <= f <= 3 for f in foes)
    candidates = (1, 2, 3) if has_third else (4, 5, 1, 2, 3)
    for c in candidates:
        if not any(overlap(c, f) for f in foes):
            return c, []
    if not has_third:
        held4 = 4 in foes
        held5 = 5 in foes
        if not (held4 and held5):
            keep = 5 if held5 else 4
            other = 4 if keep == 5 else 5
            return other, [(i, keep) for i, f in enumerate(foes) if f == 0]
    mapped = []
    for f in foes:
        if 1 <= f <= 3:
            mapped.append(f)
        elif f == 4:
            mapped.append(1)
        elif f == 5:
            mapped.append(3)
        else:
            mapped.append(-1)
    for i in range(len(mapped)):
        if mapped[i] == -1:
            pick = 1
            for t in (1, 2, 3):
                if t not in mapped:
                    pick = t
                    break
            mapped[i] = pick
    for t in (1, 2, 3):
        if t not in mapped:
            return t, [(i, m) for i, (f, m) in enumerate(zip(foes, mapped)) if m != f]
    return -1, []


class _DynamicState:
    def __init__(self, ptr, nbr, dist, radius, labels, unresolved,
                 threshold, base_radius, shrink, min_radius):
        self.ptr, self.nbr, self.dist = ptr, nbr, dist
        self.radius, self.labels, self.unresolved = radius, labels, unresolved
        self.scale = threshold / (2.0 * base_radius)
        self.shrink, self.min_radius = shrink, min_radius

    def interferers(self, i):
        out = []
        r = self.radius
        for k in range(self.ptr[i], self.ptr[i + 1]):
            j = self.nbr[k]
            if self.labels[j] >= 0 and self.dist[k] <= self.scale * (r[i] + r[j]):
                out.append(j)
        return out

    def has_conflict(self, i):
        own = self.labels[i]
        return any(overlap(own, self.labels[j]) for j in self.interferers(i))

    def resize(self, cells):
        changed = False
        for c in cells:
            new = max(self.min_radius, self.radius[c] * self.shrink)
            if new < self.radius[c]:
                self.radius[c] = new
                changed = True
        return changed

    def place(self, i):
        while True:
            self.labels[i] = -1
            foes = self.interferers(i)
            label, demotions = choose_edge([int(self.labels[j]) for j in foes])
            if label >= 0:
                for idx, new in demotions:
                    self.labels[foes[idx]] = new
                self.labels[i] = label
                self.unresolved[i] = False
                return
            if not self.resize([i] + foes):
                break
        foes = self.interferers(i)
        best, best_cost = 1, None
        for t in (1, 2, 3):
            cost = sum(overlap(t, int(self.labels[j])) for j in foes)
            if best_cost is None or cost < best_cost:
                best, best_cost = t, cost
        self.labels[i] = best
        self.unresolved[i] = True

    def settle(self, passes):
        n = len(self.labels)
        for _ in range(passes):
            changed = False
            for i in range(n):
                if self.labels[i] < 0 or self.unresolved[i] or not self.has_conflict(i):
                    continue
                self.place(i)
                changed = True
            if not changed:
                return


def run_dynamic(ptr, nbr, dist, radius, threshold, base_radius, shrink, min_radius, settle_passes):
    """Install every cell in index order, then settle residual conflicts.

    ``ptr``/``nbr``/``dist`` are the CSR neighbor lists (ascending index).
    ``radius`` is updated in place. Returns ``(labels, unresolved)``.
    """
    n = len(ptr) - 1
    labels = np.full(n, -1, dtype=np.int8)
    unresolved = np.zeros(n, dtype=np.bool_)
    st = _DynamicState(ptr, nbr, dist, radius, labels, unresolved,
                       threshold, base_radius, shrink, min_radius)
    for i in range(n):
        st.place(i)
    st.settle(settle_passes)
    return labels, unresolved
