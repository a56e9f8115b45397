# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Reference semantics live in ``_pykernels.py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef int SPAN_LO[6]
cdef int SPAN_HI[6]
cdef int SUCC[6]
SPAN_LO[:] = [0, 0, 2, 4, 0, 3]
SPAN_HI[:] = [6, 2, 4, 6, 3, 6]
SUCC[:] = [-1, 2, 3, 1, 5, 4]


def pairs_within(x, y, double threshold):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i, j, cnt = 0, cap = 64
    cdef double t2 = threshold * threshold, dx, dy
    cdef cnp.int64_t[::1] ii = np.empty(cap, dtype=np.int64)
    cdef cnp.int64_t[::1] jj = np.empty(cap, dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            dx = xv[i] - xv[j]
            dy = yv[i] - yv[j]
            if dx * dx + dy * dy <= t2:
                if cnt == cap:
                    cap *= 2
                    ii = np.resize(np.asarray(ii), cap)
                    jj = np.resize(np.asarray(jj), cap)
                ii[cnt] = i
                jj[cnt] = j
                cnt += 1
    return np.asarray(ii)[:cnt].copy(), np.asarray(jj)[:cnt].copy()


cdef inline bint overlap(int a, int b) nogil:
    cdef int lo = SPAN_LO[a] if SPAN_LO[a] > SPAN_LO[b] else SPAN_LO[b]
    cdef int hi = SPAN_HI[a] if SPAN_HI[a] < SPAN_HI[b] else SPAN_HI[b]
    return lo < hi


cdef inline bint contains(int* arr, int k, int v) nogil:
    cdef int i
    for i in range(k):
        if arr[i] == v:
            return True
    return False


cdef int c_choose_edge(int* foes, int k, int* dem) nogil:
    """Writes the new label of each foe (or -2 for unchanged) into ``dem``."""
    cdef int i, t, c, a, b, keep, other
    cdef bint has_third, ok, held4, held5
    cdef int mapped[3]
    cdef int cands[5]
    cdef int ncand
    for i in range(k):
        dem[i] = -2
    if k == 0:
        return 0
    if k > 3:
        return -1
    if k == 1:
        if foes[0] == 0:
            dem[0] = 4
            return 5
        return SUCC[foes[0]]
    if k == 2:
        a = foes[0]
        b = foes[1]
        if (a == 4 and b == 5) or (a == 5 and b == 4):
            dem[0] = 1 if a == 4 else 2
            dem[1] = 1 if b == 4 else 2
            return 3
        if a != b and 1 <= a <= 3 and 1 <= b <= 3:
            return 6 - a - b
    if k == 3:
        ok = True
        for i in range(3):
            if not (1 <= foes[i] <= 3):
                ok = False
        if ok:
            for t in range(1, 4):
                if not contains(foes, 3, t):
                    return t
            return -1
    # generic
    has_third = False
    for i in range(k):
        if 1 <= foes[i] <= 3:
            has_third = True
    if has_third:
        cands[0] = 1; cands[1] = 2; cands[2] = 3
        ncand = 3
    else:
        cands[0] = 4; cands[1] = 5; cands[2] = 1; cands[3] = 2; cands[4] = 3
        ncand = 5
    for c in range(ncand):
        ok = True
        for i in range(k):
            if overlap(cands[c], foes[i]):
                ok = False
                break
        if ok:
            return cands[c]
    if not has_third:
        held4 = contains(foes, k, 4)
        held5 = contains(foes, k, 5)
        if not (held4 and held5):
            keep = 5 if held5 else 4
            other = 4 if keep == 5 else 5
            for i in range(k):
                if foes[i] == 0:
                    dem[i] = keep
            return other
    for i in range(k):
        if 1 <= foes[i] <= 3:
            mapped[i] = foes[i]
        elif foes[i] == 4:
            mapped[i] = 1
        elif foes[i] == 5:
            mapped[i] = 3
        else:
            mapped[i] = -1
    for i in range(k):
        if mapped[i] == -1:
            c = 1
            for t in range(1, 4):
                if not contains(mapped, k, t):
                    c = t
                    break
            mapped[i] = c
    for t in range(1, 4):
        if not contains(mapped, k, t):
            for i in range(k):
                if mapped[i] != foes[i]:
                    dem[i] = mapped[i]
            return t
    for i in range(k):
        dem[i] = -2
    return -1


def choose_edge(foes):
    cdef int f[3]
    cdef int dem[3]
    cdef int k = len(foes), i, label
    if k > 3:
        return -1, []
    for i in range(k):
        f[i] = int(foes[i])
    label = c_choose_edge(f, k, dem)
    return label, [(i, dem[i]) for i in range(k) if dem[i] != -2]


cdef class _State:
    cdef const cnp.int64_t[::1] ptr
    cdef const cnp.int64_t[::1] nbr
    cdef const double[::1] dist
    cdef double[::1] radius
    cdef cnp.int8_t[::1] labels
    cdef cnp.uint8_t[::1] unresolved
    cdef double scale, shrink, min_radius
    cdef cnp.int64_t[::1] buf

    cdef int interferers(self, Py_ssize_t i) nogil:
        cdef Py_ssize_t k, j
        cdef int cnt = 0
        for k in range(self.ptr[i], self.ptr[i + 1]):
            j = self.nbr[k]
            if self.labels[j] >= 0 and self.dist[k] <= self.scale * (self.radius[i] + self.radius[j]):
                self.buf[cnt] = j
                cnt += 1
        return cnt

    cdef bint has_conflict(self, Py_ssize_t i) nogil:
        cdef int cnt = self.interferers(i), k
        cdef int own = self.labels[i]
        for k in range(cnt):
            if overlap(own, self.labels[self.buf[k]]):
                return True
        return False

    cdef bint shrink_cell(self, Py_ssize_t c) nogil:
        cdef double new = self.radius[c] * self.shrink
        if new < self.min_radius:
            new = self.min_radius
        if new < self.radius[c]:
            self.radius[c] = new
            return True
        return False

    cdef void place(self, Py_ssize_t i) nogil:
        cdef int cnt, k, label, t, cost, best, best_cost
        cdef int foes[3]
        cdef int dem[3]
        cdef bint changed
        while True:
            self.labels[i] = -1
            cnt = self.interferers(i)
            if cnt <= 3:
                for k in range(cnt):
                    foes[k] = self.labels[self.buf[k]]
                label = c_choose_edge(foes, cnt, dem)
            else:
                label = -1
            if label >= 0:
                for k in range(cnt):
                    if dem[k] != -2:
                        self.labels[self.buf[k]] = dem[k]
                self.labels[i] = label
                self.unresolved[i] = 0
                return
            changed = self.shrink_cell(i)
            for k in range(cnt):
                if self.shrink_cell(self.buf[k]):
                    changed = True
            if not changed:
                break
        cnt = self.interferers(i)
        best = 1
        best_cost = -1
        for t in range(1, 4):
            cost = 0
            for k in range(cnt):
                if overlap(t, self.labels[self.buf[k]]):
                    cost += 1
            if best_cost < 0 or cost < best_cost:
                best = t
                best_cost = cost
        self.labels[i] = best
        self.unresolved[i] = 1


def run_dynamic(ptr, nbr, dist, double[::1] radius, double threshold, double base_radius,
                double shrink, double min_radius, int settle_passes):
    cdef Py_ssize_t n = len(ptr) - 1, i
    cdef int p
    cdef bint changed
    cdef _State st = _State()
    st.ptr = np.ascontiguousarray(ptr, dtype=np.int64)
    st.nbr = np.ascontiguousarray(nbr, dtype=np.int64)
    st.dist = np.ascontiguousarray(dist, dtype=np.float64)
    st.radius = radius
    labels = np.full(n, -1, dtype=np.int8)
    unresolved = np.zeros(n, dtype=np.uint8)
    st.labels = labels
    st.unresolved = unresolved
    st.scale = threshold / (2.0 * base_radius)
    st.shrink = shrink
    st.min_radius = min_radius
    st.buf = np.empty(max(n, 1), dtype=np.int64)
    with nogil:
        for i in range(n):
            st.place(i)
        for p in range(settle_passes):
            changed = False
            for i in range(n):
                if st.labels[i] < 0 or st.unresolved[i] or not st.has_conflict(i):
                    continue
                st.place(i)
                changed = True
            if not changed:
                break
    return labels, unresolved.astype(np.bool_)
