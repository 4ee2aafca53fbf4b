# cython: language_level=3, boundscheck=True, wraparound=True, cdivision=True
"""Compiled twin of ``_blossom.py``: identical primal-dual blossom algorithm
with the hot state (labels, duals, adjacency, best-edge handles) in typed
arrays. Blossom structure lists stay Python objects; contractions are rare
compared to edge scans and dual updates.

Keep this file in lockstep with ``_blossom.py`` - the test suite runs the
same oracle battery against both kernels.
"""

import numpy as np

cdef long long LABEL_FREE = 0
cdef long long LABEL_S = 1
cdef long long LABEL_T = 2
cdef long long BREADCRUMB = 4


cdef class _Solver:
    cdef long long n, m
    cdef long long[::1] edge_u, edge_v
    cdef double[::1] edge_w
    cdef long long[::1] adj_start, adj_code
    cdef long long[::1] mate, label, labeledge, inblossom
    cdef long long[::1] blossomparent, blossombase, bestedge
    cdef double[::1] dualvar
    cdef unsigned char[::1] allowedge
    cdef list queue, childs, bedges, mybestedges, unusedblossoms

    def __init__(self, long long num_vertex, edge_u, edge_v, edge_w):
        cdef long long n = num_vertex
        cdef long long m = len(edge_u)
        cdef long long k, u, v
        self.n = n
        self.m = m
        self.edge_u = np.asarray(edge_u, dtype=np.int64)
        self.edge_v = np.asarray(edge_v, dtype=np.int64)
        self.edge_w = np.asarray(edge_w, dtype=np.float64)

        deg = np.zeros(n + 1, dtype=np.int64)
        cdef long long[::1] degv = deg
        for k in range(m):
            degv[self.edge_u[k] + 1] += 1
            degv[self.edge_v[k] + 1] += 1
        self.adj_start = np.cumsum(deg, dtype=np.int64)
        self.adj_code = np.zeros(2 * m, dtype=np.int64)
        fill = np.asarray(self.adj_start[:n]).copy()
        cdef long long[::1] fillv = fill
        for k in range(m):
            u = self.edge_u[k]
            v = self.edge_v[k]
            self.adj_code[fillv[u]] = 2 * k
            fillv[u] += 1
            self.adj_code[fillv[v]] = 2 * k + 1
            fillv[v] += 1

        self.mate = np.full(n, -1, dtype=np.int64)
        self.label = np.zeros(2 * n, dtype=np.int64)
        self.labeledge = np.full(2 * n, -1, dtype=np.int64)
        self.inblossom = np.arange(n, dtype=np.int64)
        self.blossomparent = np.full(2 * n, -1, dtype=np.int64)
        base = np.full(2 * n, -1, dtype=np.int64)
        base[:n] = np.arange(n, dtype=np.int64)
        self.blossombase = base
        self.bestedge = np.full(2 * n, -1, dtype=np.int64)
        dual = np.zeros(2 * n, dtype=np.float64)
        dual[:n] = float(np.max(self.edge_w)) if m else 0.0
        self.dualvar = dual
        self.allowedge = np.zeros(m, dtype=np.uint8)
        self.queue = []
        self.childs = [None] * (2 * n)
        self.bedges = [None] * (2 * n)
        self.mybestedges = [None] * (2 * n)
        self.unusedblossoms = list(range(n, 2 * n))

    cdef inline long long code_src(self, long long d):
        return self.edge_v[d >> 1] if d & 1 else self.edge_u[d >> 1]

    cdef inline long long code_dst(self, long long d):
        return self.edge_u[d >> 1] if d & 1 else self.edge_v[d >> 1]

    cdef inline double slack(self, long long k):
        return (self.dualvar[self.edge_u[k]] + self.dualvar[self.edge_v[k]]
                - 2.0 * self.edge_w[k])

    def blossom_leaves(self, long long b):
        if b < self.n:
            yield b
            return
        stack = list(self.childs[b])
        while stack:
            t = stack.pop()
            if t < self.n:
                yield t
            else:
                stack.extend(self.childs[t])

    cdef void assign_label(self, long long w, long long t, long long d):
        cdef long long b = self.inblossom[w]
        cdef long long base
        self.label[w] = t
        self.label[b] = t
        self.labeledge[w] = d
        self.labeledge[b] = d
        self.bestedge[w] = -1
        self.bestedge[b] = -1
        if t == LABEL_S:
            if b < self.n:
                self.queue.append(b)
            else:
                self.queue.extend(self.blossom_leaves(b))
        else:
            base = self.blossombase[b]
            self.assign_label(self.code_dst(self.mate[base]), LABEL_S,
                              self.mate[base])

    cdef long long scan_blossom(self, long long v, long long w):
        cdef long long base = -1
        cdef long long b
        path = []
        while v != -1:
            b = self.inblossom[v]
            if self.label[b] & BREADCRUMB:
                base = self.blossombase[b]
                break
            path.append(b)
            self.label[b] = LABEL_S | BREADCRUMB
            if self.labeledge[b] == -1:
                v = -1
            else:
                v = self.code_src(self.labeledge[b])
                b = self.inblossom[v]
                v = self.code_src(self.labeledge[b])
            if w != -1:
                v, w = w, v
        for bb in path:
            self.label[bb] = LABEL_S
        return base

    cdef void add_blossom(self, long long base, long long d):
        cdef long long v = self.code_src(d)
        cdef long long w = self.code_dst(d)
        cdef long long bb = self.inblossom[base]
        cdef long long bv = self.inblossom[v]
        cdef long long bw = self.inblossom[w]
        cdef long long b = self.unusedblossoms.pop()
        cdef long long leaf, j, bj, dd, best
        cdef double sl, bestslack
        self.blossombase[b] = base
        self.blossomparent[b] = -1
        self.blossomparent[bb] = b
        path = []
        edgs = [d]
        while bv != bb:
            self.blossomparent[bv] = b
            path.append(bv)
            edgs.append(self.labeledge[bv])
            v = self.code_src(self.labeledge[bv])
            bv = self.inblossom[v]
        path.append(bb)
        path.reverse()
        edgs.reverse()
        while bw != bb:
            self.blossomparent[bw] = b
            path.append(bw)
            edgs.append(self.labeledge[bw] ^ 1)
            w = self.code_src(self.labeledge[bw])
            bw = self.inblossom[w]
        self.childs[b] = path
        self.bedges[b] = edgs
        self.label[b] = LABEL_S
        self.labeledge[b] = self.labeledge[bb]
        self.dualvar[b] = 0.0
        for leaf in self.blossom_leaves(b):
            if self.label[self.inblossom[leaf]] == LABEL_T:
                self.queue.append(leaf)
            self.inblossom[leaf] = b
        bestedgeto = np.full(2 * self.n, -1, dtype=np.int64)
        cdef long long[::1] betv = bestedgeto
        for bv in path:
            if self.childs[bv] is None:
                nblists = [[self.adj_code[j]
                            for j in range(self.adj_start[bv], self.adj_start[bv + 1])]]
            elif self.mybestedges[bv] is not None:
                nblists = [self.mybestedges[bv]]
            else:
                nblists = [[self.adj_code[j]
                            for j in range(self.adj_start[leaf], self.adj_start[leaf + 1])]
                           for leaf in self.blossom_leaves(bv)]
            for nblist in nblists:
                for dd in nblist:
                    j = self.code_dst(dd)
                    if self.inblossom[j] == b:
                        dd = dd ^ 1
                        j = self.code_dst(dd)
                    bj = self.inblossom[j]
                    if (bj != b and self.label[bj] == LABEL_S
                            and (betv[bj] == -1
                                 or self.slack(dd >> 1) < self.slack(betv[bj] >> 1))):
                        betv[bj] = dd
            self.mybestedges[bv] = None
            self.bestedge[bv] = -1
        mybest = [dd for dd in bestedgeto if dd != -1]
        self.mybestedges[b] = mybest
        best = -1
        bestslack = 0.0
        for dd in mybest:
            sl = self.slack(dd >> 1)
            if best == -1 or sl < bestslack:
                best = dd
                bestslack = sl
        self.bestedge[b] = best

    def _expand_recurse(self, long long b, bint endstage):
        cdef long long s, leaf, j, jstep, d, dnext, w, bw, bv, vfound
        for s in self.childs[b]:
            self.blossomparent[s] = -1
            if s < self.n:
                self.inblossom[s] = s
            elif endstage and self.dualvar[s] == 0.0:
                yield s
            else:
                for leaf in self.blossom_leaves(s):
                    self.inblossom[leaf] = s
        if (not endstage) and self.label[b] == LABEL_T:
            entrychild = self.inblossom[self.code_dst(self.labeledge[b])]
            j = self.childs[b].index(entrychild)
            if j & 1:
                j -= len(self.childs[b])
                jstep = 1
            else:
                jstep = -1
            d = self.labeledge[b]
            while j != 0:
                if jstep == 1:
                    dnext = self.bedges[b][j]
                else:
                    dnext = self.bedges[b][j - 1] ^ 1
                self.label[self.code_dst(d)] = LABEL_FREE
                self.label[self.code_dst(dnext)] = LABEL_FREE
                self.assign_label(self.code_dst(d), LABEL_T, d)
                self.allowedge[dnext >> 1] = 1
                j += jstep
                if jstep == 1:
                    d = self.bedges[b][j]
                else:
                    d = self.bedges[b][j - 1] ^ 1
                self.allowedge[d >> 1] = 1
                j += jstep
            bw = self.childs[b][j]
            w = self.code_dst(d)
            self.label[w] = LABEL_T
            self.label[bw] = LABEL_T
            self.labeledge[w] = d
            self.labeledge[bw] = d
            self.bestedge[bw] = -1
            j += jstep
            while self.childs[b][j] != entrychild:
                bv = self.childs[b][j]
                if self.label[bv] == LABEL_S:
                    j += jstep
                    continue
                vfound = -1
                for leaf in self.blossom_leaves(bv):
                    if self.label[leaf] != LABEL_FREE:
                        vfound = leaf
                        break
                if vfound != -1:
                    self.label[vfound] = LABEL_FREE
                    self.label[self.code_dst(self.mate[self.blossombase[bv]])] = LABEL_FREE
                    self.assign_label(vfound, LABEL_T, self.labeledge[vfound])
                j += jstep
        self.label[b] = LABEL_FREE
        self.labeledge[b] = -1
        self.bestedge[b] = -1
        self.blossomparent[b] = -1
        self.blossombase[b] = -1
        self.childs[b] = None
        self.bedges[b] = None
        self.mybestedges[b] = None
        self.dualvar[b] = 0.0
        self.unusedblossoms.append(b)

    cdef void expand_blossom(self, long long bexp, bint endstage):
        stack = [self._expand_recurse(bexp, endstage)]
        cdef bint advanced
        while stack:
            top = stack[-1]
            advanced = False
            for s in top:
                stack.append(self._expand_recurse(s, endstage))
                advanced = True
                break
            if not advanced:
                stack.pop()

    def _augment_recurse(self, long long b, long long v):
        cdef long long t, i, j, jstep, d
        t = v
        while self.blossomparent[t] != b:
            t = self.blossomparent[t]
        if t >= self.n:
            yield (t, v)
        i = j = self.childs[b].index(t)
        if i & 1:
            j -= len(self.childs[b])
            jstep = 1
        else:
            jstep = -1
        while j != 0:
            j += jstep
            t = self.childs[b][j]
            if jstep == 1:
                d = self.bedges[b][j]
            else:
                d = self.bedges[b][j - 1] ^ 1
            if t >= self.n:
                yield (t, self.code_src(d))
            j += jstep
            t = self.childs[b][j]
            if t >= self.n:
                yield (t, self.code_dst(d))
            self.mate[self.code_src(d)] = d
            self.mate[self.code_dst(d)] = d ^ 1
        self.childs[b] = self.childs[b][i:] + self.childs[b][:i]
        self.bedges[b] = self.bedges[b][i:] + self.bedges[b][:i]
        self.blossombase[b] = self.blossombase[self.childs[b][0]]

    cdef void augment_blossom(self, long long baug, long long v):
        stack = [self._augment_recurse(baug, v)]
        cdef bint advanced
        while stack:
            top = stack[-1]
            advanced = False
            for args in top:
                stack.append(self._augment_recurse(args[0], args[1]))
                advanced = True
                break
            if not advanced:
                stack.pop()

    cdef void augment_matching(self, long long d):
        cdef long long s, dd, bs, t, bt, j, dnext
        cdef long long si
        for si in range(2):
            if si == 0:
                s = self.code_src(d)
                dd = d
            else:
                s = self.code_dst(d)
                dd = d ^ 1
            while True:
                bs = self.inblossom[s]
                if bs >= self.n:
                    self.augment_blossom(bs, s)
                self.mate[s] = dd
                if self.labeledge[bs] == -1:
                    break
                t = self.code_src(self.labeledge[bs])
                bt = self.inblossom[t]
                dnext = self.labeledge[bt]
                s = self.code_src(dnext)
                j = self.code_dst(dnext)
                if bt >= self.n:
                    self.augment_blossom(bt, j)
                self.mate[j] = dnext ^ 1
                dd = dnext

    def solve(self):
        cdef long long n = self.n
        cdef long long m = self.m
        cdef long long i, v, w, k, d, b, bv, bw, base
        cdef long long deltatype, deltaedge, deltablossom, lbl
        cdef double delta, kslack, dcur
        cdef bint augmented

        while True:
            for i in range(2 * n):
                self.label[i] = LABEL_FREE
                self.labeledge[i] = -1
                self.bestedge[i] = -1
            for b in range(n, 2 * n):
                if self.childs[b] is not None:
                    self.mybestedges[b] = None
            for k in range(m):
                self.allowedge[k] = 0
            del self.queue[:]

            for v in range(n):
                if self.mate[v] == -1 and self.label[self.inblossom[v]] == LABEL_FREE:
                    self.assign_label(v, LABEL_S, -1)

            augmented = False
            while True:
                while self.queue and not augmented:
                    v = self.queue.pop()
                    for i in range(self.adj_start[v], self.adj_start[v + 1]):
                        d = self.adj_code[i]
                        k = d >> 1
                        w = self.code_dst(d)
                        bv = self.inblossom[v]
                        bw = self.inblossom[w]
                        if bv == bw:
                            continue
                        kslack = 0.0
                        if not self.allowedge[k]:
                            kslack = self.slack(k)
                            if kslack <= 0.0:
                                self.allowedge[k] = 1
                        if self.allowedge[k]:
                            if self.label[bw] == LABEL_FREE:
                                self.assign_label(w, LABEL_T, d)
                            elif self.label[bw] == LABEL_S:
                                base = self.scan_blossom(v, w)
                                if base >= 0:
                                    self.add_blossom(base, d)
                                else:
                                    self.augment_matching(d)
                                    augmented = True
                                    break
                            elif self.label[w] == LABEL_FREE:
                                self.label[w] = LABEL_T
                                self.labeledge[w] = d
                        elif self.label[bw] == LABEL_S:
                            if (self.bestedge[bv] == -1
                                    or kslack < self.slack(self.bestedge[bv] >> 1)):
                                self.bestedge[bv] = d
                        elif self.label[w] == LABEL_FREE:
                            if (self.bestedge[w] == -1
                                    or kslack < self.slack(self.bestedge[w] >> 1)):
                                self.bestedge[w] = d

                if augmented:
                    break

                deltatype = 1
                delta = self.dualvar[0]
                for v in range(1, n):
                    if self.dualvar[v] < delta:
                        delta = self.dualvar[v]
                deltaedge = -1
                deltablossom = -1

                for v in range(n):
                    if (self.label[self.inblossom[v]] == LABEL_FREE
                            and self.bestedge[v] != -1):
                        dcur = self.slack(self.bestedge[v] >> 1)
                        if dcur < delta:
                            delta = dcur
                            deltatype = 2
                            deltaedge = self.bestedge[v]

                for b in range(2 * n):
                    if (self.blossomparent[b] == -1 and self.label[b] == LABEL_S
                            and self.bestedge[b] != -1
                            and (b < n or self.childs[b] is not None)):
                        dcur = self.slack(self.bestedge[b] >> 1) / 2.0
                        if dcur < delta:
                            delta = dcur
                            deltatype = 3
                            deltaedge = self.bestedge[b]

                for b in range(n, 2 * n):
                    if (self.childs[b] is not None and self.blossomparent[b] == -1
                            and self.label[b] == LABEL_T and self.dualvar[b] < delta):
                        delta = self.dualvar[b]
                        deltatype = 4
                        deltablossom = b

                for v in range(n):
                    lbl = self.label[self.inblossom[v]]
                    if lbl == LABEL_S:
                        self.dualvar[v] -= delta
                    elif lbl == LABEL_T:
                        self.dualvar[v] += delta
                for b in range(n, 2 * n):
                    if self.childs[b] is not None and self.blossomparent[b] == -1:
                        if self.label[b] == LABEL_S:
                            self.dualvar[b] += delta
                        elif self.label[b] == LABEL_T:
                            self.dualvar[b] -= delta

                if deltatype == 1:
                    break
                elif deltatype == 2:
                    self.allowedge[deltaedge >> 1] = 1
                    self.queue.append(self.code_src(deltaedge))
                elif deltatype == 3:
                    self.allowedge[deltaedge >> 1] = 1
                    self.queue.append(self.code_src(deltaedge))
                else:
                    self.expand_blossom(deltablossom, False)

            if not augmented:
                break

            for b in range(n, 2 * n):
                if (self.childs[b] is not None and self.blossomparent[b] == -1
                        and self.label[b] == LABEL_S and self.dualvar[b] == 0.0):
                    self.expand_blossom(b, True)

        out = []
        for v in range(n):
            out.append(self.code_dst(self.mate[v]) if self.mate[v] != -1 else -1)
        return out


def solve(num_vertex, edge_u, edge_v, edge_w):
    """Drop-in replacement for ``_blossom.solve``."""
    n = int(num_vertex)
    if n == 0 or len(edge_u) == 0:
        return [-1] * n
    return _Solver(n, edge_u, edge_v, edge_w).solve()
