"""Exact maximum-weight matching on general graphs (non-perfect variant).

Primal-dual blossom method after Galil's survey formulation: alternating
trees are grown from every unmatched vertex, tight edges extend the trees,
odd cycles are contracted into blossoms, and dual variables are pumped by
the smallest of the four classical deltas until no augmenting path remains.
Runs in O(n^3); all state lives in flat integer/float lists so the compiled
twin (``_blossom_cy.pyx``) is a line-for-line port.

Directed edge codes: edge k between (u, v) is traversed as code ``2k``
(u -> v) or ``2k | 1`` (v -> u); ``code >> 1`` recovers the edge index and
``code ^ 1`` reverses it. Matched edges, tree edges and best-edge handles
are all stored as codes so every array is a plain int array.

Labels: 0 = free, 1 = S (outer), 2 = T (inner), 5 = S with breadcrumb.
Blossom ids: vertices 0..n-1 are their own trivial blossoms, ids n..2n-1
are recycled slots for non-trivial blossoms.
"""

from __future__ import annotations

_LABEL_FREE = 0
_LABEL_S = 1
_LABEL_T = 2
_BREADCRUMB = 4


def solve(num_vertex, edge_u, edge_v, edge_w):
    """Return ``mate`` with mate[v] = matched partner vertex or -1.

    Weights must be non-negative (negative edges never help a non-perfect
    maximum-weight matching and are rejected upstream).
    """
    n = num_vertex
    m = len(edge_u)
    if n == 0 or m == 0:
        return [-1] * n

    maxweight = max(edge_w)

    # Adjacency as CSR over directed codes with source = the indexing vertex.
    deg = [0] * n
    for k in range(m):
        deg[edge_u[k]] += 1
        deg[edge_v[k]] += 1
    adj_start = [0] * (n + 1)
    for v in range(n):
        adj_start[v + 1] = adj_start[v] + deg[v]
    adj_code = [0] * (2 * m)
    fill = adj_start[:n]
    for k in range(m):
        u = edge_u[k]
        v = edge_v[k]
        adj_code[fill[u]] = 2 * k
        fill[u] += 1
        adj_code[fill[v]] = 2 * k + 1
        fill[v] += 1

    def code_src(d):
        return edge_v[d >> 1] if d & 1 else edge_u[d >> 1]

    def code_dst(d):
        return edge_u[d >> 1] if d & 1 else edge_v[d >> 1]

    # mate[v] = code of the matched edge oriented v -> partner, or -1.
    mate = [-1] * n
    # Per top-level blossom (and per vertex inside expanding T-blossoms).
    label = [_LABEL_FREE] * (2 * n)
    # labeledge[b] = code whose destination lies inside b, or -1.
    labeledge = [-1] * (2 * n)
    inblossom = list(range(n))
    blossomparent = [-1] * (2 * n)
    blossombase = list(range(n)) + [-1] * n
    # bestedge[b] = least-slack non-tight edge code seen from/to b, or -1.
    bestedge = [-1] * (2 * n)
    # Non-trivial blossom structure; childs[b] is None for unused slots.
    childs = [None] * (2 * n)
    bedges = [None] * (2 * n)  # connecting codes, bedges[b][i]: childs[i]->childs[i+1]
    mybestedges = [None] * (2 * n)
    unusedblossoms = list(range(n, 2 * n))
    # dualvar[v] = 2*u(v) for vertices, z(b) for blossom slots.
    dualvar = [maxweight] * n + [0] * n
    allowedge = [False] * m
    queue = []

    def slack(k):
        return dualvar[edge_u[k]] + dualvar[edge_v[k]] - 2 * edge_w[k]

    def blossom_leaves(b):
        if b < n:
            yield b
            return
        stack = list(childs[b])
        while stack:
            t = stack.pop()
            if t < n:
                yield t
            else:
                stack.extend(childs[t])

    def assign_label(w, t, d):
        # Label the top-level blossom containing w; d is the code of the
        # edge through which the label arrives (dst == w), -1 for roots.
        b = inblossom[w]
        label[w] = label[b] = t
        labeledge[w] = labeledge[b] = d
        bestedge[w] = bestedge[b] = -1
        if t == _LABEL_S:
            queue.extend(blossom_leaves(b))
        else:
            # The base is the only vertex of a T-blossom matched outward; its
            # partner becomes S through the matched edge (src = base).
            base = blossombase[b]
            assign_label(code_dst(mate[base]), _LABEL_S, mate[base])

    def scan_blossom(v, w):
        # Trace back from both S-vertices; a common ancestor base means a new
        # blossom, reaching two distinct roots means an augmenting path (-1).
        path = []
        base = -1
        while v != -1:
            b = inblossom[v]
            if label[b] & _BREADCRUMB:
                base = blossombase[b]
                break
            path.append(b)
            label[b] = _LABEL_S | _BREADCRUMB
            if labeledge[b] == -1:
                v = -1
            else:
                v = code_src(labeledge[b])
                b = inblossom[v]
                v = code_src(labeledge[b])
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = _LABEL_S
        return base

    def add_blossom(base, d):
        # Contract the odd cycle closed by tight edge code d (both ends S).
        v = code_src(d)
        w = code_dst(d)
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = unusedblossoms.pop()
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        path = []
        edgs = [d]
        while bv != bb:
            blossomparent[bv] = b
            path.append(bv)
            edgs.append(labeledge[bv])
            v = code_src(labeledge[bv])
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        edgs.reverse()
        while bw != bb:
            blossomparent[bw] = b
            path.append(bw)
            edgs.append(labeledge[bw] ^ 1)
            w = code_src(labeledge[bw])
            bw = inblossom[w]
        childs[b] = path
        bedges[b] = edgs
        label[b] = _LABEL_S
        labeledge[b] = labeledge[bb]
        dualvar[b] = 0
        for leaf in blossom_leaves(b):
            if label[inblossom[leaf]] == _LABEL_T:
                queue.append(leaf)
            inblossom[leaf] = b
        # Merge least-slack edge lists of the sub-blossoms.
        bestedgeto = [-1] * (2 * n)
        for bv in path:
            if childs[bv] is None:
                nblists = [[adj_code[i] for i in range(adj_start[bv], adj_start[bv + 1])]]
            elif mybestedges[bv] is not None:
                nblists = [mybestedges[bv]]
            else:
                nblists = [[adj_code[i] for i in range(adj_start[leaf], adj_start[leaf + 1])]
                           for leaf in blossom_leaves(bv)]
            for nblist in nblists:
                for dd in nblist:
                    j = code_dst(dd)
                    if inblossom[j] == b:
                        dd = dd ^ 1
                        j = code_dst(dd)
                    bj = inblossom[j]
                    if (bj != b and label[bj] == _LABEL_S
                            and (bestedgeto[bj] == -1
                                 or slack(dd >> 1) < slack(bestedgeto[bj] >> 1))):
                        bestedgeto[bj] = dd
            mybestedges[bv] = None
            bestedge[bv] = -1
        mybestedges[b] = [dd for dd in bestedgeto if dd != -1]
        best = -1
        bestslack = 0.0
        for dd in mybestedges[b]:
            sl = slack(dd >> 1)
            if best == -1 or sl < bestslack:
                best = dd
                bestslack = sl
        bestedge[b] = best

    def expand_blossom(bexp, endstage):
        # Trampoline over the recursive expansion to keep the stack flat.
        def _recurse(b, endstage):
            for s in childs[b]:
                blossomparent[s] = -1
                if s < n:
                    inblossom[s] = s
                elif endstage and dualvar[s] == 0:
                    yield s
                else:
                    for leaf in blossom_leaves(s):
                        inblossom[leaf] = s
            if (not endstage) and label[b] == _LABEL_T:
                # Relabel the even-path sub-blossoms from the entry child down
                # to the base, re-allowing the traversed tight edges.
                entrychild = inblossom[code_dst(labeledge[b])]
                j = childs[b].index(entrychild)
                if j & 1:
                    j -= len(childs[b])
                    jstep = 1
                else:
                    jstep = -1
                d = labeledge[b]
                while j != 0:
                    if jstep == 1:
                        dnext = bedges[b][j]
                    else:
                        dnext = bedges[b][j - 1] ^ 1
                    label[code_dst(d)] = _LABEL_FREE
                    label[code_dst(dnext)] = _LABEL_FREE
                    assign_label(code_dst(d), _LABEL_T, d)
                    allowedge[dnext >> 1] = True
                    j += jstep
                    if jstep == 1:
                        d = bedges[b][j]
                    else:
                        d = bedges[b][j - 1] ^ 1
                    allowedge[d >> 1] = True
                    j += jstep
                bw = childs[b][j]
                w = code_dst(d)
                label[w] = label[bw] = _LABEL_T
                labeledge[w] = labeledge[bw] = d
                bestedge[bw] = -1
                j += jstep
                while childs[b][j] != entrychild:
                    bv = childs[b][j]
                    if label[bv] == _LABEL_S:
                        j += jstep
                        continue
                    vfound = -1
                    for leaf in blossom_leaves(bv):
                        if label[leaf] != _LABEL_FREE:
                            vfound = leaf
                            break
                    if vfound != -1:
                        label[vfound] = _LABEL_FREE
                        label[code_dst(mate[blossombase[bv]])] = _LABEL_FREE
                        assign_label(vfound, _LABEL_T, labeledge[vfound])
                    j += jstep
            label[b] = _LABEL_FREE
            labeledge[b] = -1
            bestedge[b] = -1
            blossomparent[b] = -1
            blossombase[b] = -1
            childs[b] = None
            bedges[b] = None
            mybestedges[b] = None
            dualvar[b] = 0
            unusedblossoms.append(b)

        stack = [_recurse(bexp, endstage)]
        while stack:
            top = stack[-1]
            advanced = False
            for s in top:
                stack.append(_recurse(s, endstage))
                advanced = True
                break
            if not advanced:
                stack.pop()

    def augment_blossom(baug, v):
        # Swap matched/unmatched along the even path from v to the base of
        # baug, rotating the blossom so v becomes the new base.
        def _recurse(b, v):
            t = v
            while blossomparent[t] != b:
                t = blossomparent[t]
            if t >= n:
                yield (t, v)
            i = j = childs[b].index(t)
            if i & 1:
                j -= len(childs[b])
                jstep = 1
            else:
                jstep = -1
            while j != 0:
                j += jstep
                t = childs[b][j]
                if jstep == 1:
                    d = bedges[b][j]
                else:
                    d = bedges[b][j - 1] ^ 1
                if t >= n:
                    yield (t, code_src(d))
                j += jstep
                t = childs[b][j]
                if t >= n:
                    yield (t, code_dst(d))
                mate[code_src(d)] = d
                mate[code_dst(d)] = d ^ 1
            childs[b] = childs[b][i:] + childs[b][:i]
            bedges[b] = bedges[b][i:] + bedges[b][:i]
            blossombase[b] = blossombase[childs[b][0]]

        stack = [_recurse(baug, v)]
        while stack:
            top = stack[-1]
            advanced = False
            for args in top:
                stack.append(_recurse(*args))
                advanced = True
                break
            if not advanced:
                stack.pop()

    def augment_matching(d):
        # d closes an augmenting path between two tree roots.
        for s, dd in ((code_src(d), d), (code_dst(d), d ^ 1)):
            while True:
                bs = inblossom[s]
                if bs >= n:
                    augment_blossom(bs, s)
                mate[s] = dd
                if labeledge[bs] == -1:
                    break
                t = code_src(labeledge[bs])
                bt = inblossom[t]
                dnext = labeledge[bt]
                s = code_src(dnext)
                j = code_dst(dnext)
                if bt >= n:
                    augment_blossom(bt, j)
                mate[j] = dnext ^ 1
                dd = dnext

    # Main loop: one stage per augmentation.
    while True:
        for i in range(2 * n):
            label[i] = _LABEL_FREE
            labeledge[i] = -1
            bestedge[i] = -1
        for b in range(n, 2 * n):
            if childs[b] is not None:
                mybestedges[b] = None
        for k in range(m):
            allowedge[k] = False
        del queue[:]

        for v in range(n):
            if mate[v] == -1 and label[inblossom[v]] == _LABEL_FREE:
                assign_label(v, _LABEL_S, -1)

        augmented = False
        while True:
            while queue and not augmented:
                v = queue.pop()
                for i in range(adj_start[v], adj_start[v + 1]):
                    d = adj_code[i]
                    k = d >> 1
                    w = code_dst(d)
                    bv = inblossom[v]
                    bw = inblossom[w]
                    if bv == bw:
                        continue
                    kslack = 0.0
                    if not allowedge[k]:
                        kslack = slack(k)
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[bw] == _LABEL_FREE:
                            assign_label(w, _LABEL_T, d)
                        elif label[bw] == _LABEL_S:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, d)
                            else:
                                augment_matching(d)
                                augmented = True
                                break
                        elif label[w] == _LABEL_FREE:
                            label[w] = _LABEL_T
                            labeledge[w] = d
                    elif label[bw] == _LABEL_S:
                        if bestedge[bv] == -1 or kslack < slack(bestedge[bv] >> 1):
                            bestedge[bv] = d
                    elif label[w] == _LABEL_FREE:
                        if bestedge[w] == -1 or kslack < slack(bestedge[w] >> 1):
                            bestedge[w] = d

            if augmented:
                break

            # Dual update: pick the smallest delta among the four bounds.
            deltatype = 1
            delta = min(dualvar[:n])
            deltaedge = -1
            deltablossom = -1

            for v in range(n):
                if label[inblossom[v]] == _LABEL_FREE and bestedge[v] != -1:
                    dcur = slack(bestedge[v] >> 1)
                    if dcur < delta:
                        delta = dcur
                        deltatype = 2
                        deltaedge = bestedge[v]

            for b in range(2 * n):
                if (blossomparent[b] == -1 and label[b] == _LABEL_S
                        and bestedge[b] != -1 and (b < n or childs[b] is not None)):
                    dcur = slack(bestedge[b] >> 1) / 2.0
                    if dcur < delta:
                        delta = dcur
                        deltatype = 3
                        deltaedge = bestedge[b]

            for b in range(n, 2 * n):
                if (childs[b] is not None and blossomparent[b] == -1
                        and label[b] == _LABEL_T and dualvar[b] < delta):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b

            for v in range(n):
                lbl = label[inblossom[v]]
                if lbl == _LABEL_S:
                    dualvar[v] -= delta
                elif lbl == _LABEL_T:
                    dualvar[v] += delta
            for b in range(n, 2 * n):
                if childs[b] is not None and blossomparent[b] == -1:
                    if label[b] == _LABEL_S:
                        dualvar[b] += delta
                    elif label[b] == _LABEL_T:
                        dualvar[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge >> 1] = True
                queue.append(code_src(deltaedge))
            elif deltatype == 3:
                allowedge[deltaedge >> 1] = True
                queue.append(code_src(deltaedge))
            else:
                expand_blossom(deltablossom, False)

        if not augmented:
            break

        # End of stage: expand S-blossoms whose dual dropped to zero.
        for b in range(n, 2 * n):
            if (childs[b] is not None and blossomparent[b] == -1
                    and label[b] == _LABEL_S and dualvar[b] == 0):
                expand_blossom(b, True)

    return [code_dst(mate[v]) if mate[v] != -1 else -1 for v in range(n)]
