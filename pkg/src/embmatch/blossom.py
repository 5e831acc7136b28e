"""Primal-dual blossom algorithm for maximum-weight matching.

One core serves two modes:

* weighted mode (``max_cardinality=True`` on a transformed weight matrix)
  implements minimum-cost perfect matching for the exact solvers;
* cardinality mode (all weights equal) implements maximum-cardinality
  matching on filtered subgraphs, optionally warm-started from a previous
  matching.

The algorithm maintains dual variables (scaled by 2 so slacks are exact
sums/differences of inputs) and grows alternating trees from single
vertices, shrinking odd cycles into blossoms.  On termination the duals
certify optimality; :func:`verify_optimum` re-checks the complementary
slackness conditions from scratch with a float tolerance.

Vertices are integers 0..n-1.  Non-trivial blossoms are ``_Blossom``
instances; bookkeeping dicts are keyed by either.
"""

from __future__ import annotations

from dataclasses import dataclass


class CertificationError(RuntimeError):
    """Raised when a solution fails the complementary-slackness check."""


class _Blossom:
    """A non-trivial blossom: an odd cycle of sub-blossoms.

    ``childs`` lists the sub-blossoms in cycle order starting at the base;
    ``edges[i] = (v, w)`` connects childs[i] to childs[i+1] (wrapping).
    ``mybestedges`` caches least-slack edges to neighbouring S-blossoms
    for the delta3 computation.
    """

    __slots__ = ["childs", "edges", "mybestedges"]

    def leaves(self):
        stack = list(self.childs)
        while stack:
            t = stack.pop()
            if isinstance(t, _Blossom):
                stack.extend(t.childs)
            else:
                yield t


@dataclass
class BlossomState:
    """Final state of a run: the matching plus the dual certificate."""

    n: int
    mate: list                  # mate[v] = partner vertex or -1
    dualvar: list               # 2x vertex duals
    blossomdual: dict           # blossom -> dual value
    blossomparent: dict         # vertex/blossom -> parent blossom or None
    edges: list                 # (i, j, w) triples the run was given
    max_cardinality: bool
    stages: int                 # number of successful augmentations

    def pairs(self):
        return [(v, self.mate[v]) for v in range(self.n)
                if self.mate[v] > v]


def max_weight_matching(n, neighbors, weights, max_cardinality=False,
                        initial_mate=None) -> BlossomState:
    """Maximum-weight matching on the subgraph given by adjacency lists.

    ``neighbors[v]`` lists the vertices adjacent to ``v`` (symmetric);
    ``weights[v][w]`` is the edge weight (only read for listed pairs).
    With ``max_cardinality`` the result has maximum cardinality and
    maximum weight among such matchings.

    ``initial_mate`` warm-starts from an existing matching; every
    pre-matched edge must have the maximum edge weight (always true in
    cardinality mode, where all weights are equal), otherwise the dual
    invariants would not hold at the start.
    """
    mate = [-1] * n
    label = {}        # top blossom/vertex -> 1 (S) or 2 (T); 5 marks breadcrumbs
    labeledge = {}    # labeled blossom/vertex -> edge it was labeled through
    inblossom = list(range(n))
    blossomparent = {v: None for v in range(n)}
    blossombase = {v: v for v in range(n)}
    bestedge = {}
    blossomdual = {}
    allowedge = {}
    queue = []

    maxweight = 0.0
    for v in range(n):
        for w in neighbors[v]:
            if v < w and weights[v][w] > maxweight:
                maxweight = weights[v][w]
    dualvar = [maxweight] * n

    if initial_mate is not None:
        for v in range(n):
            w = initial_mate[v]
            if w == -1:
                continue
            if initial_mate[w] != v or v == w:
                raise ValueError("initial matching is not symmetric")
            if weights[v][w] != maxweight:
                raise ValueError(
                    "warm start requires every pre-matched edge to have "
                    "the maximum edge weight"
                )
            mate[v] = w

    # 2 * slack of an edge; valid only across distinct top blossoms.
    def slack(v, w):
        return dualvar[v] + dualvar[w] - 2 * weights[v][w]

    # Assign label t to the top blossom containing w, reached via v.
    def assign_label(w, t, v):
        b = inblossom[w]
        assert label.get(w) is None and label.get(b) is None
        label[w] = label[b] = t
        if v is not None:
            labeledge[w] = labeledge[b] = (v, w)
        else:
            labeledge[w] = labeledge[b] = None
        bestedge[w] = bestedge[b] = None
        if t == 1:
            # New S-blossom: scan its vertices.
            if isinstance(b, _Blossom):
                queue.extend(b.leaves())
            else:
                queue.append(b)
        elif t == 2:
            # New T-blossom: its base's mate becomes an S-vertex.
            base = blossombase[b]
            assign_label(mate[base], 1, base)

    # Trace back from S-vertices v and w.  Returns the base vertex of a
    # new blossom, or -1 if the trails meet in two different trees
    # (an augmenting path).
    def scan_blossom(v, w):
        path = []
        base = -1
        while v is not None:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            assert label[b] == 1
            path.append(b)
            label[b] = 5
            if labeledge[b] is None:
                # Reached a single vertex: the root of this tree.
                assert mate[blossombase[b]] == -1
                v = None
            else:
                assert labeledge[b][0] == mate[blossombase[b]]
                v = labeledge[b][0]
                b = inblossom[v]
                assert label[b] == 2
                v = labeledge[b][0]
            if w is not None:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    # Shrink the cycle through S-vertices v, w and their common ancestor
    # into a new S-blossom.
    def add_blossom(base, v, w):
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = _Blossom()
        blossombase[b] = base
        blossomparent[b] = None
        blossomparent[bb] = b
        b.childs = path = []
        b.edges = edgs = [(v, w)]
        while bv != bb:
            blossomparent[bv] = b
            path.append(bv)
            edgs.append(labeledge[bv])
            assert label[bv] == 2 or (
                label[bv] == 1 and labeledge[bv][0] == mate[blossombase[bv]])
            v = labeledge[bv][0]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        edgs.reverse()
        while bw != bb:
            blossomparent[bw] = b
            path.append(bw)
            edgs.append((labeledge[bw][1], labeledge[bw][0]))
            assert label[bw] == 2 or (
                label[bw] == 1 and labeledge[bw][0] == mate[blossombase[bw]])
            w = labeledge[bw][0]
            bw = inblossom[w]
        assert label[bb] == 1
        label[b] = 1
        labeledge[b] = labeledge[bb]
        blossomdual[b] = 0
        for v in b.leaves():
            if label[inblossom[v]] == 2:
                # Former T-vertex becomes an S-vertex: scan it.
                queue.append(v)
            inblossom[v] = b
        # Merge least-slack edge lists of the sub-blossoms.
        bestedgeto = {}
        for bv in path:
            if isinstance(bv, _Blossom):
                if bv.mybestedges is not None:
                    nblist = bv.mybestedges
                    bv.mybestedges = None
                else:
                    nblist = [(v, w) for v in bv.leaves()
                              for w in neighbors[v] if v != w]
            else:
                nblist = [(bv, w) for w in neighbors[bv] if bv != w]
            for k in nblist:
                (i, j) = k
                if inblossom[j] == b:
                    i, j = j, i
                bj = inblossom[j]
                if (bj != b and label.get(bj) == 1
                        and ((bj not in bestedgeto)
                             or slack(i, j) < slack(*bestedgeto[bj]))):
                    bestedgeto[bj] = k
            bestedge[bv] = None
        b.mybestedges = list(bestedgeto.values())
        mybestedge = None
        mybestslack = None
        bestedge[b] = None
        for k in b.mybestedges:
            kslack = slack(*k)
            if mybestedge is None or kslack < mybestslack:
                mybestedge = k
                mybestslack = kslack
        bestedge[b] = mybestedge

    # Expand a top-level blossom back into its sub-blossoms.  Recursion
    # is flattened with a stack of generators.
    def expand_blossom(bloss, endstage):

        def _recurse(b, endstage):
            for s in b.childs:
                blossomparent[s] = None
                if isinstance(s, _Blossom):
                    if endstage and blossomdual[s] == 0:
                        yield s
                    else:
                        for v in s.leaves():
                            inblossom[v] = s
                else:
                    inblossom[s] = s
            # Mid-stage expansion of a T-blossom: relabel the even path
            # from the entry sub-blossom to the base, leave the rest
            # unlabeled-but-reachable.
            if (not endstage) and label.get(b) == 2:
                entrychild = inblossom[labeledge[b][1]]
                j = b.childs.index(entrychild)
                if j & 1:
                    j -= len(b.childs)
                    jstep = 1
                else:
                    jstep = -1
                v, w = labeledge[b]
                while j != 0:
                    if jstep == 1:
                        p, q = b.edges[j]
                    else:
                        q, p = b.edges[j - 1]
                    label[w] = None
                    label[q] = None
                    assign_label(w, 2, v)
                    allowedge[(p, q)] = allowedge[(q, p)] = True
                    j += jstep
                    if jstep == 1:
                        v, w = b.edges[j]
                    else:
                        w, v = b.edges[j - 1]
                    allowedge[(v, w)] = allowedge[(w, v)] = True
                    j += jstep
                bw = b.childs[j]
                label[w] = label[bw] = 2
                labeledge[w] = labeledge[bw] = (v, w)
                bestedge[bw] = None
                j += jstep
                while b.childs[j] != entrychild:
                    bv = b.childs[j]
                    if label.get(bv) == 1:
                        j += jstep
                        continue
                    if isinstance(bv, _Blossom):
                        for v in bv.leaves():
                            if label.get(v):
                                break
                    else:
                        v = bv
                    if label.get(v):
                        assert label[v] == 2
                        assert inblossom[v] == bv
                        label[v] = None
                        label[mate[blossombase[bv]]] = None
                        assign_label(v, 2, labeledge[v][0])
                    j += jstep
            label.pop(b, None)
            labeledge.pop(b, None)
            bestedge.pop(b, None)
            del blossomparent[b]
            del blossombase[b]
            del blossomdual[b]

        stack = [_recurse(bloss, endstage)]
        while stack:
            top = stack[-1]
            for s in top:
                stack.append(_recurse(s, endstage))
                break
            else:
                stack.pop()

    # Swap matched/unmatched edges along the path through blossom b from
    # vertex v down to the base, rotating the blossom onto its new base.
    def augment_blossom(bloss, vert):

        def _recurse(b, v):
            t = v
            while blossomparent[t] != b:
                t = blossomparent[t]
            if isinstance(t, _Blossom):
                yield (t, v)
            i = j = b.childs.index(t)
            if i & 1:
                j -= len(b.childs)
                jstep = 1
            else:
                jstep = -1
            while j != 0:
                j += jstep
                t = b.childs[j]
                if jstep == 1:
                    w, x = b.edges[j]
                else:
                    x, w = b.edges[j - 1]
                if isinstance(t, _Blossom):
                    yield (t, w)
                j += jstep
                t = b.childs[j]
                if isinstance(t, _Blossom):
                    yield (t, x)
                mate[w] = x
                mate[x] = w
            b.childs = b.childs[i:] + b.childs[:i]
            b.edges = b.edges[i:] + b.edges[:i]
            blossombase[b] = blossombase[b.childs[0]]
            assert blossombase[b] == v

        stack = [_recurse(bloss, vert)]
        while stack:
            top = stack[-1]
            for args in top:
                stack.append(_recurse(*args))
                break
            else:
                stack.pop()

    # Augment along the path between the tree roots of S-vertices v, w.
    def augment_matching(v, w):
        for s, j in ((v, w), (w, v)):
            while 1:
                bs = inblossom[s]
                assert label[bs] == 1
                assert (labeledge[bs] is None
                        and mate[blossombase[bs]] == -1) or (
                    labeledge[bs][0] == mate[blossombase[bs]])
                if isinstance(bs, _Blossom):
                    augment_blossom(bs, s)
                mate[s] = j
                if labeledge[bs] is None:
                    break
                t = labeledge[bs][0]
                bt = inblossom[t]
                assert label[bt] == 2
                s, j = labeledge[bt]
                assert blossombase[bt] == t
                if isinstance(bt, _Blossom):
                    augment_blossom(bt, j)
                mate[j] = s

    stages = 0
    while 1:
        # A stage: find one augmenting path and use it, or stop.
        label.clear()
        labeledge.clear()
        bestedge.clear()
        for b in blossomdual:
            b.mybestedges = None
        allowedge.clear()
        queue[:] = []

        for v in range(n):
            if mate[v] == -1 and label.get(inblossom[v]) is None:
                assign_label(v, 1, None)

        augmented = 0
        while 1:
            # A substage: scan for an augmenting path among tight edges,
            # then adjust duals if none was found.
            while queue and not augmented:
                v = queue.pop()
                assert label[inblossom[v]] == 1

                for w in neighbors[v]:
                    if w == v:
                        continue
                    bv = inblossom[v]
                    bw = inblossom[w]
                    if bv == bw:
                        continue
                    if (v, w) not in allowedge:
                        kslack = slack(v, w)
                        if kslack <= 0:
                            allowedge[(v, w)] = allowedge[(w, v)] = True
                    if (v, w) in allowedge:
                        if label.get(bw) is None:
                            assign_label(w, 2, v)
                        elif label.get(bw) == 1:
                            base = scan_blossom(v, w)
                            if base != -1:
                                add_blossom(base, v, w)
                            else:
                                augment_matching(v, w)
                                augmented = 1
                                break
                        elif label.get(w) is None:
                            # Inside a T-blossom but not yet reached from
                            # outside; remember the entry edge for later
                            # expansion.
                            assert label[bw] == 2
                            label[w] = 2
                            labeledge[w] = (v, w)
                    elif label.get(bw) == 1:
                        if bestedge.get(bv) is None or \
                                kslack < slack(*bestedge[bv]):
                            bestedge[bv] = (v, w)
                    elif label.get(w) is None:
                        if bestedge.get(w) is None or \
                                kslack < slack(*bestedge[w]):
                            bestedge[w] = (v, w)

            if augmented:
                break

            # Dual adjustment; all quantities are 2x scaled.
            deltatype = -1
            delta = deltaedge = deltablossom = None

            if not max_cardinality:
                deltatype = 1
                delta = min(dualvar)

            for v in range(n):
                if label.get(inblossom[v]) is None and \
                        bestedge.get(v) is not None:
                    d = slack(*bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]

            for b in blossomparent:
                if (blossomparent[b] is None and label.get(b) == 1
                        and bestedge.get(b) is not None):
                    kslack = slack(*bestedge[b])
                    d = kslack / 2.0
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]

            for b in blossomdual:
                if (blossomparent[b] is None and label.get(b) == 2
                        and (deltatype == -1 or blossomdual[b] < delta)):
                    delta = blossomdual[b]
                    deltatype = 4
                    deltablossom = b

            if deltatype == -1:
                # Max-cardinality optimum reached; one last dual update
                # keeps the certificate verifiable.
                assert max_cardinality
                deltatype = 1
                delta = max(0, min(dualvar))

            for v in range(n):
                vlabel = label.get(inblossom[v])
                if vlabel == 1:
                    dualvar[v] -= delta
                elif vlabel == 2:
                    dualvar[v] += delta
            for b in blossomdual:
                if blossomparent[b] is None:
                    blabel = label.get(b)
                    if blabel == 1:
                        blossomdual[b] += delta
                    elif blabel == 2:
                        blossomdual[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2:
                (v, w) = deltaedge
                assert label[inblossom[v]] == 1
                allowedge[(v, w)] = allowedge[(w, v)] = True
                queue.append(v)
            elif deltatype == 3:
                (v, w) = deltaedge
                allowedge[(v, w)] = allowedge[(w, v)] = True
                assert label[inblossom[v]] == 1
                queue.append(v)
            elif deltatype == 4:
                expand_blossom(deltablossom, False)

        for v in range(n):
            if mate[v] != -1:
                assert mate[mate[v]] == v

        if not augmented:
            break
        stages += 1

        # Expand S-blossoms whose dual dropped to zero.
        for b in list(blossomdual.keys()):
            if b not in blossomdual:
                continue
            if blossomparent[b] is None and label.get(b) == 1 \
                    and blossomdual[b] == 0:
                expand_blossom(b, True)

    edge_list = [(v, w, weights[v][w])
                 for v in range(n) for w in neighbors[v] if v < w]
    return BlossomState(n=n, mate=mate, dualvar=dualvar,
                        blossomdual=blossomdual,
                        blossomparent=blossomparent, edges=edge_list,
                        max_cardinality=max_cardinality, stages=stages)


def verify_optimum(state: BlossomState, tolerance: float) -> None:
    """Re-check the complementary slackness conditions of a finished run.

    Conditions, each to the given absolute tolerance:
    dual feasibility (edge slacks >= 0, blossom duals >= 0, vertex duals
    >= 0 after the max-cardinality offset), tightness of matched edges,
    zero duals on single vertices, and fullness of every blossom with a
    positive dual (its cycle edges alternate into (|B|-1)/2 matched
    pairs).

    Raises :class:`CertificationError` on the first violated condition.
    """
    mate = state.mate
    dualvar = state.dualvar

    def fail(msg):
        raise CertificationError(f"optimality certificate violated: {msg}")

    if state.max_cardinality:
        # Vertex duals may end negative; shift them by a common offset.
        vdualoffset = max(0, -min(dualvar))
    else:
        vdualoffset = 0
    if min(dualvar) + vdualoffset < -tolerance:
        fail("negative vertex dual")
    if state.blossomdual and min(state.blossomdual.values()) < -tolerance:
        fail("negative blossom dual")

    for (i, j, wt) in state.edges:
        s = dualvar[i] + dualvar[j] - 2 * wt
        iblossoms = [i]
        jblossoms = [j]
        while state.blossomparent[iblossoms[-1]] is not None:
            iblossoms.append(state.blossomparent[iblossoms[-1]])
        while state.blossomparent[jblossoms[-1]] is not None:
            jblossoms.append(state.blossomparent[jblossoms[-1]])
        iblossoms.reverse()
        jblossoms.reverse()
        for bi, bj in zip(iblossoms, jblossoms):
            if bi != bj:
                break
            s += 2 * state.blossomdual[bi]
        if s < -tolerance:
            fail(f"edge ({i}, {j}) has negative slack")
        if mate[i] == j and abs(s) > tolerance:
            fail(f"matched edge ({i}, {j}) is not tight")

    for v in range(state.n):
        if mate[v] == -1 and abs(dualvar[v] + vdualoffset) > tolerance:
            fail(f"single vertex {v} has nonzero dual")

    for b, dual in state.blossomdual.items():
        if dual > tolerance:
            if len(b.edges) % 2 != 1:
                fail("blossom with positive dual has even cycle")
            for i, j in b.edges[1::2]:
                if mate[i] != j or mate[j] != i:
                    fail("blossom with positive dual is not full")
