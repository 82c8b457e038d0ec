# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled bitset kernel: same contract as ``_pykernel`` with 64-bit world masks.

Contexts needing more than 64 worlds raise the overflow flag; the Python
wrapper then reruns the query on the pure-Python backend.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memcpy, memset

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    MAXW = 64
    MAXA = 8
    MAXP = 8

cdef enum:
    TRUE, FALSE, ATOM, EXACT, ATLEAST, NOT, AND, K, KI, ANN

cdef enum:
    DPAL, EDPAL, ADPAL

MAX_WORLDS = MAXW
MAX_AGENTS = MAXA
MAX_ATOMS = MAXP


cdef struct Prog:
    int size
    int* op
    int* agent
    int64_t* arg
    int* left
    int* right
    int sem
    int nagents
    int natoms
    long long dpal_updates
    long long dpal_violations
    long long edpal_updates
    long long edpal_growth
    int overflow


cdef struct Ctx:
    int n
    uint64_t live
    uint64_t val[MAXP]
    int64_t depth[MAXA][MAXW]
    uint64_t succ[MAXA][MAXW]


cdef inline uint64_t lowmask(int n) nogil:
    if n >= 64:
        return <uint64_t>0xFFFFFFFFFFFFFFFF
    return ((<uint64_t>1) << n) - 1


cdef inline uint64_t bit(int w) nogil:
    return (<uint64_t>1) << w


cdef long long ctx_size(Prog* p, Ctx* c) nogil:
    cdef long long total = __builtin_popcountll(c.live)
    cdef uint64_t m
    cdef int a, w
    for a in range(p.nagents):
        m = c.live
        while m:
            w = __builtin_ctzll(m)
            m &= m - 1
            total += __builtin_popcountll(c.succ[a][w] & c.live)
    return total


cdef inline uint64_t spread(uint64_t mask, uint64_t phi, int* where) nogil:
    cdef uint64_t out = 0
    cdef uint64_t m = mask & phi
    cdef int w
    while m:
        w = __builtin_ctzll(m)
        m &= m - 1
        out |= bit(where[w])
    return out


cdef int dpal_update(Prog* p, Ctx* c, Ctx* out, uint64_t phi, int64_t k, int* where) nogil:
    cdef int n = c.n
    cdef int n2 = n + __builtin_popcountll(phi)
    cdef int i = 0, w, s, a, q, merged
    cdef uint64_t m, done, cls, cls1, low
    cdef int64_t d
    if n2 > MAXW:
        p.overflow = 1
        return 0
    m = phi
    while m:
        w = __builtin_ctzll(m)
        m &= m - 1
        where[w] = n + i
        i += 1
    out.n = n2
    out.live = lowmask(n2)
    low = lowmask(n)
    for q in range(p.natoms):
        out.val[q] = c.val[q] | spread(c.val[q], phi, where)
    for a in range(p.nagents):
        for w in range(n):
            out.depth[a][w] = c.depth[a][w]
        m = phi
        while m:
            w = __builtin_ctzll(m)
            m &= m - 1
            d = c.depth[a][w]
            out.depth[a][where[w]] = d if d < k else d - k
        done = 0
        for w in range(n):
            if (done >> w) & 1:
                continue
            cls = c.succ[a][w]
            done |= cls
            cls1 = spread(cls, phi, where)
            merged = 0
            m = cls & phi
            while m:
                s = __builtin_ctzll(m)
                m &= m - 1
                if c.depth[a][s] < k:
                    merged = 1
                    break
            if merged:
                cls = cls | cls1
                cls1 = cls
            m = cls & low
            while m:
                s = __builtin_ctzll(m)
                m &= m - 1
                out.succ[a][s] = cls
            m = cls1 & ~low
            while m:
                s = __builtin_ctzll(m)
                m &= m - 1
                out.succ[a][s] = cls1
    p.dpal_updates += 1
    if ctx_size(p, out) > 4 * ctx_size(p, c):
        p.dpal_violations += 1
    return 1


cdef void edpal_update(Prog* p, Ctx* c, Ctx* out, uint64_t phi, int64_t k) nogil:
    cdef int a, w
    out.n = c.n
    out.live = c.live & phi
    memcpy(out.val, c.val, sizeof(c.val))
    for a in range(p.nagents):
        for w in range(c.n):
            out.depth[a][w] = c.depth[a][w] - k
            out.succ[a][w] = c.succ[a][w]
    p.edpal_updates += 1
    if ctx_size(p, out) > ctx_size(p, c):
        p.edpal_growth += 1


cdef void adpal_update(Prog* p, Ctx* c, Ctx* out, uint64_t phi, int64_t k) nogil:
    cdef int a, w
    cdef uint64_t notphi = c.live & ~phi
    out.n = c.n
    out.live = c.live
    memcpy(out.val, c.val, sizeof(c.val))
    for a in range(p.nagents):
        for w in range(c.n):
            if c.depth[a][w] >= k:
                out.depth[a][w] = c.depth[a][w] - k
                out.succ[a][w] = c.succ[a][w] & (phi if (phi >> w) & 1 else notphi)
            else:
                out.depth[a][w] = c.depth[a][w]
                out.succ[a][w] = c.succ[a][w]


cdef uint64_t ev(Prog* p, Ctx* c, int node, uint64_t* memo, char* done) nogil:
    cdef int o = p.op[node]
    cdef uint64_t live = c.live
    cdef uint64_t r = 0, sub, bad, m, phi, got
    cdef int a, w
    cdef int64_t d
    cdef Ctx* child
    cdef uint64_t* cmemo
    cdef char* cdone
    cdef int where[MAXW]
    if done[node]:
        return memo[node]
    if o == TRUE:
        r = live
    elif o == FALSE:
        r = 0
    elif o == ATOM:
        r = c.val[p.arg[node]] & live
    elif o == EXACT or o == ATLEAST:
        a = p.agent[node]
        d = p.arg[node]
        m = live
        while m:
            w = __builtin_ctzll(m)
            m &= m - 1
            if (c.depth[a][w] == d) if o == EXACT else (c.depth[a][w] >= d):
                r |= bit(w)
    elif o == NOT:
        r = live & ~ev(p, c, p.left[node], memo, done)
    elif o == AND:
        r = ev(p, c, p.left[node], memo, done)
        r &= ev(p, c, p.right[node], memo, done)
    elif o == K or o == KI:
        sub = ev(p, c, p.left[node], memo, done)
        a = p.agent[node]
        d = p.arg[node]
        bad = live & ~sub
        m = live
        while m:
            w = __builtin_ctzll(m)
            m &= m - 1
            if (o == KI or c.depth[a][w] >= d) and not (c.succ[a][w] & bad):
                r |= bit(w)
    elif o == ANN:
        phi = ev(p, c, p.left[node], memo, done)
        if phi == 0:
            r = live
        else:
            child = <Ctx*>malloc(sizeof(Ctx))
            cmemo = <uint64_t*>malloc(p.size * sizeof(uint64_t))
            cdone = <char*>calloc(p.size, 1)
            d = p.arg[node]
            if p.sem == DPAL:
                if dpal_update(p, c, child, phi, d, where):
                    got = ev(p, child, p.right[node], cmemo, cdone)
                    r = live & ~phi
                    m = phi
                    while m:
                        w = __builtin_ctzll(m)
                        m &= m - 1
                        if (got >> where[w]) & 1:
                            r |= bit(w)
            else:
                if p.sem == EDPAL:
                    edpal_update(p, c, child, phi, d)
                else:
                    adpal_update(p, c, child, phi, d)
                r = (live & ~phi) | (ev(p, child, p.right[node], cmemo, cdone) & phi)
            free(child)
            free(cmemo)
            free(cdone)
    memo[node] = r
    done[node] = 1
    return r


cdef class _Program:
    """Owns the C copy of a compiled program."""

    cdef Prog p

    def __cinit__(self, prog, int sem):
        ops, agents, args, lefts, rights = prog
        cdef int size = len(ops)
        cdef int i
        self.p.size = size
        self.p.op = <int*>malloc(size * sizeof(int))
        self.p.agent = <int*>malloc(size * sizeof(int))
        self.p.arg = <int64_t*>malloc(size * sizeof(int64_t))
        self.p.left = <int*>malloc(size * sizeof(int))
        self.p.right = <int*>malloc(size * sizeof(int))
        for i in range(size):
            self.p.op[i] = ops[i]
            self.p.agent[i] = agents[i]
            self.p.arg[i] = args[i]
            self.p.left[i] = lefts[i]
            self.p.right[i] = rights[i]
        self.p.sem = sem
        self.p.dpal_updates = self.p.dpal_violations = 0
        self.p.edpal_updates = self.p.edpal_growth = 0
        self.p.overflow = 0

    def __dealloc__(self):
        free(self.p.op)
        free(self.p.agent)
        free(self.p.arg)
        free(self.p.left)
        free(self.p.right)

    def stats(self):
        return (self.p.dpal_updates, self.p.dpal_violations, self.p.edpal_updates, self.p.edpal_growth)


def _check_shape(int n, int nagents, int natoms):
    if n > MAXW or nagents > MAXA or natoms > MAXP:
        return False
    return True


def evaluate(prog, int root, int sem, int n, vals, depth, succ):
    """Truth mask of ``root`` on one model, as ``(mask, stats, overflow)``."""
    cdef int nagents = len(depth)
    cdef int natoms = len(vals)
    if not _check_shape(n, nagents, natoms):
        return 0, (0, 0, 0, 0), True
    cdef _Program prg = _Program(prog, sem)
    prg.p.nagents = nagents
    prg.p.natoms = natoms
    cdef Ctx* c = <Ctx*>malloc(sizeof(Ctx))
    cdef uint64_t* memo = <uint64_t*>malloc(prg.p.size * sizeof(uint64_t))
    cdef char* done = <char*>calloc(prg.p.size, 1)
    cdef int a, w, q
    cdef uint64_t r
    c.n = n
    c.live = lowmask(n)
    for q in range(natoms):
        c.val[q] = vals[q]
    for a in range(nagents):
        for w in range(n):
            c.depth[a][w] = depth[a][w]
            c.succ[a][w] = succ[a][w]
    with nogil:
        r = ev(&prg.p, c, root, memo, done)
    free(c)
    free(memo)
    free(done)
    return r, prg.stats(), bool(prg.p.overflow)


cdef int unambiguous(Prog* p, Ctx* c) nogil:
    cdef int a, w, t
    cdef uint64_t m
    for a in range(p.nagents):
        for w in range(c.n):
            m = c.succ[a][w]
            while m:
                t = __builtin_ctzll(m)
                m &= m - 1
                if c.depth[a][t] != c.depth[a][w]:
                    return 0
    return 1


def sweep(prog, int root, int sem, int n, frames, vals, reps, int mode, target,
          bint unambiguous_only, bint stop_first):
    """Same contract as ``_pykernel.sweep``."""
    cdef int nagents = len(reps)
    cdef int natoms = len(vals[0]) if len(vals) else 0
    if not _check_shape(n, nagents, natoms):
        return {"checked": 0, "hits": 0, "first": None, "stats": (0, 0, 0, 0), "overflow": True}
    cdef _Program prg = _Program(prog, sem)
    prg.p.nagents = nagents
    prg.p.natoms = natoms
    cdef int nframes = len(frames)
    cdef int nvals = len(vals)
    cdef int npos = nagents * n
    cdef int maxr = max([len(r) for r in reps] or [1])
    cdef uint64_t* fr = <uint64_t*>malloc((nframes * nagents * n + 1) * sizeof(uint64_t))
    cdef uint64_t* vv = <uint64_t*>malloc((nvals * natoms + 1) * sizeof(uint64_t))
    cdef int64_t* rp = <int64_t*>malloc((nagents * maxr + 1) * sizeof(int64_t))
    cdef int* nrep = <int*>malloc((nagents + 1) * sizeof(int))
    cdef int* digits = <int*>malloc((npos + 1) * sizeof(int))
    cdef uint64_t* memo = <uint64_t*>malloc(prg.p.size * sizeof(uint64_t))
    cdef char* done = <char*>malloc(prg.p.size)
    cdef Ctx* c = <Ctx*>malloc(sizeof(Ctx))
    cdef int fi, vi, a, w, q, i
    cdef uint64_t tgt = target
    cdef uint64_t mask
    cdef long long checked = 0, hits = 0
    cdef int found = 0, hit, stop = 0
    cdef int ffi = -1, fvi = -1
    cdef uint64_t fmask = 0
    cdef int* fdigits = <int*>malloc((npos + 1) * sizeof(int))
    for fi in range(nframes):
        for a in range(nagents):
            for w in range(n):
                fr[(fi * nagents + a) * n + w] = frames[fi][a][w]
    for vi in range(nvals):
        for q in range(natoms):
            vv[vi * natoms + q] = vals[vi][q]
    for a in range(nagents):
        nrep[a] = len(reps[a])
        for i in range(nrep[a]):
            rp[a * maxr + i] = reps[a][i]
    c.n = n
    c.live = lowmask(n)
    with nogil:
        for fi in range(nframes):
            if stop or prg.p.overflow:
                break
            for a in range(nagents):
                for w in range(n):
                    c.succ[a][w] = fr[(fi * nagents + a) * n + w]
            for vi in range(nvals):
                if stop or prg.p.overflow:
                    break
                for q in range(natoms):
                    c.val[q] = vv[vi * natoms + q]
                for i in range(npos):
                    digits[i] = 0
                while True:
                    for a in range(nagents):
                        for w in range(n):
                            c.depth[a][w] = rp[a * maxr + digits[a * n + w]]
                    if not unambiguous_only or unambiguous(&prg.p, c):
                        memset(done, 0, prg.p.size)
                        mask = ev(&prg.p, c, root, memo, done)
                        if prg.p.overflow:
                            break
                        checked += 1
                        if mode == 0:
                            hit = (mask & tgt) != tgt
                        else:
                            hit = (mask & tgt) != 0
                        if hit:
                            hits += 1
                            if not found:
                                found = 1
                                ffi = fi
                                fvi = vi
                                fmask = mask
                                for i in range(npos):
                                    fdigits[i] = digits[i]
                            if stop_first:
                                stop = 1
                                break
                    i = npos - 1
                    while i >= 0:
                        digits[i] += 1
                        if digits[i] < nrep[i // n]:
                            break
                        digits[i] = 0
                        i -= 1
                    if i < 0:
                        break
    first = None
    if found:
        first = (ffi, fvi, [fdigits[i] for i in range(npos)], fmask)
    overflow = bool(prg.p.overflow)
    free(fr)
    free(vv)
    free(rp)
    free(nrep)
    free(digits)
    free(fdigits)
    free(memo)
    free(done)
    free(c)
    return {"checked": checked, "hits": hits, "first": first, "stats": prg.stats(), "overflow": overflow}
