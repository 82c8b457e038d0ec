"""Pure-Python bitset kernel (fallback backend, no world limit).

Worlds are bit positions.  A context holds the live-world mask, one mask
per atom, a depth table and one successor mask per agent and world.  The
compiled extension implements the same functions with 64-bit masks.
"""

from __future__ import annotations

TRUE, FALSE, ATOM, EXACT, ATLEAST, NOT, AND, K, KI, ANN = range(10)
DPAL, EDPAL, ADPAL = range(3)
MAX_WORLDS = None


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Ctx:
    __slots__ = ("n", "live", "val", "depth", "succ")

    def __init__(self, n, live, val, depth, succ):
        self.n = n
        self.live = live
        self.val = val
        self.depth = depth
        self.succ = succ

    def size(self) -> int:
        live = self.live
        total = live.bit_count()
        for row in self.succ:
            for w in _bits(live):
                total += (row[w] & live).bit_count()
        return total


class _Run:
    def __init__(self, prog, sem):
        self.op, self.agent, self.arg, self.left, self.right = prog
        self.sem = sem
        self.dpal_updates = self.dpal_violations = 0
        self.edpal_updates = self.edpal_growth = 0

    def stats(self):
        return (self.dpal_updates, self.dpal_violations, self.edpal_updates, self.edpal_growth)

    def ev(self, c: _Ctx, node: int, memo: list) -> int:
        r = memo[node]
        if r is not None:
            return r
        o = self.op[node]
        live = c.live
        if o == TRUE:
            r = live
        elif o == FALSE:
            r = 0
        elif o == ATOM:
            r = c.val[self.arg[node]] & live
        elif o == EXACT or o == ATLEAST:
            row = c.depth[self.agent[node]]
            d = self.arg[node]
            r = 0
            for w in _bits(live):
                if row[w] == d if o == EXACT else row[w] >= d:
                    r |= 1 << w
        elif o == NOT:
            r = live & ~self.ev(c, self.left[node], memo)
        elif o == AND:
            r = self.ev(c, self.left[node], memo) & self.ev(c, self.right[node], memo)
        elif o == K or o == KI:
            sub = self.ev(c, self.left[node], memo)
            a = self.agent[node]
            row, succ = c.depth[a], c.succ[a]
            need = self.arg[node]
            bad = live & ~sub
            r = 0
            for w in _bits(live):
                if (o == KI or row[w] >= need) and not (succ[w] & bad):
                    r |= 1 << w
        elif o == ANN:
            phi = self.ev(c, self.left[node], memo)
            if not phi:
                r = live
            else:
                k = self.arg[node]
                body = self.right[node]
                fresh = [None] * len(self.op)
                if self.sem == DPAL:
                    child, where = self._dpal(c, phi, k)
                    got = self.ev(child, body, fresh)
                    r = live & ~phi
                    for w, v in where.items():
                        if got >> v & 1:
                            r |= 1 << w
                else:
                    child = self._edpal(c, phi, k) if self.sem == EDPAL else self._adpal(c, phi, k)
                    r = (live & ~phi) | (self.ev(child, body, fresh) & phi)
        else:
            raise ValueError(f"bad opcode {o}")
        memo[node] = r
        return r

    def _dpal(self, c: _Ctx, phi: int, k: int):
        n = c.n
        where = {w: n + i for i, w in enumerate(_bits(phi))}
        n2 = n + len(where)

        def spread(mask):
            out = 0
            for w in _bits(mask & phi):
                out |= 1 << where[w]
            return out

        val = [v | spread(v) for v in c.val]
        depth = []
        succ = []
        for row, srow in zip(c.depth, c.succ):
            drow = list(row) + [0] * len(where)
            for w, v in where.items():
                drow[v] = row[w] if row[w] < k else row[w] - k
            depth.append(drow)
            nrow = [0] * n2
            done = 0
            for w in range(n):
                if done >> w & 1:
                    continue
                cls = srow[w]
                done |= cls
                cls1 = spread(cls)
                merged = any(row[s] < k for s in _bits(cls & phi))
                if merged:
                    cls = cls1 = cls | cls1
                for s in _bits(cls & ((1 << n) - 1)):
                    nrow[s] = cls
                for s in _bits(cls1 >> n):
                    nrow[n + s] = cls1
            succ.append(nrow)
        child = _Ctx(n2, (1 << n2) - 1, val, depth, succ)
        self.dpal_updates += 1
        if child.size() > 4 * c.size():
            self.dpal_violations += 1
        return child, where

    def _edpal(self, c: _Ctx, phi: int, k: int) -> _Ctx:
        child = _Ctx(c.n, c.live & phi, c.val, [[d - k for d in row] for row in c.depth], c.succ)
        self.edpal_updates += 1
        if child.size() > c.size():
            self.edpal_growth += 1
        return child

    def _adpal(self, c: _Ctx, phi: int, k: int) -> _Ctx:
        depth = []
        succ = []
        notphi = c.live & ~phi
        for row, srow in zip(c.depth, c.succ):
            drow = list(row)
            nrow = list(srow)
            for w in _bits(c.live):
                if row[w] >= k:
                    drow[w] = row[w] - k
                    nrow[w] = srow[w] & (phi if phi >> w & 1 else notphi)
            depth.append(drow)
            succ.append(nrow)
        return _Ctx(c.n, c.live, c.val, depth, succ)


def evaluate(prog, root, sem, n, vals, depth, succ):
    """Truth mask of node ``root`` on one model.

    Returns ``(mask, stats, overflow)`` where stats counts updates and
    size-bound violations; this backend never overflows.
    """
    run = _Run(prog, sem)
    ctx = _Ctx(n, (1 << n) - 1, list(vals), [list(r) for r in depth], [list(r) for r in succ])
    mask = run.ev(ctx, root, [None] * len(prog[0]))
    return mask, run.stats(), False


def _unambiguous(depth, succ, n):
    for row, srow in zip(depth, succ):
        for w in range(n):
            d = row[w]
            for t in _bits(srow[w]):
                if row[t] != d:
                    return False
    return True


def sweep(prog, root, sem, n, frames, vals, reps, mode, target, unambiguous_only, stop_first):
    """Evaluate ``root`` on every model frame x valuation x depth choice.

    ``mode`` 0 records a hit when some world of ``target`` fails, mode 1
    when some world of ``target`` holds.  Depth choices run over
    ``reps[a]`` independently for every world, last position fastest.
    """
    run = _Run(prog, sem)
    nagents = len(reps)
    positions = [(a, w) for a in range(nagents) for w in range(n)]
    checked = hits = 0
    first = None
    full = (1 << n) - 1
    size = len(prog[0])
    for fi, frame in enumerate(frames):
        for vi, val in enumerate(vals):
            digits = [0] * len(positions)
            while True:
                depth = [[reps[a][digits[a * n + w]] for w in range(n)] for a in range(nagents)]
                if not unambiguous_only or _unambiguous(depth, frame, n):
                    ctx = _Ctx(n, full, list(val), depth, frame)
                    mask = run.ev(ctx, root, [None] * size)
                    checked += 1
                    hit = (mask & target) != target if mode == 0 else (mask & target) != 0
                    if hit:
                        hits += 1
                        if first is None:
                            first = (fi, vi, list(digits), mask)
                        if stop_first:
                            return _result(checked, hits, first, run, False)
                i = len(positions) - 1
                while i >= 0:
                    digits[i] += 1
                    if digits[i] < len(reps[positions[i][0]]):
                        break
                    digits[i] = 0
                    i -= 1
                if i < 0:
                    break
    return _result(checked, hits, first, run, False)


def _result(checked, hits, first, run, overflow):
    return {
        "checked": checked,
        "hits": hits,
        "first": first,
        "stats": run.stats(),
        "overflow": overflow,
    }
