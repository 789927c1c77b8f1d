"""Node-parallel arithmetic over F_{p^k} with numpy.

The expensive step in every mod-p computation here is evaluating a resultant
Res_x(A, B) at many specializations c = c0.  Instead of looping over nodes we
keep one coefficient array of shape (degree+1, nodes, k) and run a single
Euclidean schedule across all nodes at once.  Nodes whose degree sequence
deviates from the majority schedule are re-run separately on their own
schedule until none remain.

Component convolutions (for building iterates) go through float64 FFTs; the
accumulation bounds are checked against the 2^52 exactness margin and fall
back to direct int64 convolution when too tight.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .arith import mobius
from .errors import ArithmeticInconsistencyError, DynatomicError
from .fq import FqField, find_modulus_tail

_FFT_SAFE = float(2**52)
_ZECH_LIMIT = 1 << 20  # discrete-log tables for extension fields up to this size
_SENTINEL = 1 << 24  # log of zero


@lru_cache(maxsize=None)
def _field(p: int, k: int) -> FqField:
    return FqField(p, k, find_modulus_tail(p, k))


class VecGF:
    """Vectorized F_{p^k}; element batches are int arrays of shape (..., k)."""

    def __init__(self, p: int, k: int):
        self.p, self.k = p, k
        self.q = p**k
        self.scalar_field = _field(p, k)
        self.tail = self.scalar_field.tail
        peak = (p - 1) * (p - 1) * k
        if peak < 2**14:
            self.dtype = np.int16
        elif peak < 2**30:
            self.dtype = np.int32
        else:
            self.dtype = np.int64
        # reduction rows: y^(k+i) in the basis, i = 0..k-2
        rows = []
        cur = np.array([(-t) % p for t in self.tail], dtype=np.int64)
        for i in range(k - 1):
            if i > 0:
                hi = cur[k - 1]
                cur = np.roll(cur, 1)
                cur[0] = 0
                if hi:
                    cur = (cur + hi * np.array([(-t) % p for t in self.tail])) % p
            rows.append(cur.copy())
        self.red = (
            np.array(rows, dtype=self.dtype) % p
            if rows
            else np.zeros((0, k), dtype=self.dtype)
        )

    # ---- element batches ----

    def zeros(self, shape: tuple) -> np.ndarray:
        return np.zeros(tuple(shape) + (self.k,), dtype=self.dtype)

    def ones(self, shape: tuple) -> np.ndarray:
        out = self.zeros(shape)
        out[..., 0] = 1
        return out

    def embed_ints(self, values) -> np.ndarray:
        out = self.zeros((len(values),))
        out[:, 0] = np.asarray(values, dtype=np.int64) % self.p
        return out

    def nodes_from_indices(self, indices) -> np.ndarray:
        """Field elements by base-p digits of the given integer indices."""
        out = self.zeros((len(indices),))
        vals = np.asarray(indices, dtype=np.int64).copy()
        for j in range(self.k):
            out[:, j] = vals % self.p
            vals //= self.p
        return out

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, k = self.p, self.k
        if k == 1:
            prod = a.astype(np.int64) * b.astype(np.int64)
            return (prod % p).astype(self.dtype)
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
        z = np.zeros(shape + (2 * k - 1,), dtype=self.dtype)
        for i in range(k):
            np.add(z[..., i : i + k], a[..., i : i + 1] * b, out=z[..., i : i + k])
        z %= p
        out = z[..., :k] + z[..., k:] @ self.red
        out %= p
        return out

    def pow(self, a: np.ndarray, e: int) -> np.ndarray:
        r = self.ones(a.shape[:-1])
        base = a % self.p
        while e:
            if e & 1:
                r = self.mul(r, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return r

    def inv(self, a: np.ndarray) -> np.ndarray:
        return self.pow(a, self.q - 2)

    def is_zero(self, a: np.ndarray) -> np.ndarray:
        return ~np.any(a != 0, axis=-1)

    def to_tuples(self, a: np.ndarray) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in a.reshape(-1, self.k)]

    # ---- discrete-log machinery for small extension fields ----

    def zech_tables(self):
        """(log, exp, zech, minus_log): log maps the base-p digit packing of
        an element to its discrete log (sentinel for zero); exp inverts it;
        zech[d] = log(1 + g^d)."""
        if getattr(self, "_zech", None) is not None:
            return self._zech
        if self.k == 1 or self.q > _ZECH_LIMIT:
            raise DynatomicError("zech tables unavailable for this field")
        F = self.scalar_field
        q1 = self.q - 1
        g = self.generator()
        weights = np.array([self.p**j for j in range(self.k)], dtype=np.int64)
        log_t = np.full(self.q, _SENTINEL, dtype=np.int32)
        exp_t = np.zeros(q1, dtype=np.int32)
        cur = F.one()
        for i in range(q1):
            idx = 0
            for j in range(self.k - 1, -1, -1):
                idx = idx * self.p + cur[j]
            exp_t[i] = idx
            log_t[idx] = i
            cur = F.mul(cur, g)
        # zech[d] = log(1 + g^d): add one to the constant digit of g^d
        digits0 = exp_t % self.p
        bumped = exp_t - digits0 + (digits0 + 1) % self.p
        zech = log_t[bumped]
        if q1 % 2 or log_t[0] != _SENTINEL:
            raise DynatomicError("unexpected field structure for zech tables")
        self._zech = (log_t, exp_t, zech, q1 // 2)
        return self._zech

    def to_logs(self, comp: np.ndarray) -> np.ndarray:
        """Component array (..., k) -> log array (...)."""
        log_t, _, _, _ = self.zech_tables()
        idx = comp[..., self.k - 1].astype(np.int64)
        for j in range(self.k - 2, -1, -1):
            idx = idx * self.p + comp[..., j]
        return log_t[idx].astype(np.int32)

    def from_logs(self, logs: np.ndarray) -> np.ndarray:
        """Log array (...) -> component array (..., k)."""
        _, exp_t, _, _ = self.zech_tables()
        zero = logs >= _SENTINEL
        idx = exp_t[np.where(zero, 0, logs) % (self.q - 1)].astype(np.int64)
        idx[zero] = 0
        out = self.zeros(logs.shape)
        for j in range(self.k):
            out[..., j] = idx % self.p
            idx //= self.p
        return out

    def generator(self) -> tuple[int, ...]:
        """A generator of the multiplicative group (scalar search)."""
        F = self.scalar_field
        qm1 = self.q - 1
        fac = []
        m = qm1
        d = 2
        while d * d <= m:
            if m % d == 0:
                fac.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            fac.append(m)
        idx = 1
        while True:
            idx += 1
            g = F.elements_from_index(idx)
            if F.is_zero(g):
                continue
            if all(F.pow(g, qm1 // f) != F.one() for f in fac):
                return g

    def geometric_nodes(self, count: int) -> np.ndarray:
        """Nodes g^0, g^1, ..., g^(count-1); count must be <= q-1."""
        if count > self.q - 1:
            raise DynatomicError("not enough field elements for the node count")
        F = self.scalar_field
        g = self.generator()
        out = self.zeros((count,))
        cur = F.one()
        for i in range(count):
            out[i] = cur
            cur = F.mul(cur, g)
        return out

    # ---- polynomial batches: arrays (L, N, k), coefficient index first ----

    def conv(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Convolution along axis 0 of coefficient arrays (La,N,k),(Lb,N,k)."""
        p, k = self.p, self.k
        La, N = A.shape[0], A.shape[1]
        Lb = B.shape[0]
        L = La + Lb - 1
        nfft = 1
        while nfft < L:
            nfft *= 2
        # worst-case accumulated magnitude for one component convolution
        peak = float(min(La, Lb)) * (p - 1) ** 2
        if peak * (math.log2(nfft) + 2) * 8 < _FFT_SAFE:
            FA = np.fft.rfft(A.astype(np.float64), n=nfft, axis=0)
            FB = np.fft.rfft(B.astype(np.float64), n=nfft, axis=0)
            z = np.zeros((L, N, 2 * k - 1), dtype=np.int64)
            for i in range(k):
                for j in range(k):
                    prod = np.fft.irfft(FA[..., i] * FB[..., j], n=nfft, axis=0)[:L]
                    z[..., i + j] += np.rint(prod).astype(np.int64)
        else:
            z = np.zeros((L, N, 2 * k - 1), dtype=np.int64)
            A64 = A.astype(np.int64)
            B64 = B.astype(np.int64)
            for i in range(La):
                row = A64[i]
                for ci in range(k):
                    for cj in range(k):
                        z[i : i + Lb, :, ci + cj] += row[:, ci] * B64[..., cj]
                if (i & 63) == 63:
                    z %= p
        z %= p
        out = z[..., :k] + z[..., k:] @ self.red.astype(np.int64)
        out %= p
        return out.astype(self.dtype)

    def conv_selfcheck(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """conv with a spot re-check of one random column against direct conv."""
        out = self.conv(A, B)
        N = A.shape[1]
        col = int(np.random.default_rng(0).integers(0, N))
        a = A[:, col, :].astype(np.int64)
        b = B[:, col, :].astype(np.int64)
        L = A.shape[0] + B.shape[0] - 1
        z = np.zeros((L, 2 * self.k - 1), dtype=np.int64)
        for i in range(A.shape[0]):
            for ci in range(self.k):
                if a[i, ci]:
                    z[i : i + B.shape[0], ci:ci + self.k] += a[i, ci] * b
        z %= self.p
        direct = (z[:, : self.k] + z[:, self.k :] @ self.red.astype(np.int64)) % self.p
        if not np.array_equal(direct.astype(self.dtype), out[:, col, :]):
            raise ArithmeticInconsistencyError("fft convolution self-check failed")
        return out


def build_phi_and_multiplier(
    gf: VecGF, n: int, m: int, nodes: np.ndarray, shift: tuple[int, ...] | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Phi_n(x + shift, c0) and ((f^n)'(x + shift, c0) - 1) at each node.

    Returns coefficient arrays of shape (deg+1, N, k).  A nonzero shift
    leaves every Res_x value unchanged but re-randomizes the Euclidean degree
    sequence, which is how off-schedule nodes get unstuck.
    """
    N = nodes.shape[0]
    cur = gf.zeros((2, N))
    cur[1, :, 0] = 1  # x (+ shift)
    if shift is not None:
        cur[0] = np.asarray(shift, dtype=gf.dtype)[None, :]
    iterates = [cur]
    for _ in range(n):
        nxt = iterates[-1]
        for _ in range(m - 1):
            nxt = gf.conv(nxt, iterates[-1])
        nxt = nxt.astype(np.int64)
        nxt[0] = (nxt[0] + nodes.astype(np.int64)) % gf.p
        iterates.append(nxt.astype(gf.dtype))

    def psi(d: int) -> np.ndarray:
        P = iterates[d].astype(np.int64).copy()
        P[:2] -= iterates[0]
        return (P % gf.p).astype(gf.dtype)

    num = gf.ones((1, N))
    den = gf.ones((1, N))
    for d in range(1, n + 1):
        if n % d == 0:
            mu = mobius(n // d)
            if mu == 1:
                num = gf.conv(num, psi(d))
            elif mu == -1:
                den = gf.conv(den, psi(d))
    phi = _divide_monic(gf, num, den)

    lam = gf.ones((1, N))
    lam[0, :, 0] = pow(m, n, gf.p)
    for j in range(n):
        it = iterates[j]
        for _ in range(m - 1):
            lam = gf.conv(lam, it)
    lam = lam.astype(np.int64)
    lam[0, :, 0] -= 1
    return phi, (lam % gf.p).astype(gf.dtype)


def _divide_monic(gf: VecGF, num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Exact division of coefficient arrays by a monic divisor."""
    p = gf.p
    rem = num.astype(np.int64) % p
    dd = den.shape[0] - 1
    dn = num.shape[0] - 1
    out = np.zeros((dn - dd + 1,) + num.shape[1:], dtype=np.int64)
    den_body = den[:dd]
    for i in range(dn, dd - 1, -1):
        qc = (rem[i] % p).astype(gf.dtype)
        out[i - dd] = qc
        if np.any(qc):
            prod = gf.mul(qc[None, ...], den_body)
            rem[i - dd : i] -= prod
            rem[i - dd : i] %= p
        rem[i] = 0
    if np.any(rem[:dd] % p):
        raise ArithmeticInconsistencyError("vectorized polynomial division not exact")
    return (out % p).astype(gf.dtype)


def vec_resultants(
    gf: VecGF, A: np.ndarray, B: np.ndarray, leader: bool = False
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Res_x(A, B) per node on the majority degree schedule.

    Returns (values (N,k), settled mask, zero mask).  Unsettled nodes must be
    re-run on their own schedule (leader=True follows the first active node's
    schedule, guaranteeing progress on stragglers).
    """
    if gf.k > 1 and gf.q <= _ZECH_LIMIT:
        return _vec_resultants_log(gf, A, B, leader)
    p, k = gf.p, gf.k
    N = A.shape[1]
    a = (A.astype(np.int64) % p).astype(gf.dtype)
    b = (B.astype(np.int64) % p).astype(gf.dtype)
    # drop structurally vanishing leading rows (zero at every node in the
    # batch); with the monic/unit-lc inputs used here the resultant of the
    # trimmed pair is the reduction of the integral resultant
    da, db = A.shape[0] - 1, B.shape[0] - 1
    while da > 0 and not np.any(a[da]):
        da -= 1
    while db > 0 and not np.any(b[db]):
        db -= 1
    a, b = a[: da + 1], b[: db + 1]
    sign = np.zeros(N, dtype=np.int8)
    alive = np.ones(N, dtype=bool)
    done = np.zeros(N, dtype=bool)
    acc = gf.ones((N,))
    if da < db:
        a, b = b, a
        da, db = db, da
        sign ^= (da * db) & 1

    def normalize(bb: np.ndarray, dbb: int, exp: int):
        nonlocal acc, alive
        lcb = bb[dbb].copy()
        bad = gf.is_zero(lcb)
        lcb[bad] = 0
        lcb[bad, 0] = 1
        acc = gf.mul(acc, gf.pow(lcb, exp))
        inv = gf.inv(lcb)
        return gf.mul(bb, inv[None, ...])

    b = normalize(b, db, da)
    a = a.copy()
    pmask = np.empty(a[: max(db, 1)].shape, dtype=bool)
    padj = np.empty_like(a[: max(db, 1)])
    while db > 0:
        body = b[:db]
        for i in range(da, db - 1, -1):
            qc = a[i]
            prod = gf.mul(qc[None, ...], body)
            rows = a[i - db : i]
            np.subtract(rows, prod, out=rows)
            # branchless fold back into [0, p): differences lie in (-p, p)
            mb, ab = pmask[:db], padj[:db]
            np.less(rows, 0, out=mb)
            np.multiply(mb, gf.dtype(p), out=ab, casting="unsafe")
            np.add(rows, ab, out=rows)
            a[i] = 0
        r = a[:db]
        active = alive & ~done
        rownz = np.any(r != 0, axis=2)  # (db, N)
        newzero = active & ~np.any(rownz, axis=0)
        done |= newzero
        active = alive & ~done
        if not active.any():
            break
        if leader:
            lead_idx = int(np.nonzero(active)[0][0])
            dr = int(np.nonzero(rownz[:, lead_idx])[0].max())
            above = (
                np.any(rownz[dr + 1 :], axis=0)
                if dr + 1 < rownz.shape[0]
                else np.zeros(N, dtype=bool)
            )
            off_schedule = active & (~rownz[dr] | above)
        else:
            dr = int(np.nonzero(np.any(rownz[:, active], axis=1))[0].max())
            off_schedule = active & ~rownz[dr]
        alive &= ~off_schedule
        sign ^= (da * db) & 1
        a_next = b[: db + 1].copy()
        b_next = r[: dr + 1]
        da, db = db, dr
        b = normalize(b_next, db, da)
        a = a_next
    minus_one = gf.ones((N,))
    minus_one[:, 0] = p - 1
    values = np.where((sign & 1)[:, None].astype(bool), gf.mul(acc, minus_one), acc)
    values = values % p
    values[done] = 0
    return values.astype(gf.dtype), (alive | done), done


def _vec_resultants_log(
    gf: VecGF, A: np.ndarray, B: np.ndarray, leader: bool = False
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The majority-schedule Euclid in the discrete-log representation.

    Multiplication is addition of logs mod q-1; the subtraction inside the
    remainder step costs one gather into the zech table.  Only worthwhile
    (and only built) for small extension fields.  With leader=True the
    schedule follows the first still-active node instead of the global
    maximum, which guarantees at least that node settles (used to finish
    off stragglers, in particular nodes whose resultant is zero).
    """
    log_t, exp_t, zech, minus = gf.zech_tables()
    q1 = gf.q - 1
    # logs fit int16 when q-1 and the sentinel do
    if q1 < 15800:
        ldt, sent = np.int16, 16000
    else:
        ldt, sent = np.int32, _SENTINEL
    zech_l = np.where(zech >= _SENTINEL, sent, zech).astype(ldt)
    N = A.shape[1]
    a = gf.to_logs(A.astype(gf.dtype))
    b = gf.to_logs(B.astype(gf.dtype))
    a = np.where(a >= _SENTINEL, sent, a).astype(ldt)
    b = np.where(b >= _SENTINEL, sent, b).astype(ldt)
    da, db = a.shape[0] - 1, b.shape[0] - 1
    while da > 0 and not np.any(a[da] < sent):
        da -= 1
    while db > 0 and not np.any(b[db] < sent):
        db -= 1
    a, b = a[: da + 1].copy(), b[: db + 1].copy()
    sign = np.zeros(N, dtype=np.int8)
    alive = np.ones(N, dtype=bool)
    done = np.zeros(N, dtype=bool)
    acc = np.zeros(N, dtype=np.int64)  # log of the accumulated unit

    if da < db:
        a, b = b, a
        da, db = db, da
        sign ^= (da * db) & 1

    def normalize(bb: np.ndarray, dbb: int, exp: int):
        nonlocal acc
        lcb = bb[dbb].astype(np.int64)
        lcb_safe = np.where(lcb >= sent, 0, lcb)
        acc += lcb_safe * exp
        acc %= q1
        out = bb.astype(np.int32) - lcb_safe[None, :].astype(np.int32)
        out %= q1
        out = out.astype(ldt)
        out[bb >= sent] = sent
        return out

    # pad the zech table so any in-range index gathers safely: valid offsets
    # reach 2 q1, sentinel-garbage ones stay below sent + q1
    pad_len = sent + q1 + 2
    zech_pad = np.full(pad_len, sent, dtype=ldt)
    zech_pad[:q1] = zech_l
    zech_pad[q1 : 2 * q1] = zech_l
    q1l = ldt(q1)
    t = np.empty_like(a[: max(db, 1)])
    d = np.empty_like(t)
    zl = np.empty_like(t)
    res = np.empty_like(t)
    mask = np.empty(t.shape, dtype=bool)
    madj = np.empty_like(t)

    def fold(buf, db_, lower=False):
        """Branchless reduction into [0, q1) for values in (-q1, 2 q1);
        dense where= ufuncs are scalar loops, mask multiplies vectorize."""
        mb, ab = mask[:db_], madj[:db_]
        if lower:
            np.less(buf, 0, out=mb)
        else:
            np.greater_equal(buf, q1l, out=mb)
        np.multiply(mb, q1l, out=ab, casting="unsafe")
        if lower:
            np.add(buf, ab, out=buf)
        else:
            np.subtract(buf, ab, out=buf)

    b = normalize(b, db, da)
    while db > 0:
        body = b[:db]
        body_sent = body >= sent
        tv, dv, zv, rv = t[:db], d[:db], zl[:db], res[:db]
        for i in range(da, db - 1, -1):
            qc = a[i]
            s = ((qc.astype(np.int32) + minus) % q1).astype(ldt)
            # t = log(-qc * body); valid sums < 2 q1
            np.add(body, s[None, :], out=tv)
            fold(tv, db)
            np.copyto(tv, ldt(sent), where=body_sent)
            qcs = qc >= sent
            if qcs.any():
                tv[:, qcs] = sent
            # rows = log(exp(rows) + exp(t)): one padded-table gather
            rows = a[i - db : i]
            np.subtract(tv, rows, out=dv)
            fold(dv, db, lower=True)
            np.take(zech_pad, dv, out=zv)
            np.add(rows, zv, out=rv)
            fold(rv, db)
            np.copyto(rv, ldt(sent), where=zv >= sent)
            np.copyto(rv, tv, where=rows >= sent)
            np.copyto(rv, rows, where=tv >= sent)
            np.copyto(rows, rv)
            a[i] = sent
        r = a[:db]
        active = alive & ~done
        rownz = r < sent
        newzero = active & ~np.any(rownz, axis=0)
        done |= newzero
        active = alive & ~done
        if not active.any():
            break
        if leader:
            lead_idx = int(np.nonzero(active)[0][0])
            dr = int(np.nonzero(rownz[:, lead_idx])[0].max())
            above = (
                np.any(rownz[dr + 1 :], axis=0)
                if dr + 1 < rownz.shape[0]
                else np.zeros(N, dtype=bool)
            )
            off_schedule = active & (~rownz[dr] | above)
        else:
            dr = int(np.nonzero(np.any(rownz[:, active], axis=1))[0].max())
            off_schedule = active & ~rownz[dr]
        alive &= ~off_schedule
        sign ^= (da * db) & 1
        a_next = b[: db + 1].copy()
        b_next = r[: dr + 1]
        da, db = db, dr
        b = normalize(b_next, db, da)
        a = a_next
    acc = (acc + np.where(sign & 1, minus, 0)) % q1
    out_logs = np.where(done, _SENTINEL, acc).astype(np.int32)
    values = gf.from_logs(out_logs)
    return values, (alive | done), done


def resultant_values_at_nodes(
    gf: VecGF,
    nodes: np.ndarray,
    build,
    batch: int = 1536,
    rescue_rounds: int = 5,
) -> tuple[np.ndarray, np.ndarray]:
    """Res_x values per node plus a settled mask.

    `build(node_subset, shift) -> (A, B)` produces the coefficient arrays at
    x -> x + shift.  Nodes that fall off the majority degree schedule are
    retried a few times under fresh shifts (which re-randomize the schedule
    but not the value); whatever still fails is left unsettled and the caller
    works with the surviving nodes.
    """
    N = nodes.shape[0]
    values = np.zeros((N, gf.k), dtype=np.int64)
    settled_mask = np.zeros(N, dtype=bool)
    pending = np.arange(N)
    F = gf.scalar_field
    max_leader_rounds = 250
    for round_no in range(1 + rescue_rounds + max_leader_rounds):
        if not pending.size:
            break
        shift = None if round_no == 0 else F.elements_from_index(round_no + gf.p)
        leader = round_no > rescue_rounds
        remaining = []
        for start in range(0, pending.size, batch):
            idx = pending[start : start + batch]
            A, B = build(nodes[idx], shift)
            vals, settled, _ = vec_resultants(gf, A, B, leader=leader)
            sel = np.asarray(settled)
            values[idx[sel]] = vals[sel]
            settled_mask[idx[sel]] = True
            remaining.append(idx[~sel])
        pending = np.concatenate(remaining) if remaining else np.array([], int)
    return values % gf.p, settled_mask


# ---- interpolation at geometric nodes -------------------------------------


def _conv_elements(gf: VecGF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Convolution of element sequences (La,k),(Lb,k) treated as (L,1,k)."""
    return gf.conv(a[:, None, :], b[:, None, :])[:, 0, :]


def master_poly(gf: VecGF, nodes: np.ndarray) -> np.ndarray:
    """prod_i (c - x_i) as an element sequence (N+1, k), via a product tree."""
    leaves = []
    for i in range(nodes.shape[0]):
        leaf = gf.zeros((2,))
        leaf[0] = (-nodes[i].astype(np.int64)) % gf.p
        leaf[1, 0] = 1
        leaves.append(leaf)
    while len(leaves) > 1:
        nxt = []
        for i in range(0, len(leaves) - 1, 2):
            nxt.append(_conv_elements(gf, leaves[i], leaves[i + 1]))
        if len(leaves) % 2:
            nxt.append(leaves[-1])
        leaves = nxt
    return leaves[0]


def _batch_inverse(gf: VecGF, a: np.ndarray) -> np.ndarray:
    """Montgomery batch inversion of an element sequence (L, k); no zeros."""
    F = gf.scalar_field
    L = a.shape[0]
    prefix = gf.zeros((L,))
    cur = F.one()
    tup = gf.to_tuples(a)
    pres = []
    for i in range(L):
        pres.append(cur)
        cur = F.mul(cur, tup[i])
    total_inv = F.inv(cur)
    out = gf.zeros((L,))
    for i in range(L - 1, -1, -1):
        out[i] = F.mul(total_inv, pres[i])
        total_inv = F.mul(total_inv, tup[i])
    return out


def evaluate_many(gf: VecGF, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Horner evaluation of an element-sequence polynomial at a node batch."""
    acc = gf.zeros((xs.shape[0],))
    for j in range(coeffs.shape[0] - 1, -1, -1):
        acc = gf.mul(acc, xs)
        acc = (acc.astype(np.int64) + coeffs[j][None, :]) % gf.p
        acc = acc.astype(gf.dtype)
    return acc


def interpolate_nodes(gf: VecGF, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Coefficients of the unique degree < N polynomial through (x_i, y_i).

    Lagrange via the master polynomial M = prod (c - x_i): the coefficient j
    of the interpolant is sum_s M[j+1+s] PS_s with PS_s the weighted power
    sums sum_i (y_i / M'(x_i)) x_i^s.  Everything vectorizes over nodes.
    """
    N = xs.shape[0]
    M = master_poly(gf, xs)  # (N+1, k)
    dM = gf.zeros((N,))
    mults = gf.embed_ints(list(range(1, N + 1)))
    for j in range(1, N + 1):
        dM[j - 1] = gf.mul(M[j], mults[j - 1])
    mprime = evaluate_many(gf, dM, xs)
    w = _batch_inverse(gf, mprime)
    v = gf.mul(ys.astype(gf.dtype), w)
    # PS_s = sum_i v_i x_i^s for s = 0..N-1
    ps = gf.zeros((N,))
    cur = v.copy()
    for s in range(N):
        ps[s] = (cur.astype(np.int64).sum(axis=0)) % gf.p
        if s + 1 < N:
            cur = gf.mul(cur, xs)
    # coeff_j = sum_{s>=0} M[j+1+s] * PS_s = conv(M reversed, PS)[N-1-j]
    conv = _conv_elements(gf, M[::-1], ps)
    return conv[:N][::-1].copy()
