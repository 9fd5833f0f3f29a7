# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled core: batched game simulation and prime-field kernels.

Byte-compatible with ``_pycore``: same splitmix64 streams, same draw order,
same move sequences.  Any observable divergence between the two backends is
a bug (see tests/test_core_equivalence.py).
"""

from libc.stdlib cimport calloc, free

ctypedef unsigned long long u64


# ---------------------------------------------------------------------------
# randomness (mirrors mirrorlab.rng exactly)

cdef inline u64 _mix64(u64 z) noexcept nogil:
    z = (z ^ (z >> 33)) * <u64>0xFF51AFD7ED558CCD
    z = (z ^ (z >> 33)) * <u64>0xC4CEB9FE1A85EC53
    return z ^ (z >> 33)


cdef inline u64 _derive(u64 master, u64 index) noexcept nogil:
    return _mix64(master ^ _mix64(index ^ <u64>0x9E3779B97F4A7C15))


cdef inline u64 _sm_next(u64 *state) noexcept nogil:
    state[0] = state[0] + <u64>0x9E3779B97F4A7C15
    cdef u64 z = state[0]
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline u64 _randbelow(u64 *state, u64 k) noexcept nogil:
    if k <= 1:
        return 0
    cdef u64 mask = k - 1
    mask |= mask >> 1
    mask |= mask >> 2
    mask |= mask >> 4
    mask |= mask >> 8
    mask |= mask >> 16
    mask |= mask >> 32
    cdef u64 v
    while True:
        v = _sm_next(state) & mask
        if v < k:
            return v


def derive_seed(master, index):
    return _derive(<u64>master, <u64>index)


# ---------------------------------------------------------------------------
# prime-field kernels

cdef inline u64 _modpow(u64 base, u64 exp, u64 q) noexcept nogil:
    cdef u64 out = 1
    base %= q
    while exp:
        if exp & 1:
            out = out * base % q
        base = base * base % q
        exp >>= 1
    return out


def power_sums(xs, int k, unsigned long long q):
    """First k power sums of the integer stream, modulo q (needs q^2 < 2^64)."""
    cdef u64 *sums = <u64 *>calloc(k + 1, sizeof(u64))
    if sums == NULL:
        raise MemoryError
    cdef u64 x, acc
    cdef int i
    try:
        for item in xs:
            x = <u64>item
            acc = 1
            for i in range(k):
                acc = acc * x % q
                sums[i] = (sums[i] + acc) % q
        return [sums[i] for i in range(k)]
    finally:
        free(sums)


def full_power_sums(int n, int k, unsigned long long q):
    cdef u64 *sums = <u64 *>calloc(k + 1, sizeof(u64))
    if sums == NULL:
        raise MemoryError
    cdef u64 x, acc
    cdef int i, v
    try:
        for v in range(1, n + 1):
            x = <u64>v
            acc = 1
            for i in range(k):
                acc = acc * x % q
                sums[i] = (sums[i] + acc) % q
        return [sums[i] for i in range(k)]
    finally:
        free(sums)


cdef void _newton(u64 *p, u64 *e, int k, u64 q) noexcept nogil:
    # p[1..k] power sums -> e[1..k] elementary symmetric, e[0] = 1
    cdef int i, j
    cdef u64 acc, t
    e[0] = 1
    for i in range(1, k + 1):
        acc = 0
        for j in range(1, i + 1):
            t = e[i - j] * p[j] % q
            if j & 1:
                acc = (acc + t) % q
            else:
                acc = (acc + q - t) % q
        e[i] = acc * _modpow(<u64>i, q - 2, q) % q


cdef int _root_scan(u64 *e, int k, int n, u64 q, u64 *coef, int *out) noexcept nogil:
    # roots in 1..n of x^k - e1 x^(k-1) + e2 x^(k-2) - ... ; at most k exist
    cdef int j, x, cnt = 0
    cdef u64 val
    for j in range(1, k + 1):
        coef[j] = (q - e[j]) % q if j & 1 else e[j] % q
    for x in range(1, n + 1):
        val = 1
        for j in range(1, k + 1):
            val = (val * <u64>x + coef[j]) % q
        if val == 0:
            out[cnt] = x
            cnt += 1
    return cnt


def poly_root_scan(e, int n, unsigned long long q):
    cdef int k = len(e)
    cdef u64 *ebuf = <u64 *>calloc(k + 1, sizeof(u64))
    cdef u64 *coef = <u64 *>calloc(k + 1, sizeof(u64))
    cdef int *out = <int *>calloc(n + 1, sizeof(int))
    cdef int i, cnt
    if ebuf == NULL or coef == NULL or out == NULL:
        free(ebuf); free(coef); free(out)
        raise MemoryError
    try:
        for i in range(k):
            ebuf[i + 1] = <u64>(e[i] % q)
        cnt = _root_scan(ebuf, k, n, q, coef, out)
        return [out[i] for i in range(cnt)]
    finally:
        free(ebuf); free(coef); free(out)


# ---------------------------------------------------------------------------
# matching sampling (mirrors strategies.sample_matching)

cdef void _build_matching(int n, u64 *state, int *perm, int *match) noexcept nogil:
    cdef int i, j, t, u, v, tmp
    for i in range(n):
        perm[i] = i + 1
    for i in range(n - 1, 0, -1):
        j = <int>_randbelow(state, <u64>(i + 1))
        tmp = perm[i]; perm[i] = perm[j]; perm[j] = tmp
    for t in range(0, n, 2):
        u = perm[t]; v = perm[t + 1]
        match[u] = v
        match[v] = u


def matching_from_seed(int n, seed):
    """Partner table (index 0 unused) of the seeded uniform matching."""
    cdef int *perm = <int *>calloc(n + 1, sizeof(int))
    cdef int *match = <int *>calloc(n + 2, sizeof(int))
    cdef u64 st = <u64>seed
    cdef int i
    if perm == NULL or match == NULL:
        free(perm); free(match)
        raise MemoryError
    try:
        _build_matching(n, &st, perm, match)
        return [match[i] for i in range(n + 1)]
    finally:
        free(perm); free(match)


# ---------------------------------------------------------------------------
# fenwick tree over 1..n (uniform-random-unsaid's view of the fresh numbers)

cdef void _fen_build_ones(int *t, int n) noexcept nogil:
    cdef int i
    for i in range(n + 1):
        t[i] = 0
    for i in range(1, n + 1):
        t[i] += 1
        if i + (i & -i) <= n:
            t[i + (i & -i)] += t[i]


cdef void _fen_add(int *t, int n, int pos, int delta) noexcept nogil:
    while pos <= n:
        t[pos] += delta
        pos += pos & -pos


cdef int _fen_select(int *t, int n, int step0, int idx) noexcept nogil:
    # position of the (idx+1)-th remaining number, ascending
    cdef int pos = 0
    cdef int rem = idx + 1
    cdef int step = step0
    cdef int npos
    while step:
        npos = pos + step
        if npos <= n and t[npos] < rem:
            pos = npos
            rem -= t[npos]
        step >>= 1
    return pos + 1


# ---------------------------------------------------------------------------
# strategy codes (keep in sync with mirrorlab._core.KERNEL_CODES)

cdef enum:
    CODE_MIRROR = 1
    CODE_ODD_MIRROR = 2
    CODE_TUPLE_MIRROR = 3
    CODE_SMALLEST = 4
    CODE_LARGEST = 5
    CODE_RANDOM = 6
    CODE_RAND_LOG = 7
    CODE_RAND_SQRT = 8


cdef inline int _filler_small(int *move, int j) noexcept nogil:
    # smallest number not yet used within this move (forced-repeat filler)
    cdef int p = 1
    cdef int t
    cdef bint found
    while True:
        found = False
        for t in range(j):
            if move[t] == p:
                found = True
                break
        if not found:
            return p
        p += 1


cdef inline int _filler_large(int n, int *move, int j) noexcept nogil:
    cdef int p = n
    cdef int t
    cdef bint found
    while True:
        found = False
        for t in range(j):
            if move[t] == p:
                found = True
                break
        if not found:
            return p
        p -= 1


cdef class Arena:
    """Reusable buffers for one matchup; each play() runs one seeded game."""

    cdef int n, a, b, acode, bcode, r, k
    cdef u64 q
    cdef unsigned char *said
    cdef int *perm
    cdef int *match
    cdef int *fenA
    cdef int *fenB
    cdef int fen_step
    cdef int *backups
    cdef unsigned char *spent
    cdef u64 *sums
    cdef u64 *full
    cdef u64 *pmiss
    cdef u64 *ecoef
    cdef u64 *coef
    cdef int *missing
    cdef int *movebuf
    cdef public int losing
    cdef public int error

    def __cinit__(self, int n, int a, int b, int acode, int bcode,
                  int r, int k, unsigned long long q):
        cdef int quota = a if a > b else b
        cdef u64 x, acc
        cdef int i, v
        self.n = n; self.a = a; self.b = b
        self.acode = acode; self.bcode = bcode
        self.r = r; self.k = k; self.q = q
        self.said = <unsigned char *>calloc(n + 2, 1)
        self.perm = <int *>calloc(n + 1, sizeof(int))
        self.match = <int *>calloc(n + 2, sizeof(int))
        self.fenA = <int *>calloc(n + 2, sizeof(int))
        self.fenB = <int *>calloc(n + 2, sizeof(int))
        self.backups = <int *>calloc(r + 1, sizeof(int))
        self.spent = <unsigned char *>calloc(r + 1, 1)
        self.sums = <u64 *>calloc(k + 1, sizeof(u64))
        self.full = <u64 *>calloc(k + 1, sizeof(u64))
        self.pmiss = <u64 *>calloc(k + 1, sizeof(u64))
        self.ecoef = <u64 *>calloc(k + 1, sizeof(u64))
        self.coef = <u64 *>calloc(k + 1, sizeof(u64))
        self.missing = <int *>calloc(k + 1, sizeof(int))
        self.movebuf = <int *>calloc(quota + 1, sizeof(int))
        if (self.said == NULL or self.perm == NULL or self.match == NULL
                or self.fenA == NULL or self.fenB == NULL
                or self.backups == NULL or self.spent == NULL
                or self.sums == NULL or self.full == NULL
                or self.pmiss == NULL or self.ecoef == NULL
                or self.coef == NULL or self.missing == NULL
                or self.movebuf == NULL):
            raise MemoryError
        self.fen_step = 1
        while self.fen_step * 2 <= n:
            self.fen_step *= 2
        if acode == CODE_RAND_SQRT:
            # power sums of the complete range, computed once per matchup
            for v in range(1, n + 1):
                x = <u64>v
                acc = 1
                for i in range(k):
                    acc = acc * x % q
                    self.full[i + 1] = (self.full[i + 1] + acc) % q

    def __dealloc__(self):
        free(self.said); free(self.perm); free(self.match)
        free(self.fenA); free(self.fenB)
        free(self.backups); free(self.spent)
        free(self.sums); free(self.full); free(self.pmiss)
        free(self.ecoef); free(self.coef)
        free(self.missing); free(self.movebuf)

    cdef inline void _ingest(self, int v) noexcept nogil:
        cdef u64 acc = 1
        cdef u64 x = <u64>v
        cdef int i
        for i in range(self.k):
            acc = acc * x % self.q
            self.sums[i] = (self.sums[i] + acc) % self.q

    cdef inline int _backup_index(self, int v) noexcept nogil:
        cdef int lo = 0
        cdef int hi = self.r - 1
        cdef int mid
        while lo <= hi:
            mid = (lo + hi) >> 1
            if self.backups[mid] == v:
                return mid
            if self.backups[mid] < v:
                lo = mid + 1
            else:
                hi = mid - 1
        return -1

    cdef int _run(self, u64 game_seed, object moves):
        """One game; 0 both win, 1 Alice loses, 2 Bob loses."""
        cdef int n = self.n
        cdef int acode = self.acode
        cdef int bcode = self.bcode
        cdef u64 st_o = _derive(game_seed, 0)
        cdef u64 st_a = _derive(game_seed, 1)
        cdef u64 st_b = _derive(game_seed, 2)
        cdef unsigned char *said = self.said
        cdef int *movebuf = self.movebuf

        cdef int i, j, v, t, cnt, idx, base, width, kk, m
        cdef int last_a = 0, last_b = 0
        cdef bint started_a = False
        cdef int xlog = 0
        cdef int cur_small_a = 1, cur_small_b = 1
        cdef int cur_large_a = n, cur_large_b = n
        cdef int fcnt_a = n, fcnt_b = n
        cdef int acount = 0
        cdef int sqphase = 0
        cdef int miss_head = 0, miss_len = 0
        cdef int said_count = 0
        cdef int turn = 0
        cdef int outcome = -1
        cdef int quota, code, move_len
        cdef bint alice_moving, dup
        cdef u64 *stream

        for i in range(n + 1):
            said[i] = 0
        self.losing = 0
        self.error = 0

        if acode == CODE_RAND_LOG or acode == CODE_RAND_SQRT:
            _build_matching(n, &st_o, self.perm, self.match)
        if acode == CODE_RANDOM:
            _fen_build_ones(self.fenA, n)
        if bcode == CODE_RANDOM:
            _fen_build_ones(self.fenB, n)

        if acode == CODE_RAND_LOG:
            xlog = 1 + <int>_randbelow(&st_a, <u64>n)
        elif acode == CODE_RAND_SQRT:
            cnt = 0
            while cnt < self.r:
                v = 1 + <int>_randbelow(&st_a, <u64>n)
                dup = False
                for i in range(cnt):
                    if self.backups[i] == v:
                        dup = True
                        break
                if not dup:
                    self.backups[cnt] = v
                    cnt += 1
            for i in range(1, self.r):  # insertion sort ascending
                v = self.backups[i]
                j = i - 1
                while j >= 0 and self.backups[j] > v:
                    self.backups[j + 1] = self.backups[j]
                    j -= 1
                self.backups[j + 1] = v
            for i in range(self.r):
                self.spent[i] = 0
            for i in range(self.k):
                self.sums[i] = 0

        while outcome < 0:
            turn += 1
            alice_moving = turn & 1
            code = acode if alice_moving else bcode
            quota = self.a if alice_moving else self.b

            # ---- emit -------------------------------------------------
            if code == CODE_MIRROR:
                movebuf[0] = n + 1 - last_b
            elif code == CODE_ODD_MIRROR:
                if not started_a:
                    started_a = True
                    movebuf[0] = n
                else:
                    movebuf[0] = n - last_a
            elif code == CODE_TUPLE_MIRROR:
                width = quota + 1
                base = ((last_b - 1) / width) * width + 1
                j = 0
                for v in range(base, base + width):
                    if v != last_b:
                        movebuf[j] = v
                        j += 1
            elif code == CODE_SMALLEST:
                for j in range(quota):
                    if alice_moving:
                        while cur_small_a <= n and said[cur_small_a]:
                            cur_small_a += 1
                        if cur_small_a <= n:
                            movebuf[j] = cur_small_a
                            cur_small_a += 1
                        else:
                            movebuf[j] = _filler_small(movebuf, j)
                    else:
                        while cur_small_b <= n and said[cur_small_b]:
                            cur_small_b += 1
                        if cur_small_b <= n:
                            movebuf[j] = cur_small_b
                            cur_small_b += 1
                        else:
                            movebuf[j] = _filler_small(movebuf, j)
            elif code == CODE_LARGEST:
                for j in range(quota):
                    if alice_moving:
                        while cur_large_a >= 1 and said[cur_large_a]:
                            cur_large_a -= 1
                        if cur_large_a >= 1:
                            movebuf[j] = cur_large_a
                            cur_large_a -= 1
                        else:
                            movebuf[j] = _filler_large(n, movebuf, j)
                    else:
                        while cur_large_b >= 1 and said[cur_large_b]:
                            cur_large_b -= 1
                        if cur_large_b >= 1:
                            movebuf[j] = cur_large_b
                            cur_large_b -= 1
                        else:
                            movebuf[j] = _filler_large(n, movebuf, j)
            elif code == CODE_RANDOM:
                stream = &st_a if alice_moving else &st_b
                for j in range(quota):
                    if alice_moving and fcnt_a > 0:
                        idx = <int>_randbelow(stream, <u64>fcnt_a)
                        v = _fen_select(self.fenA, n, self.fen_step, idx)
                        _fen_add(self.fenA, n, v, -1)
                        fcnt_a -= 1
                    elif (not alice_moving) and fcnt_b > 0:
                        idx = <int>_randbelow(stream, <u64>fcnt_b)
                        v = _fen_select(self.fenB, n, self.fen_step, idx)
                        _fen_add(self.fenB, n, v, -1)
                        fcnt_b -= 1
                    else:
                        v = _filler_small(movebuf, j)
                    movebuf[j] = v
            elif code == CODE_RAND_LOG:
                if not started_a:
                    started_a = True
                    movebuf[0] = xlog
                else:
                    movebuf[0] = self.match[last_a]
            elif code == CODE_RAND_SQRT:
                if not started_a:
                    started_a = True
                    idx = <int>_randbelow(&st_a, <u64>self.r)
                    v = self.backups[idx]
                    self.spent[idx] = 1
                    self._ingest(v)
                    acount += 1
                    movebuf[0] = v
                else:
                    if sqphase == 0 and acount >= n - self.k:
                        # reconstruct the missing set from the power sums
                        kk = n - acount
                        for i in range(1, kk + 1):
                            self.pmiss[i] = (self.full[i] + self.q
                                             - self.sums[i - 1]) % self.q
                        _newton(self.pmiss, self.ecoef, kk, self.q)
                        cnt = _root_scan(self.ecoef, kk, n, self.q,
                                         self.coef, self.missing)
                        if cnt != kk:
                            self.error = 1
                            return 0
                        miss_head = 0
                        miss_len = kk
                        sqphase = 1
                    if sqphase == 1:
                        v = self.missing[miss_head]
                        miss_head += 1
                        miss_len -= 1
                        acount += 1
                        movebuf[0] = v
                    else:
                        m = self.match[last_a]
                        idx = self._backup_index(m)
                        if idx < 0 or not self.spent[idx]:
                            v = m
                        else:
                            cnt = 0
                            for i in range(self.r):
                                if not self.spent[i]:
                                    cnt += 1
                            if cnt > 0:
                                idx = <int>_randbelow(&st_a, <u64>cnt)
                                for i in range(self.r):
                                    if not self.spent[i]:
                                        if idx == 0:
                                            v = self.backups[i]
                                            break
                                        idx -= 1
                            else:
                                v = 1 + <int>_randbelow(&st_a, <u64>n)
                        idx = self._backup_index(v)
                        if idx >= 0:
                            self.spent[idx] = 1
                        self._ingest(v)
                        acount += 1
                        movebuf[0] = v
            else:
                self.error = 2
                return 0

            # ---- referee ----------------------------------------------
            move_len = quota
            for j in range(quota):
                v = movebuf[j]
                if said[v]:
                    outcome = 1 if alice_moving else 2
                    self.losing = v
                    move_len = j + 1
                    break
                said[v] = 1
                said_count += 1
            if moves is not None:
                moves.append(("A" if alice_moving else "B",
                              tuple(movebuf[j] for j in range(move_len))))
            if outcome >= 0:
                break
            if said_count == n:
                outcome = 0
                break

            # ---- opponent observes ------------------------------------
            if alice_moving:
                if bcode == CODE_MIRROR or bcode == CODE_TUPLE_MIRROR:
                    last_b = movebuf[0]
                elif bcode == CODE_RANDOM:
                    for j in range(quota):
                        _fen_add(self.fenB, n, movebuf[j], -1)
                        fcnt_b -= 1
            else:
                if acode == CODE_ODD_MIRROR or acode == CODE_RAND_LOG:
                    last_a = movebuf[0]
                elif acode == CODE_RANDOM:
                    for j in range(quota):
                        _fen_add(self.fenA, n, movebuf[j], -1)
                        fcnt_a -= 1
                elif acode == CODE_RAND_SQRT:
                    v = movebuf[0]
                    last_a = v
                    acount += 1
                    if sqphase == 0:
                        self._ingest(v)
                        idx = self._backup_index(v)
                        if idx >= 0:
                            self.spent[idx] = 1
                    else:
                        for i in range(miss_head, miss_head + miss_len):
                            if self.missing[i] == v:
                                for j in range(i, miss_head + miss_len - 1):
                                    self.missing[j] = self.missing[j + 1]
                                miss_len -= 1
                                break

        return outcome

    def play(self, game_seed, bint record=False):
        moves = [] if record else None
        outcome = self._run(<u64>game_seed, moves)
        return outcome, self.losing, moves


_OUTCOME_NAMES = ("BothWin", "AliceLoses", "BobLoses")


def play_game(int n, int a, int b, int acode, int bcode,
              int r, int k, unsigned long long q, game_seed):
    cdef Arena arena = Arena(n, a, b, acode, bcode, r, k, q)
    outcome, losing, moves = arena.play(game_seed, record=True)
    if arena.error:
        raise RuntimeError(f"kernel error {arena.error} (inconsistent recovery?)")
    return _OUTCOME_NAMES[outcome], losing, moves


def play_batch(int n, int a, int b, int acode, int bcode,
               int r, int k, unsigned long long q,
               master_seed, start, trials):
    cdef Arena arena = Arena(n, a, b, acode, bcode, r, k, q)
    cdef long long nw = 0, na = 0, nb = 0
    cdef long long i
    cdef u64 master = <u64>master_seed
    cdef long long lo = <long long>start
    cdef long long cnt = <long long>trials
    cdef int outcome
    for i in range(cnt):
        outcome = arena._run(_derive(master, <u64>(lo + i)), None)
        if arena.error:
            raise RuntimeError(f"kernel error {arena.error} at trial {lo + i}")
        if outcome == 0:
            nw += 1
        elif outcome == 1:
            na += 1
        else:
            nb += 1
    return {"both_win": nw, "alice_loses": na, "bob_loses": nb,
            "alice_error": 0, "bob_error": 0}
