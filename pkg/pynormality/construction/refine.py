"""
The i-th refinement. It maps a (p+1)-sequence to an (i+1)-sequence whose
blocks in every base `b <= i+1` are long, have simple discrepancy at most
`2/(i+2)`, and contain no occurrence of some block of length `2 ell_i`.

Each recursive step splits a dyadic subinterval `L` of the last interval into
`2**K` candidates, `K = k_i ceil(log2(i+1))`, and keeps the leftmost candidate
whose extension blocks `u_b` all have `D(u_b, b) <= 1/(i+2)`.
"""
import math
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
import numpy as np
import tqdm
from joblib import Parallel, delayed, cpu_count
from pynormality.general.logger import log
from pynormality.general.performance import performance_check
from pynormality.general.errors import ConstructionError
from pynormality.general.pre_defaults import run_defaults
from pynormality.general.processing_functions import (power, ceil_log2, int_to_digits,
                                                      common_prefix_length)
from pynormality.construction.discrepancy import (DigitBlock, DigitCounter, simple_discrepancy,
                                                  missing_block_certain, block_discrepancy_exceeds,
                                                  prefix_deviations, sampled_lengths)
from pynormality.construction.intervals import (BadicInterval, contains,
                                                leftmost_badic_subinterval)
from pynormality.construction.tsequence import TSequence, extend_to_tsequence, validate
from pynormality.construction.parameters import PARAMS, delta

@dataclass(frozen = True)
class InitialRecord:
    """Result of the initial step, `x_b(I_0) = x_b(I) v_b`."""
    sequence: TSequence
    v: dict
    prefix_lengths: dict

@dataclass(frozen = True)
class StepRecord:
    """One recursive step: the selected candidate's rank (`scanned`), the number
    of search nodes evaluated (`visited`) and, per base, the extension block, its
    discrepancy and the new length of `x_b`."""
    step: int
    scanned: int
    visited: int
    u: dict
    discrepancies: dict
    x_lengths: dict

    @property
    def u_lengths(self):
        return {b: len(u) for b, u in self.u.items()}

@dataclass(frozen = True)
class RefineResult:
    i: int
    p: int
    input: TSequence
    output: TSequence
    initial: InitialRecord
    steps: tuple
    conforming: bool = True

@dataclass
class RoundReport:
    """Outcome of the post-refinement checks for one round."""
    i: int
    p: int
    bases: list
    violations: list = field(default_factory = list)
    notices: list = field(default_factory = list)

    @property
    def passed(self):
        return len(self.violations) == 0

def _count_bounds(n, b, eps):
    # digit counts c with |c/n - 1/b| <= eps
    lo = max(0, math.ceil(n * (Fraction(1, b) - eps)))
    hi = math.floor(n * (Fraction(1, b) + eps))
    return lo, hi

def _feasible(counts, n, lo, hi, b):
    # can the free positions be filled so that every count ends in [lo, hi]
    if b * hi < n:
        return False
    total = 0
    for c in counts:
        if c > hi:
            return False
        total += max(c, lo)
    return total <= n

def _departure_feasible(counts, path, lo, hi, n, b, above):
    """Does some block follow `path` up to a position, then take a larger (`above`)
    or smaller digit there and leave the rest free, with balanced counts?

    `counts` are the digit counts in front of `path`.
    """
    if path.size == 0:
        return False
    steps = np.eye(b, dtype = np.int64)[path]
    before = counts[None, :] + np.cumsum(steps, axis = 0) - steps
    over = np.maximum(before, lo).sum(axis = 1)
    top = before.max(axis = 1)
    grid = np.arange(b)[None, :]
    allowed = grid > path[:, None] if above else grid < path[:, None]
    new_over = over[:, None] + (before >= lo)
    new_top = np.maximum(top[:, None], before + 1)
    return bool((allowed & (new_top <= hi) & (new_over <= n)).any())

def _range_feasible(first, last, lo, hi, b):
    """True when some block between the equal-length blocks `first` and `last`
    (inclusive, as numbers) has every digit count in [lo, hi]."""
    n = len(first)
    if b * hi < n:
        return False
    f = np.frombuffer(first, dtype = np.uint8).astype(np.int64)
    l = np.frombuffer(last, dtype = np.uint8).astype(np.int64)
    k = common_prefix_length(first, last)
    if k == n:
        counts = np.bincount(f, minlength = b)
        return bool(counts.max() <= hi and counts.min() >= lo)
    shared = np.bincount(f[:k], minlength = b)
    for d in range(int(f[k]) + 1, int(l[k])):
        counts = shared.copy()
        counts[d] += 1
        if _feasible(counts.tolist(), n, lo, hi, b):
            return True
    for edge, above in ((f, True), (l, False)):
        counts = shared.copy()
        counts[edge[k]] += 1
        if _departure_feasible(counts, edge[k + 1:], lo, hi, n, b, above):
            return True
        whole = np.bincount(edge, minlength = b)
        if whole.max() <= hi and whole.min() >= lo:
            return True
    return False

def _ones_span(low, high, weighted, spare, pops, order):
    """Fewest and most ones carried by `weighted` digit groups when they and `spare`
    unweighted groups take digits with per-digit totals in [low, high]."""
    total = weighted + spare
    if any(l > h for l, h in zip(low, high)) or sum(low) > total or sum(high) < total:
        return None
    span = []
    for ranking in (order, order[::-1]):
        counts = list(low)
        left = total - sum(low)
        for d in ranking:
            add = min(left, high[d] - low[d])
            counts[d] += add
            left -= add
        take, ones = weighted, 0
        for d in ranking:
            used = min(take, counts[d])
            ones += used * pops[d]
            take -= used
        span.append(ones)
    return span

class CandidateSearch():
    """Everything a recursive step needs to evaluate candidate ranks.

    Candidate `c` is the dyadic interval `J_2` of depth `M = depth(L) + K` and index
    `(index(L) << K) + c`. Depths of the extended `J_b` do not depend on `c`.

    Parameters
    ----------
    prev : TSequence
        The (i+1)-sequence to extend.
    i : int
        Refinement index.
    params : ParamTable
        Parameter schedule.
    guard_bits : int, optional
        Extra fixed-point bits for the pruned search, by default 64.
    """

    def __init__(self, prev, i, params, guard_bits = 64):
        self.i = i
        self.t = i + 1
        self.bases = list(range(2, self.t + 1))
        self.eps = Fraction(1, i + 2)
        self.K = params.k(i) * ceil_log2(i + 1)
        self.L = leftmost_badic_subinterval(prev.interval(self.t), 2)
        self.M = self.L.depth + self.K
        self.root = self.L.index << self.K

        self.prev_depths = prev.lengths()
        first = extend_to_tsequence(BadicInterval(2, self.M, self.root), self.t)
        self.depths = first.lengths()
        self.n = {b: self.depths[b] - self.prev_depths[b] for b in self.bases}
        self.offsets = {b: prev.interval(b).index * power(b, self.n[b]) for b in self.bases}
        self.bounds = {b: _count_bounds(self.n[b], b, self.eps) for b in self.bases}

        head_length = self.L.depth - self.prev_depths[2]
        head = self.L.index - (prev.interval(2).index << head_length)
        self.head_ones = head.bit_count()
        self.head_zeros = head_length - self.head_ones

        # power of two bases: u_b is the bit string head ‖ c ‖ tail, digits are bit groups
        self.aligned = dict()
        for b in self.bases[1:]:
            if b & (b - 1):
                continue
            j = b.bit_length() - 1
            tail = j * self.depths[b] - self.M
            offset = (self.root << tail) - (prev.interval(b).index << (j * self.n[b]))
            head_bits = j * self.n[b] - tail - self.K
            if tail < 0 or head_bits < 0 or offset < 0 or offset & ((1 << (tail + self.K)) - 1):
                continue
            self.aligned[b] = (j, offset >> (tail + self.K), head_bits)
        self.pops = {b: [d.bit_count() for d in range(b)] for b in self.aligned}

        # fixed-point enclosures of candidate positions in the local coordinates of I_b
        self.fixed = dict()
        for b in self.bases[1:]:
            if b in self.aligned:
                continue
            beta = power(b, self.prev_depths[b])
            offset = self.root * beta - (prev.interval(b).index << self.M)
            size = power(b, self.n[b])
            width = size.bit_length() + self.K + guard_bits
            shift = self.M - width
            if shift > 0:
                mask = (1 << shift) - 1
                err = 0 if (offset & mask) == 0 and (beta & mask) == 0 else 1
                self.fixed[b] = (offset >> shift, beta >> shift, err, size, width)
            else:
                self.fixed[b] = (offset << -shift, beta << -shift, 0, size, width)

    def evaluate(self, c):
        """Exact check of candidate `c`, returns `(sequence, u, discrepancies)` or None."""
        seq = extend_to_tsequence(BadicInterval(2, self.M, self.root + c), self.t)
        u, disc = dict(), dict()
        for b in self.bases:
            u_b = DigitBlock.from_int(seq.interval(b).index - self.offsets[b], b, self.n[b])
            d = simple_discrepancy(u_b)
            if d > self.eps:
                return None
            u[b], disc[b] = u_b, d
        return seq, u, disc

    def first_suitable(self, start, stop):
        for c in range(start, stop):
            if self.evaluate(c) is not None:
                return c
        return None

    def _binary_feasible(self, r, v):
        ones = self.head_ones + v.bit_count()
        zeros = self.head_zeros + r - v.bit_count()
        lo, hi = self.bounds[2]
        return _feasible((zeros, ones), self.n[2], lo, hi, 2)

    def _badic_feasible(self, b, r, v):
        offset, beta, err, size, width = self.fixed[b]
        free = self.K - r
        lo = offset + (v << free) * beta
        hi = min(offset + err + ((v + 1) << free) * (beta + err), 1 << width)
        first = (lo * size) >> width
        last = -((-hi * size) >> width) - 1
        n = self.n[b]
        first_digits = int_to_digits(first, b, n)
        last_digits = int_to_digits(min(max(last, first), size - 1), b, n)
        lo_b, hi_b = self.bounds[b]
        return _range_feasible(first_digits, last_digits, lo_b, hi_b, b)

    def _aligned_feasible(self, b, r, v):
        """Joint check of base 2 and the power of two base `b`.

        The free rank bits count towards both bases, the tail bits of `u_b` only
        towards `b`. The tail and the digit groups that straddle a boundary are
        enumerated, the whole free groups are summarised by their digit totals.
        """
        j, head_value, head = self.aligned[b]
        ones = self.head_ones + v.bit_count()
        zeros = self.head_zeros + r - v.bit_count()
        free = self.K - r
        lo2, hi2 = self.bounds[2]
        need_lo = max(0, lo2 - ones, free + zeros - hi2)
        need_hi = min(free, hi2 - ones, free + zeros - lo2)
        if need_lo > need_hi:
            return False

        known = head + r
        cut = head + self.K
        rest = known % j
        value = (head_value << r) | v
        full = known // j
        counts = [0] * b
        if full:
            known_digits = np.frombuffer(int_to_digits(value >> rest, b, full), dtype = np.uint8)
            counts = np.bincount(known_digits, minlength = b).tolist()

        # straddling groups as (known bits, number known, free rank bits, tail bits)
        special = []
        first_whole = full + (1 if rest else 0)
        if rest:
            rank_bits = min((full + 1) * j, cut) - known
            special.append((value & ((1 << rest) - 1), rest, rank_bits, j - rest - rank_bits))
        if cut % j and cut // j >= first_whole:
            rank_bits = cut - (cut // j) * j
            special.append((0, 0, rank_bits, j - rank_bits))
        whole = max(0, cut // j - first_whole)
        tail_groups = self.n[b] - max(first_whole, -(-cut // j))

        lo, hi = self.bounds[b]
        pops = self.pops[b]
        order = sorted(range(b), key = pops.__getitem__)
        choices = [[((bits << (a + z)) | (c << z) | t, c.bit_count())
                    for c in range(1 << a) for t in range(1 << z)]
                   for bits, _, a, z in special]
        for combo in itertools.product(*choices):
            placed = list(counts)
            carried = 0
            for d, o in combo:
                placed[d] += 1
                carried += o
            if max(placed) > hi:
                continue
            span = _ones_span([max(0, lo - c) for c in placed], [hi - c for c in placed],
                              whole, tail_groups, pops, order)
            if span is None:
                continue
            if carried + span[0] <= need_hi and carried + span[1] >= need_lo:
                return True
        return False

    def search_pruned(self):
        """Depth-first walk over the bits of the rank, 0-branch first.

        A branch is dropped once no rank in it can give balanced digit counts.
        Base 2 is counted exactly. Power of two bases share their bits with the
        rank and are checked together with base 2. For the other bases the block
        range covered by the branch is checked exactly, digit by digit. Surviving
        leaves are checked exactly, so the first leaf that passes is the leftmost
        suitable candidate.
        """
        stack = [(0, 0)]
        visited = 0
        while stack:
            r, v = stack.pop()
            visited += 1
            if not self._binary_feasible(r, v):
                continue
            if not all(self._aligned_feasible(b, r, v) for b in self.aligned):
                continue
            if not all(self._badic_feasible(b, r, v) for b in self.fixed):
                continue
            if r == self.K:
                found = self.evaluate(v)
                if found is not None:
                    return v, visited, found
                continue
            stack.append((r + 1, (v << 1) | 1))
            stack.append((r + 1, v << 1))
        raise ConstructionError(f"No suitable candidate among the 2**{self.K} subintervals of L.")

    def search_linear(self, n_jobs = 0, chunk_size = 256):
        """Left to right scan over the ranks, optionally in parallel chunks.

        Parallel batches may evaluate candidates to the right of the answer, the
        smallest suitable rank of the first batch with a hit is selected.
        """
        total = 1 << self.K
        if n_jobs == 0:
            for c in range(total):
                found = self.evaluate(c)
                if found is not None:
                    return c, c + 1, found
            raise ConstructionError(f"No suitable candidate among the 2**{self.K} subintervals of L.")

        batch = cpu_count() if n_jobs < 0 else n_jobs
        visited = 0
        start = 0
        with Parallel(n_jobs = n_jobs, backend = "loky") as parallel:
            while start < total:
                chunks = []
                while start < total and len(chunks) < batch:
                    chunks.append((start, min(start + chunk_size, total)))
                    start += chunk_size
                hits = parallel(delayed(_first_suitable)(self, a, z) for a, z in chunks)
                visited += chunks[-1][1] - chunks[0][0]
                hits = [c for c in hits if c is not None]
                if hits:
                    c = min(hits)
                    return c, visited, self.evaluate(c)
        raise ConstructionError(f"No suitable candidate among the 2**{self.K} subintervals of L.")

def _first_suitable(search, start, stop):
    return search.first_suitable(start, stop)

def initial_step(input, i):
    """Leftmost dyadic subinterval of the last interval of `input` with at least a
    quarter of its measure, extended to an (i+1)-sequence."""
    if i < 1:
        raise ValueError(f"Refinement index must be at least 1, got `{i}`.")
    I02 = leftmost_badic_subinterval(input.interval(input.t), 2)
    return extend_to_tsequence(I02, i + 1)

def recursive_step(prev, i, params = PARAMS, scan = "pruned", n_jobs = 0,
                   chunk_size = 256, guard_bits = 64, step = 1):
    """Select the leftmost suitable candidate (i+1)-sequence inside `prev`.

    Parameters
    ----------
    prev : TSequence
        Current (i+1)-sequence.
    i : int
        Refinement index.
    params : ParamTable, optional
        Parameter schedule, by default `PARAMS`.
    scan : {"pruned", "linear"}, optional
        Search strategy, by default "pruned".
    n_jobs : int, optional
        `joblib` workers for the linear scan, 0 runs in this process, by default 0.
    chunk_size : int, optional
        Candidates per parallel task, by default 256.
    guard_bits : int, optional
        Extra fixed-point bits for the pruned search, by default 64.
    step : int, optional
        Step number stored in the record, by default 1.

    Returns
    -------
    tuple
        The new `TSequence` and its `StepRecord`.
    """
    if prev.t != i + 1:
        raise ValueError(f"Expected an {i + 1}-sequence, got a {prev.t}-sequence.")
    search = CandidateSearch(prev, i, params, guard_bits = guard_bits)
    if scan == "pruned":
        c, visited, found = search.search_pruned()
    elif scan == "linear":
        c, visited, found = search.search_linear(n_jobs = n_jobs, chunk_size = chunk_size)
    else:
        raise ValueError(f"Unknown scan strategy `{scan}`, choose from `pruned`, `linear`.")
    seq, u, disc = found
    return seq, StepRecord(step, c, visited, u, disc, seq.lengths())

def step_violations(record, i, params = PARAMS):
    """Invariants every step record satisfies: suitability, `k_i < |u_b| <= ell_i`
    and `u_b` not all zeros. Only suitability applies to test parameters."""
    violations = []
    eps = Fraction(1, i + 2)
    for b, u in record.u.items():
        if len(u) == 0:
            violations.append(f"step {record.step}: u_{b} is empty.")
            continue
        d = simple_discrepancy(u)
        if d > eps:
            violations.append(f"step {record.step}: D(u_{b}) = {d} exceeds {eps}.")
        if record.discrepancies.get(b) != d:
            violations.append(f"step {record.step}: recorded D(u_{b}) does not match the block.")
        if not params.conforming:
            continue
        if not len(u) > params.k(i):
            violations.append(f"step {record.step}: |u_{b}| = {len(u)} is not above k_{i} = {params.k(i)}.")
        if not len(u) <= params.ell(i):
            violations.append(f"step {record.step}: |u_{b}| = {len(u)} exceeds ell_{i} = {params.ell(i)}.")
        if u.is_all_zeros():
            violations.append(f"step {record.step}: u_{b} is all zeros.")
    return violations

def _conditions_met(lengths, discrepancies, current, i, params):
    ell_i = params.ell(i)
    min_length = params.ell(i + 1) * (i + 3)
    for b in range(2, i + 2):
        if not lengths[b] > min_length:
            return False
        if not discrepancies[b] <= Fraction(2, i + 2):
            return False
        if not missing_block_certain(lengths[b], b, 2 * ell_i):
            if not block_discrepancy_exceeds(current.x_b(b), 2 * ell_i, Fraction(1, power(b, 2 * ell_i + 1))):
                return False
    return True

def termination_met(current, i, params = PARAMS):
    """True when, for every base `b <= i+1`, `|x_b| > ell_{i+1}(i+3)`,
    `D(x_b, b) <= 2/(i+2)` and `D_{2 ell_i}(x_b, b) > b**-(2 ell_i + 1)`."""
    lengths = current.lengths()
    if any(b not in lengths for b in range(2, i + 2)):
        raise ValueError(f"Expected at least an {i + 1}-sequence, got a {current.t}-sequence.")
    if any(lengths[b] == 0 for b in range(2, i + 2)):
        return False
    discrepancies = {b: simple_discrepancy(current.x_b(b)) for b in range(2, i + 2)}
    return _conditions_met(lengths, discrepancies, current, i, params)

@performance_check
def refine(input, i, params = PARAMS, scan = None, n_jobs = None, chunk_size = None, guard_bits = None):
    """Apply the i-th refinement to a (p+1)-sequence.

    Parameters
    ----------
    input : TSequence
        A valid (p+1)-sequence.
    i : int
        Refinement index, at least 1.
    params : ParamTable, optional
        Parameter schedule, by default `PARAMS`.
    scan : {"pruned", "linear"}, optional
        Search strategy for the recursive steps, by default from `run_defaults`.
    n_jobs : int, optional
        Workers for the linear scan, by default from `run_defaults`.
    chunk_size : int, optional
        Candidates per parallel task, by default from `run_defaults`.
    guard_bits : int, optional
        Extra fixed-point bits for the pruned search, by default from `run_defaults`.

    Returns
    -------
    RefineResult
        Output (i+1)-sequence with the initial record and one record per step.
    """
    defaults = run_defaults()
    scan = defaults["scan"] if scan is None else scan
    n_jobs = defaults["n_jobs"] if n_jobs is None else n_jobs
    chunk_size = defaults["chunk_size"] if chunk_size is None else chunk_size
    guard_bits = defaults["guard_bits"] if guard_bits is None else guard_bits

    if i < 1:
        raise ValueError(f"Refinement index must be at least 1, got `{i}`.")
    p = input.t - 1
    bases = list(range(2, i + 2))
    log.info(f"> i = {i}, p = {p}, k_i = {params.k(i)}, ell_i = {params.ell(i)}.")

    I0 = initial_step(input, i)
    v = dict()
    for b in bases:
        prefix = input.x_b(b) if b <= p + 1 else DigitBlock(b)
        block = I0.x_b(b)
        if not prefix.is_prefix_of(block):
            raise ConstructionError(f"Initial step left the interval I_{b}.")
        v[b] = block[len(prefix):]
    prefix_lengths = {b: input.interval(b).depth for b in range(2, min(i, p) + 2)}
    initial = InitialRecord(I0, v, prefix_lengths)

    counters = {b: DigitCounter(b, I0.x_b(b)) for b in bases}
    current = I0
    steps = list()
    waitbar = tqdm.tqdm(desc = f"refine i={i}", unit = "step", leave = False, delay = 5)
    while True:
        current, record = recursive_step(current, i, params = params, scan = scan, n_jobs = n_jobs,
                                         chunk_size = chunk_size, guard_bits = guard_bits,
                                         step = len(steps) + 1)
        problems = step_violations(record, i, params = params)
        if problems:
            raise ConstructionError(f"Step record invariant failed, {problems[0]}")
        for b in bases:
            counters[b].update(record.u[b])
        steps.append(record)
        waitbar.update(1)
        discrepancies = {b: counters[b].discrepancy() for b in bases}
        if _conditions_met(record.x_lengths, discrepancies, current, i, params):
            break
    waitbar.close()

    log.info(f"> {len(steps)} steps, |x_b| = `{current.lengths()}`.")
    return RefineResult(i, p, input, current, initial, tuple(steps), conforming = params.conforming)

def round_violations(prev_blocks, new_blocks, outer, inner, i, p, params = PARAMS,
                     stride = None, full_range_limit = None):
    """Checks that hold after a refinement, for every base `b <= min(i, p) + 1`.

    Parameters
    ----------
    prev_blocks : dict
        Base to `x_b` of the input sequence.
    new_blocks : dict
        Base to `x_b` of the output sequence.
    outer : BadicInterval
        Last interval `I_{p+1}` of the input.
    inner : BadicInterval
        First interval `R_2` of the output.
    i, p : int
        Refinement index and input size.
    params : ParamTable, optional
        Conforming parameter schedule, by default `PARAMS`.
    stride : int, optional
        Sampling stride for the prefix check on large ranges, by default from `run_defaults`.
    full_range_limit : int, optional
        Ranges up to this size are checked at stride 1, by default from `run_defaults`.

    Returns
    -------
    RoundReport
        Violations and notices.
    """
    if not params.conforming:
        raise ValueError("Post-refinement checks need conforming parameters, test parameters were used.")
    defaults = run_defaults()
    stride = defaults["stride"] if stride is None else stride
    full_range_limit = defaults["full_range_limit"] if full_range_limit is None else full_range_limit

    bases = list(range(2, min(i, p) + 2))
    report = RoundReport(i, p, bases)
    ell_i = params.ell(i)
    delta_bits = ceil_log2(delta(p).denominator)

    if not contains(outer, inner):
        report.violations.append("nesting: R_2 is not inside I_{p+1}.")

    for b in bases:
        x_I, x_R = prev_blocks[b], new_blocks[b]
        if not x_I.is_prefix_of(x_R):
            report.violations.append(f"base {b}: x_b(I) is not a prefix of x_b(R).")
            continue
        d_R = simple_discrepancy(x_R)
        if not d_R <= Fraction(2, i + 2):
            report.violations.append(f"discrepancy: base {b}: D(x_b(R)) = {d_R} exceeds 2/{i + 2}.")
        if not block_discrepancy_exceeds(x_R, 2 * ell_i, Fraction(1, power(b, 2 * ell_i + 1))):
            report.violations.append(f"missing block: base {b}: block discrepancy at {2 * ell_i} is too small.")
        if not len(x_R) > params.ell(i + 1) * (i + 3):
            report.violations.append(f"length: base {b}: |x_b(R)| = {len(x_R)} is not above {params.ell(i + 1) * (i + 3)}.")

        if len(x_I) == 0:
            report.notices.append(f"prefixes: base {b}: skipped, x_b(I) is empty.")
            continue
        bound = (simple_discrepancy(x_I) + Fraction(delta_bits, len(x_I))
                 + Fraction(1, i + 2) + Fraction(ell_i, len(x_I)))
        span = len(x_R) - len(x_I) + 1
        step = 1 if span <= full_range_limit else stride
        lengths = sampled_lengths(len(x_I), len(x_R), step)
        deviations = prefix_deviations(x_R, lengths)
        # D(x|l) = dev / (b l) <= bound
        for l, dev in zip(lengths.tolist(), deviations.tolist()):
            if dev * bound.denominator > bound.numerator * b * l:
                report.violations.append(f"prefixes: base {b}: D(x_b(R)|{l}) exceeds {bound}.")
                break
        if step > 1:
            report.notices.append(f"prefixes: base {b}: {lengths.size} of {span} prefix lengths checked (stride {step}).")
    return report

def check_refinement(input, result, i, p, params = PARAMS, stride = None, full_range_limit = None):
    """Run the post-refinement checks on a `refine(input, i)` result.

    Besides the five per-base checks this verifies the length accounting
    `x_b(R) = x_b(I) v_b u_{b,1} ... u_{b,n}` and `|v_b| <= ceil(-log2 delta_p)`.

    Returns
    -------
    RoundReport
        Violations and notices.
    """
    if not result.conforming:
        raise ValueError("Post-refinement checks need conforming parameters, test parameters were used.")
    bases = range(2, min(i, p) + 2)
    prev_blocks = {b: input.x_b(b) for b in bases}
    new_blocks = {b: result.output.x_b(b) for b in bases}
    report = round_violations(prev_blocks, new_blocks, input.interval(p + 1), result.output.interval(2),
                              i, p, params = params, stride = stride, full_range_limit = full_range_limit)
    delta_bits = ceil_log2(delta(p).denominator)
    for b in bases:
        rebuilt = b"".join([prev_blocks[b].digits, result.initial.v[b].digits] + [s.u[b].digits for s in result.steps])
        if rebuilt != new_blocks[b].digits:
            report.violations.append(f"base {b}: x_b(I) v_b u_1 ... u_n does not rebuild x_b(R).")
        if len(result.initial.v[b]) > delta_bits:
            report.violations.append(f"base {b}: |v_b| = {len(result.initial.v[b])} exceeds {delta_bits}.")
    for problem in validate(result.output):
        report.violations.append(f"output sequence: {problem}")
    return report
