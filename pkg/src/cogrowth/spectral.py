"""State orderings, adjacency matrices, the row-transformation derivation
of the collapsed matrix, Perron-Frobenius eigenpairs, and the strict
spectral-gap certificate.

The old state enumeration (OSE) sorts states by (vertex, letter).  The
new enumeration (NSE) used for one collapse step moves the collapse
states to the tail; the leading block is ordered exactly like the OSE of
the collapsed automaton, so removing a tail state's row/column after
adding it into the rows that feed it yields the collapsed adjacency
matrix positionally.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .automaton import Automaton, SStateSet, State, format_state, state_key
from .errors import (
    CertificateFailureError,
    ConvergenceFailureError,
    DecompositionViolationError,
    EntryOverflowError,
    PreconditionError,
)
from .words import letter_key


@dataclass(frozen=True)
class StateOrdering:
    """A fixed listing of automaton states; `boundary` (NSE only) is the
    index of the first collapse state."""

    states: tuple[State, ...]
    kind: str
    boundary: int | None = None

    def render(self, alphabet) -> list[str]:
        return [format_state(q, alphabet) for q in self.states]

    def index(self, state: State) -> int:
        return self.states.index(state)


def ose(aut: Automaton) -> StateOrdering:
    return StateOrdering(tuple(sorted(aut.states, key=state_key)), "OSE")


def make_nse(aut: Automaton, s: SStateSet) -> StateOrdering:
    """NSE: non-collapse states ordered by their post-merge (vertex,
    letter) keys but keeping their original names, then the collapse
    states."""
    if not s.elements:
        raise PreconditionError("NSE is defined relative to a nonempty state set")
    sset = set(s.elements)
    lead = sorted(
        (q for q in aut.states if q not in sset),
        key=lambda q: (s.merge.get(q[0], q[0]), letter_key(q[1])),
    )
    return StateOrdering(tuple(lead) + s.elements, "NSE", boundary=len(lead))


@dataclass(frozen=True)
class AdjacencyMatrix:
    """0/1 transition-count matrix of an automaton under a fixed ordering."""

    matrix: np.ndarray
    ordering: StateOrdering

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def to_csv(self, alphabet) -> str:
        names = self.ordering.render(alphabet)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + names)
        for name, row in zip(names, self.matrix):
            writer.writerow([name] + [int(x) for x in row])
        return buf.getvalue()

    def to_text(self, alphabet) -> str:
        """Aligned layout with a vertical separator before the collapse
        block and a rule above the collapse rows (NSE only)."""
        names = self.ordering.render(alphabet)
        width = max(len(n) for n in names)
        boundary = self.ordering.boundary
        lines = [
            "# rows/columns: "
            + " ".join(f"{i + 1}={n}" for i, n in enumerate(names))
        ]
        header = " " * (width + 1)
        for j in range(self.size):
            if boundary is not None and j == boundary:
                header += " |"
            header += f"{j + 1:>3d}"
        lines.append(header)
        for i, (name, row) in enumerate(zip(names, self.matrix)):
            if boundary is not None and i == boundary:
                lines.append("-" * len(header))
            text = f"{name:>{width}} "
            for j, x in enumerate(row):
                if boundary is not None and j == boundary:
                    text += " |"
                text += f"{int(x):>3d}"
            lines.append(text)
        return "\n".join(lines) + "\n"


def _is_irreducible(mat: np.ndarray) -> bool:
    n = mat.shape[0]
    if n == 0:
        return False
    for m in (mat, mat.T):
        seen = {0}
        stack = [0]
        while stack:
            for j in np.nonzero(m[stack.pop()])[0]:
                if int(j) not in seen:
                    seen.add(int(j))
                    stack.append(int(j))
        if len(seen) != n:
            return False
    return True


def adjacency(aut: Automaton, ordering: StateOrdering) -> AdjacencyMatrix:
    if set(ordering.states) != set(aut.states) or len(ordering.states) != len(
        aut.states
    ):
        raise PreconditionError("ordering does not cover the automaton's states")
    index = {q: i for i, q in enumerate(ordering.states)}
    mat = np.zeros((len(index), len(index)), dtype=np.int64)
    for (q, _), target in aut.transitions.items():
        mat[index[q], index[target]] = 1
    return AdjacencyMatrix(mat, ordering)


def _check_nse(m: AdjacencyMatrix, s: SStateSet):
    if m.ordering.kind != "NSE" or m.ordering.boundary is None:
        raise PreconditionError("matrix must be indexed by the NSE")
    if m.ordering.states[m.ordering.boundary :] != s.elements:
        raise PreconditionError("NSE tail does not match the collapse states")


def decompose(m: AdjacencyMatrix, s: SStateSet):
    """Blocks (M', U, Z, O) under the NSE; U rows carry at most a single
    1 and O is zero, or the upstream construction is broken."""
    _check_nse(m, s)
    b = m.ordering.boundary
    mp, u = m.matrix[:b, :b], m.matrix[:b, b:]
    z, o = m.matrix[b:, :b], m.matrix[b:, b:]
    if o.any():
        raise DecompositionViolationError("collapse block O is not zero")
    if (u.sum(axis=1) > 1).any() or not set(np.unique(u)) <= {0, 1}:
        raise DecompositionViolationError("a row of U has more than one entry")
    return mp, u, z, o


def derive_m1(m: AdjacencyMatrix, s: SStateSet) -> AdjacencyMatrix:
    """Add each collapse state's row into the rows feeding it, then drop
    the collapse rows and columns.

    The result is indexed by the collapsed automaton's OSE (the NSE lead
    block with merged vertex names).
    """
    _check_nse(m, s)
    b = m.ordering.boundary
    work = m.matrix.astype(np.int64).copy()
    for offset, state in enumerate(s.elements):
        col = b + offset
        feeders = np.nonzero(work[:, col])[0]
        if (feeders >= b).any():
            raise DecompositionViolationError("a collapse state feeds another")
        for i in feeders:
            work[i, :] += work[col, :]
    result = work[:b, :b]
    if (result > 1).any():
        raise EntryOverflowError("row transformation produced an entry above 1")
    lead = tuple(s.rename(q) for q in m.ordering.states[:b])
    return AdjacencyMatrix(result, StateOrdering(lead, "OSE"))


@dataclass(frozen=True)
class PFResult:
    """Perron-Frobenius eigenpair; the eigenvector has max entry 1."""

    eigenvalue: float
    eigenvector: np.ndarray
    iterations: int
    residual: float

    def to_json(self, states=None, alphabet=None) -> str:
        data = {
            "eigenvalue": float(self.eigenvalue),
            "eigenvector": [float(x) for x in self.eigenvector],
            "iterations": self.iterations,
            "residual": float(self.residual),
        }
        if states is not None and alphabet is not None:
            data["states"] = [format_state(q, alphabet) for q in states]
        return json.dumps(data, indent=2)


def pf_eigen(m: AdjacencyMatrix, tol: float = 1e-10, max_iter: int = 10**6) -> PFResult:
    """Power iteration on (matrix + identity), which is primitive for any
    irreducible matrix, with the shift undone in the reported value."""
    mat = np.asarray(m.matrix, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("matrix must be square")
    if (mat < 0).any() or (mat != np.round(mat)).any():
        raise ValueError("matrix must be nonnegative and integral")
    if not _is_irreducible(m.matrix):
        raise ValueError("matrix must be irreducible")
    shifted = mat + np.eye(mat.shape[0])
    v = np.ones(mat.shape[0])
    for iteration in range(1, max_iter + 1):
        y = shifted @ v
        mv = y - v
        lam = float(v @ mv) / float(v @ v)
        residual = float(np.max(np.abs(mv - lam * v)))
        if residual <= tol:
            assert lam >= 1 - 1e-9 and v.min() > 0
            return PFResult(lam, v, iteration, residual)
        v = y / y.max()
    raise ConvergenceFailureError(
        f"power iteration did not reach residual {tol} in {max_iter} iterations"
    )


def cogrowth_rate(m: AdjacencyMatrix, tol: float = 1e-10) -> tuple[float, float]:
    """(cogrowth, entropy) = (eigenvalue, log eigenvalue)."""
    lam = pf_eigen(m, tol=tol).eigenvalue
    return lam, math.log(lam)


@dataclass(frozen=True)
class InequalityCertificate:
    """Witness for the strict spectral gap.

    ``u`` extends the collapsed matrix's eigenvector over the full NSE;
    ``strict_rows`` are the 1-based NSE rows with strict slack; per
    collapse state the chosen value and its admissible open interval are
    recorded.
    """

    lam1: float
    u: np.ndarray
    strict_rows: tuple[int, ...]
    s_values: dict[State, tuple[float, float, float]]
    u_choice: int | None

    def to_json(self, ordering: StateOrdering, alphabet) -> str:
        return json.dumps(
            {
                "lambda_1": float(self.lam1),
                "u": [float(x) for x in self.u],
                "rows": ordering.render(alphabet),
                "strict_rows": list(self.strict_rows),
                "choice": self.u_choice,
                "s_entries": {
                    format_state(q, alphabet): {
                        "value": val,
                        "lower": lo,
                        "upper": hi,
                    }
                    for q, (val, lo, hi) in self.s_values.items()
                },
            },
            indent=2,
        )


def certify_inequality(
    m: AdjacencyMatrix,
    m1: AdjacencyMatrix,
    s: SStateSet,
    u_choice: int = 3,
    u_override: float | None = None,
    tol: float = 1e-10,
    slack_tol: float = 1e-9,
) -> InequalityCertificate:
    """Build the comparison vector from the collapsed eigenvector and
    verify (M u)_j <= lam1 u_j everywhere, strictly where the chosen
    construction guarantees it.  By the Perron-Frobenius comparison
    theorem this certifies that M's eigenvalue is strictly below lam1.

    Choice 1 takes each collapse entry at its lower bound (strict rows:
    the feeder rows), choice 2 at its upper bound (strict rows: the
    collapse rows), choice 3 at the midpoint (strict rows: both).  A
    scalar override replaces every collapse entry; its strict rows are
    whatever the verification finds.

    The comparison vector is the collapsed eigenvector scaled so its
    smallest entry is 1; override values and the reported bounds are
    expressed in that scale.  Verification tolerances scale with the
    vector's largest entry, matching how the eigen residual rescales.
    """
    _check_nse(m, s)
    b = m.ordering.boundary
    if tuple(s.rename(q) for q in m.ordering.states[:b]) != m1.ordering.states:
        raise PreconditionError("collapsed matrix does not match the NSE lead block")
    if u_choice not in (1, 2, 3):
        raise PreconditionError("u_choice must be 1, 2 or 3")

    pf1 = pf_eigen(m1, tol=tol)
    lam1 = pf1.eigenvalue
    n = m.size
    u = np.zeros(n)
    u[:b] = pf1.eigenvector / pf1.eigenvector.min()

    expected_strict: set[int] = set()
    s_values: dict[State, tuple[float, float, float]] = {}
    for offset, state in enumerate(s.elements):
        row = b + offset
        bound = float(m.matrix[row, :b] @ u[:b])  # the collapse row over the lead block
        lower, upper = bound / lam1, bound
        if u_override is not None:
            value = float(u_override)
        elif u_choice == 1:
            value = lower
        elif u_choice == 2:
            value = upper
        else:
            value = (lower + upper) / 2
        u[row] = value
        s_values[state] = (value, lower, upper)
        feeders = np.nonzero(m.matrix[:, row])[0]
        if u_override is None:
            if u_choice in (1, 3):
                expected_strict.update(int(i) for i in feeders)
            if u_choice in (2, 3):
                expected_strict.add(row)

    if u.min() <= 0:
        raise CertificateFailureError("comparison vector is not strictly positive")
    mu = m.matrix @ u
    lu = lam1 * u
    row_tol = slack_tol * float(u.max())
    strict = []
    for j in range(n):
        if mu[j] > lu[j] + row_tol:
            raise CertificateFailureError(
                f"(Mu) exceeds lam1*u at NSE row {j + 1}", row=j + 1
            )
        if mu[j] < lu[j] - row_tol:
            strict.append(j)
    missing = expected_strict - set(strict)
    if missing:
        raise CertificateFailureError(
            f"expected strict slack missing at NSE rows {sorted(i + 1 for i in missing)}"
        )
    if not strict:
        raise CertificateFailureError("no row has strict slack")
    return InequalityCertificate(
        lam1=lam1,
        u=u,
        strict_rows=tuple(j + 1 for j in strict),
        s_values=s_values,
        u_choice=None if u_override is not None else u_choice,
    )
