"""One reduction step, and the full iterated reduction.

A step: build the core, pick the collapse automorphism, build the
automaton and both matrices (row-transformed and directly collapsed,
checked against each other), compute both eigenvalues, and certify the
strict gap.  The follow-up generators are the cyclically reduced images
of the input generators, so iterating strictly shrinks the core until a
single-vertex core remains or no cut vertex is left.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automaton import (
    Automaton,
    SStateSet,
    build_automaton,
    collapse_automaton,
)
from .core_graph import CollapseData, CoreGraph, build_core, collapse_core
from .errors import (
    CogrowthError,
    NoCutVertexError,
    NoValidAutomorphismError,
)
from .spectral import (
    AdjacencyMatrix,
    InequalityCertificate,
    PFResult,
    StateOrdering,
    adjacency,
    certify_inequality,
    decompose,
    derive_m1,
    make_nse,
    ose,
    pf_eigen,
)
from .whitehead import choose_automorphism
from .words import Alphabet, WhiteheadAutomorphism, Word, apply_whitehead, cyclic_reduce


@dataclass(frozen=True)
class StepReport:
    """Everything one reduction step produces."""

    alphabet: Alphabet
    gens_before: tuple[Word, ...]
    gens_after: tuple[Word, ...]
    phi: WhiteheadAutomorphism
    collapse: CollapseData
    s_states: SStateSet
    core_before: CoreGraph
    core_after: CoreGraph
    aut_before: Automaton
    aut_after: Automaton
    ose_before: StateOrdering
    nse: StateOrdering
    ose_after: StateOrdering
    m: AdjacencyMatrix
    m1: AdjacencyMatrix
    pf: PFResult
    pf1: PFResult
    certificate: InequalityCertificate


def reduce_step(
    gens,
    alphabet: Alphabet,
    u_choice: int = 3,
    u_override: float | None = None,
    tol: float = 1e-10,
) -> StepReport:
    """Run one collapse step; raises NoCutVertexError or
    NoValidAutomorphismError when no step exists."""
    core = build_core(list(gens), alphabet)
    phi, cd = choose_automorphism(core)
    aut = build_automaton(core)
    s = SStateSet.from_collapse(aut, cd)
    nse = make_nse(aut, s)
    m = adjacency(aut, nse)
    decompose(m, s)
    m1 = derive_m1(m, s)

    collapsed = collapse_automaton(aut, s)
    m1_direct = adjacency(collapsed, ose(collapsed))
    if m1.ordering.states != m1_direct.ordering.states or not np.array_equal(
        m1.matrix, m1_direct.matrix
    ):
        raise CogrowthError(
            "row-transformed matrix disagrees with the collapsed automaton"
        )
    core_after = collapse_core(core, cd)

    pf = pf_eigen(m, tol=tol)
    pf1 = pf_eigen(m1, tol=tol)
    certificate = certify_inequality(
        m, m1, s, u_choice=u_choice, u_override=u_override, tol=tol,
        slack_tol=10 * tol,
    )
    gens_after = tuple(cyclic_reduce(apply_whitehead(phi, w))[0] for w in gens)
    return StepReport(
        alphabet=alphabet,
        gens_before=tuple(gens),
        gens_after=gens_after,
        phi=phi,
        collapse=cd,
        s_states=s,
        core_before=core,
        core_after=core_after,
        aut_before=aut,
        aut_after=collapsed,
        ose_before=ose(aut),
        nse=nse,
        ose_after=m1.ordering,
        m=m,
        m1=m1,
        pf=pf,
        pf1=pf1,
        certificate=certificate,
    )


@dataclass(frozen=True)
class ReductionTrace:
    """Steps run until a terminal status.

    Statuses: ``single_vertex_core`` (the subgroup reduced to a wedge of
    basis loops, the constructive free-factor outcome), ``no_cut_vertex``
    (certified not a free factor), ``no_valid_automorphism`` (search
    exhausted, nothing certified).
    """

    steps: tuple[StepReport, ...]
    status: str
    final_gens: tuple[Word, ...]


def reduce_full(
    gens, alphabet: Alphabet, u_choice: int = 3, tol: float = 1e-10
) -> ReductionTrace:
    gens = tuple(gens)
    steps: list[StepReport] = []
    while True:
        core = build_core(list(gens), alphabet)
        if core.n_vertices == 1:
            return ReductionTrace(tuple(steps), "single_vertex_core", gens)
        try:
            step = reduce_step(gens, alphabet, u_choice=u_choice, tol=tol)
        except NoCutVertexError:
            return ReductionTrace(tuple(steps), "no_cut_vertex", gens)
        except NoValidAutomorphismError:
            return ReductionTrace(tuple(steps), "no_valid_automorphism", gens)
        steps.append(step)
        gens = step.gens_after
