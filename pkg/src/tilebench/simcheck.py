"""Bounded checking of scale-factor (macrotile) simulation between tile systems.

One tile system (the simulator) simulates another (the simulated system) at
scale ``m`` when every m-by-m (or m-by-m-by-m in 3D) block of simulator tiles,
a *macrotile*, stands for at most one simulated tile. A :class:`Resolver`
makes that correspondence concrete and auditable: it is an ordered list of
pattern rules, the first rule whose pattern occurs inside a block decides the
block's simulated tile, and a block matching no rule stands for empty space.
:func:`r_star` lifts the resolver to whole assemblies.

The checks verify, over bounded breadth-first explorations of both systems,
the defining properties of such a simulation:

- *representation monotonicity*: once a block resolves to a tile, further
  attachments inside it never change the outcome;
- *clean mapping*: non-empty blocks standing for empty space (fuzz) must be
  axis-adjacent to a resolved block — diagonal fuzz is forbidden;
- *follows*: every simulator attachment maps to legal simulated growth;
- *equivalent productions*: images of producibles and terminals coincide
  exactly with the simulated system's producibles and terminals;
- *models*: for every simulated assembly there is a witness set of simulator
  preimages from which every simulated successor remains reachable, and which
  covers every preimage that can still grow toward that successor;
- *directedness preservation*: both systems get the same directedness verdict.

Every verdict is pass, fail, or unknown. Breadth-first exploration by size
makes the region of assemblies within the tile bound complete, so failures
found there are definite and carry a replayable witness; when the bound
truncates the evidence the verdict is unknown, never a silent pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any, Mapping

from .core import Assembly, Point, TileSystem, add, directions
from .dynamics import (
    DEFAULT_STATE_BUDGET,
    AssemblyTrace,
    AttachError,
    ExplorationGraph,
    Placement,
    attach,
    check_directed,
    explore_graph,
    frontier,
)

DEFAULT_BOUND = 12
DEFAULT_CANDIDATE_CAP = 4096

CHECK_NAMES = (
    "monotonic",
    "clean",
    "follows",
    "productions",
    "models",
    "directedness",
)


@dataclass(frozen=True)
class MBlock:
    """A block of simulator tiles keyed by offset within ``[0, scale)^d``."""

    scale: int
    cells: tuple[tuple[Point, str], ...]

    def __post_init__(self) -> None:
        if self.scale < 1:
            raise ValueError("block scale must be positive")
        canon = tuple(sorted((tuple(p), str(t)) for p, t in self.cells))
        object.__setattr__(self, "cells", canon)
        seen = set()
        for p, _ in canon:
            if any(c < 0 or c >= self.scale for c in p):
                raise ValueError(f"block cell {p} outside [0, {self.scale})")
            if p in seen:
                raise ValueError(f"duplicate block cell {p}")
            seen.add(p)

    @classmethod
    def of(cls, assembly: Assembly, scale: int, macro: Point) -> "MBlock":
        """The block of ``assembly`` at macrotile coordinate ``macro``."""
        base = tuple(c * scale for c in macro)
        cells = []
        for p, t in assembly.placements.items():
            off = tuple(c - b for c, b in zip(p, base))
            if all(0 <= o < scale for o in off):
                cells.append((off, t))
        return cls(scale, tuple(cells))

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class Rule:
    """One resolver rule: if ``pattern`` occurs in a block, it is ``output``."""

    pattern: tuple[tuple[Point, str], ...]
    output: str

    def __post_init__(self) -> None:
        canon = tuple(sorted((tuple(p), str(t)) for p, t in self.pattern))
        if not canon:
            raise ValueError("rule pattern must be non-empty")
        object.__setattr__(self, "pattern", canon)


@dataclass(frozen=True)
class Resolver:
    """An ordered rule list evaluated first-match-wins over blocks."""

    scale: int
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.scale < 1:
            raise ValueError("resolver scale must be positive")
        for rule in self.rules:
            for p, _ in rule.pattern:
                if any(c < 0 or c >= self.scale for c in p):
                    raise ValueError(
                        f"rule pattern cell {p} outside [0, {self.scale})"
                    )


def eval_r(resolver: Resolver, block: MBlock) -> str | None:
    """First-matching-rule output for a block, or None for empty space."""
    if block.scale != resolver.scale:
        raise ValueError("block and resolver scales differ")
    cell_set = set(block.cells)
    for rule in resolver.rules:
        if set(rule.pattern) <= cell_set:
            return rule.output
    return None


@dataclass(frozen=True)
class SimulationSetup:
    """A simulator system, a simulated system, a scale, and a resolver.

    Both systems must share a dimension; to check a 2D system simulated by a
    3D one, embed the 2D system into the z=0 plane first (see
    ``tilebench.systems.embed_2d_in_3d``).
    """

    simulator: TileSystem
    simulated: TileSystem
    scale: int
    resolver: Resolver

    def __post_init__(self) -> None:
        if self.scale < 1:
            raise ValueError("scale must be positive")
        if self.resolver.scale != self.scale:
            raise ValueError("resolver scale differs from setup scale")
        dim_s = self.simulator.variant.dimension
        dim_t = self.simulated.variant.dimension
        if dim_s != dim_t:
            raise ValueError(
                "simulator and simulated systems have different dimensions; "
                "embed the 2D system at z=0 before checking a 3D simulation"
            )
        for rule in self.resolver.rules:
            for p, tile_id in rule.pattern:
                if len(p) != dim_s:
                    raise ValueError(f"rule pattern cell {p} has wrong dimension")
                if tile_id not in self.simulator.tile_set:
                    raise ValueError(f"rule pattern uses unknown simulator tile {tile_id!r}")
            if rule.output not in self.simulated.tile_set:
                raise ValueError(f"rule output is unknown simulated tile {rule.output!r}")

    @property
    def dimension(self) -> int:
        return self.simulator.variant.dimension


def identity_setup(system: TileSystem) -> SimulationSetup:
    """The scale-1 setup in which a system simulates itself tile-for-tile."""
    zero = (0,) * system.variant.dimension
    rules = tuple(Rule(((zero, t.id),), t.id) for t in system.tile_set)
    return SimulationSetup(system, system, 1, Resolver(1, rules))


def _blocks_of(assembly: Assembly, scale: int) -> dict[Point, list[tuple[Point, str]]]:
    blocks: dict[Point, list[tuple[Point, str]]] = {}
    for p, t in assembly.placements.items():
        macro = tuple(c // scale for c in p)
        off = tuple(c - mc * scale for c, mc in zip(p, macro))
        blocks.setdefault(macro, []).append((off, t))
    return blocks


def r_star(setup: SimulationSetup, assembly: Assembly) -> Assembly:
    """Evaluate the resolver on every non-empty block of an assembly.

    Blocks that are empty or match no rule contribute empty space, so the
    image can be smaller than the assembly suggests; it is never larger.
    """
    placed = {}
    for macro, cells in _blocks_of(assembly, setup.scale).items():
        out = eval_r(setup.resolver, MBlock(setup.scale, tuple(cells)))
        if out is not None:
            placed[macro] = out
    return Assembly(setup.simulated.variant.dimension, placed)


@dataclass(frozen=True)
class FuzzViolation:
    """A non-empty block standing for empty space with no resolved axis neighbor."""

    block: Point
    kind: str = "diagonal_fuzz"


def check_clean_mapping(setup: SimulationSetup, assembly: Assembly) -> list[FuzzViolation]:
    """All blocks of ``assembly`` that violate the fuzz placement rule.

    A non-empty block mapping to empty space must have an axis-adjacent
    macrotile position in the image's domain. An assembly with at most one
    non-empty block passes vacuously.
    """
    nonempty = set(_blocks_of(assembly, setup.scale))
    if len(nonempty) <= 1:
        return []
    dom = r_star(setup, assembly).domain()
    dirs = directions(setup.dimension)
    violations = []
    for block in sorted(nonempty):
        if block in dom:
            continue
        if any(add(block, d) in dom for d in dirs):
            continue
        violations.append(FuzzViolation(block))
    return violations


@dataclass(frozen=True)
class SimCheckReport:
    """A single check's verdict: pass, fail with witness, or unknown."""

    check: str
    status: str
    bound: int
    witness: Any = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def failed(self) -> bool:
        return self.status == "fail"


def _trace_to(graph: ExplorationGraph, system: TileSystem, index: int) -> AssemblyTrace:
    """A replayable trace from the seed to exploration-graph node ``index``."""
    first_parent: dict[int, tuple[int, Placement]] = {}
    for pi, ci, pl in graph.edges:
        if ci not in first_parent:
            first_parent[ci] = (pi, pl)
    steps = []
    cur = index
    while cur != 0:
        pi, pl = first_parent[cur]
        steps.append(pl)
        cur = pi
    return AssemblyTrace(system, list(reversed(steps)))


def check_representation_monotonic(
    setup: SimulationSetup,
    bound: int = DEFAULT_BOUND,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> SimCheckReport:
    """No reachable attachment may change an already-resolved block.

    A single attachment alters exactly one block, so it suffices to re-evaluate
    the block containing each explored attachment.
    """
    graph = explore_graph(setup.simulator, max_tiles=bound, state_budget=state_budget)
    m = setup.scale
    for pi, ci, pl in graph.edges:
        macro = tuple(c // m for c in pl.location)
        before = eval_r(setup.resolver, MBlock.of(graph.nodes[pi], m, macro))
        if before is None:
            continue
        after = eval_r(setup.resolver, MBlock.of(graph.nodes[ci], m, macro))
        if after != before:
            witness = {
                "trace": _trace_to(graph, setup.simulator, pi),
                "placement": pl,
                "block": macro,
                "before": before,
                "after": after,
            }
            return SimCheckReport(
                "monotonic",
                "fail",
                bound,
                witness,
                f"block {macro} re-resolved from {before!r} to {after!r}",
            )
    if graph.truncated:
        return SimCheckReport("monotonic", "unknown", bound, None, "exploration truncated")
    return SimCheckReport("monotonic", "pass", bound)


def check_clean_mapping_report(
    setup: SimulationSetup,
    bound: int = DEFAULT_BOUND,
    assembly: Assembly | None = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> SimCheckReport:
    """Clean-mapping verdict for one designated assembly or all explored ones."""
    if assembly is not None:
        violations = check_clean_mapping(setup, assembly)
        if violations:
            witness = {"assembly": assembly, "violations": tuple(violations)}
            return SimCheckReport(
                "clean", "fail", bound, witness,
                f"{len(violations)} fuzz violation(s) in designated assembly",
            )
        return SimCheckReport("clean", "pass", bound)
    graph = explore_graph(setup.simulator, max_tiles=bound, state_budget=state_budget)
    for i, node in enumerate(graph.nodes):
        violations = check_clean_mapping(setup, node)
        if violations:
            witness = {
                "trace": _trace_to(graph, setup.simulator, i),
                "assembly": node,
                "violations": tuple(violations),
            }
            return SimCheckReport(
                "clean", "fail", bound, witness,
                f"producible assembly has fuzz violations at {[v.block for v in violations]}",
            )
    if graph.truncated:
        return SimCheckReport("clean", "unknown", bound, None, "exploration truncated")
    return SimCheckReport("clean", "pass", bound)


def _growth_reaches(system: TileSystem, start: Assembly, target: Assembly) -> bool:
    """Whether ``target`` is reachable from ``start`` by legal attachments."""
    if start == target:
        return True
    for p, t in start.placements.items():
        if target.get(p) != t:
            return False
    missing = {p: t for p, t in target.placements.items() if p not in start}
    seen: set[tuple] = set()
    stack = [start]
    while stack:
        cur = stack.pop()
        key = cur.canonical()
        if key in seen:
            continue
        seen.add(key)
        if len(cur) == len(target):
            return True
        for p, t in missing.items():
            if p in cur:
                continue
            try:
                stack.append(attach(system, cur, Placement(p, t)))
            except AttachError:
                continue
    return False


def check_follows(
    setup: SimulationSetup,
    bound: int = DEFAULT_BOUND,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> SimCheckReport:
    """Every explored simulator attachment must map to legal simulated growth."""
    graph = explore_graph(setup.simulator, max_tiles=bound, state_budget=state_budget)
    images = [r_star(setup, node) for node in graph.nodes]
    for pi, ci, pl in graph.edges:
        if not _growth_reaches(setup.simulated, images[pi], images[ci]):
            witness = {
                "trace": _trace_to(graph, setup.simulator, pi),
                "placement": pl,
                "image_before": images[pi],
                "image_after": images[ci],
            }
            return SimCheckReport(
                "follows", "fail", bound, witness,
                "a simulator attachment maps to growth illegal in the simulated system",
            )
    if graph.truncated:
        return SimCheckReport("follows", "unknown", bound, None, "exploration truncated")
    return SimCheckReport("follows", "pass", bound)


def check_equivalent_productions(
    setup: SimulationSetup,
    bound: int = DEFAULT_BOUND,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> SimCheckReport:
    """Producible and terminal images must coincide with the simulated sets.

    Image membership is always decidable within the bound because an image
    never has more tiles than its preimage; missing-preimage verdicts are
    definite only when the simulator exploration is complete.
    """
    g_s = explore_graph(setup.simulator, max_tiles=bound, state_budget=state_budget)
    g_t = explore_graph(setup.simulated, max_tiles=bound, state_budget=state_budget)
    images = [r_star(setup, node) for node in g_s.nodes]
    image_keys = {img.canonical() for img in images}
    terminal_image_keys = {images[i].canonical() for i in g_s.terminals}
    prod_t = {node.canonical(): i for i, node in enumerate(g_t.nodes)}

    for i, img in enumerate(images):
        violations = check_clean_mapping(setup, g_s.nodes[i])
        if violations:
            witness = {
                "trace": _trace_to(g_s, setup.simulator, i),
                "assembly": g_s.nodes[i],
                "violations": tuple(violations),
            }
            return SimCheckReport(
                "productions", "fail", bound, witness,
                "a producible simulator assembly does not map cleanly",
            )
        if img.canonical() not in prod_t:
            witness = {
                "trace": _trace_to(g_s, setup.simulator, i),
                "image": img,
            }
            return SimCheckReport(
                "productions", "fail", bound, witness,
                "a producible image is not producible in the simulated system",
            )
    for i in g_s.terminals:
        img = images[i]
        remaining = frontier(setup.simulated, img)
        if remaining:
            witness = {
                "trace": _trace_to(g_s, setup.simulator, i),
                "image": img,
                "simulated_frontier": remaining,
            }
            return SimCheckReport(
                "productions", "fail", bound, witness,
                "a terminal image is not terminal in the simulated system",
            )
    if not g_s.truncated:
        for key, ti in prod_t.items():
            if key not in image_keys:
                witness = {
                    "trace": _trace_to(g_t, setup.simulated, ti),
                    "assembly": g_t.nodes[ti],
                }
                return SimCheckReport(
                    "productions", "fail", bound, witness,
                    "a simulated producible has no simulator preimage",
                )
        for ti in g_t.terminals:
            if g_t.nodes[ti].canonical() not in terminal_image_keys:
                witness = {
                    "trace": _trace_to(g_t, setup.simulated, ti),
                    "assembly": g_t.nodes[ti],
                }
                return SimCheckReport(
                    "productions", "fail", bound, witness,
                    "a simulated terminal is not the image of any simulator terminal",
                )
    if g_s.truncated or g_t.truncated:
        return SimCheckReport("productions", "unknown", bound, None, "exploration truncated")
    return SimCheckReport("productions", "pass", bound)


def _descendant_masks(count: int, edges) -> list[int]:
    children: list[list[int]] = [[] for _ in range(count)]
    for pi, ci, _ in edges:
        children[pi].append(ci)
    masks = [0] * count
    for i in reversed(range(count)):
        mask = 1 << i
        for c in children[i]:
            mask |= masks[c]
        masks[i] = mask
    return masks


def _ancestor_masks(count: int, edges) -> list[int]:
    masks = [1 << i for i in range(count)]
    for pi, ci, _ in sorted(edges, key=lambda e: e[1]):
        masks[ci] |= masks[pi]
    return masks


def check_models(
    setup: SimulationSetup,
    bound: int = DEFAULT_BOUND,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> SimCheckReport:
    """Search for witness sets of preimages behind every simulated producible.

    For each simulated producible, a non-empty witness set of its simulator
    preimages must satisfy, for every simulated assembly reachable from it
    (including itself):

    1. every member can still grow to some preimage of the successor, and
    2. every preimage that can still grow to a preimage of the successor is
       itself reachable from some member.

    Candidate sets are enumerated smallest-first up to ``candidate_cap``
    candidates per producible; exhausting the cap yields unknown, never pass.
    """
    g_s = explore_graph(setup.simulator, max_tiles=bound, state_budget=state_budget)
    g_t = explore_graph(setup.simulated, max_tiles=bound, state_budget=state_budget)
    definite = not (g_s.truncated or g_t.truncated)
    n_s, n_t = len(g_s.nodes), len(g_t.nodes)

    image_keys = [r_star(setup, node).canonical() for node in g_s.nodes]
    image_mask: dict[tuple, int] = {}
    for i, key in enumerate(image_keys):
        image_mask[key] = image_mask.get(key, 0) | (1 << i)

    desc_s = _descendant_masks(n_s, g_s.edges)
    anc_s = _ancestor_masks(n_s, g_s.edges)
    desc_t = _descendant_masks(n_t, g_t.edges)

    unknown_reason: str | None = None
    for a_i in range(n_t):
        alpha_key = g_t.nodes[a_i].canonical()
        pre_mask = image_mask.get(alpha_key, 0)
        pre = [i for i in range(n_s) if pre_mask >> i & 1]
        if not pre:
            if definite:
                witness = {
                    "trace": _trace_to(g_t, setup.simulated, a_i),
                    "assembly": g_t.nodes[a_i],
                }
                return SimCheckReport(
                    "models", "fail", bound, witness,
                    "a simulated producible has no simulator preimage",
                )
            unknown_reason = "exploration truncated"
            continue
        successors = [b_i for b_i in range(n_t) if desc_t[a_i] >> b_i & 1]
        succ_masks = []
        for b_i in successors:
            b_mask = image_mask.get(g_t.nodes[b_i].canonical(), 0)
            bad = [x for x in pre if desc_s[x] & b_mask]
            succ_masks.append((b_i, b_mask, bad))

        chosen = None
        tried = 0
        capped = False
        for size in range(1, len(pre) + 1):
            for combo in combinations(pre, size):
                tried += 1
                if tried > candidate_cap:
                    capped = True
                    break
                combo_mask = 0
                for x in combo:
                    combo_mask |= 1 << x
                ok = True
                for _, b_mask, bad in succ_masks:
                    if any(desc_s[x] & b_mask == 0 for x in combo):
                        ok = False
                        break
                    if any(anc_s[x2] & combo_mask == 0 for x2 in bad):
                        ok = False
                        break
                if ok:
                    chosen = combo
                    break
            if chosen is not None or capped:
                break
        if chosen is not None:
            continue
        if capped:
            unknown_reason = "candidate cap exceeded"
            continue
        if not definite:
            unknown_reason = "exploration truncated"
            continue
        # The full preimage set was among the rejected candidates; report its
        # first failing clause as the representative witness.
        for b_i, b_mask, bad in succ_masks:
            stuck = next((x for x in pre if desc_s[x] & b_mask == 0), None)
            if stuck is not None:
                witness = {
                    "assembly": g_t.nodes[a_i],
                    "successor": g_t.nodes[b_i],
                    "trace": _trace_to(g_s, setup.simulator, stuck),
                    "stuck_preimage": g_s.nodes[stuck],
                }
                return SimCheckReport(
                    "models", "fail", bound, witness,
                    "a preimage cannot grow to any preimage of a simulated successor",
                )
            uncovered = next((x2 for x2 in bad if anc_s[x2] & pre_mask == 0), None)
            if uncovered is not None:
                witness = {
                    "assembly": g_t.nodes[a_i],
                    "successor": g_t.nodes[b_i],
                    "trace": _trace_to(g_s, setup.simulator, uncovered),
                    "uncovered_preimage": g_s.nodes[uncovered],
                }
                return SimCheckReport(
                    "models", "fail", bound, witness,
                    "a growing preimage is unreachable from every candidate witness set",
                )
        witness = {"assembly": g_t.nodes[a_i]}
        return SimCheckReport(
            "models", "fail", bound, witness,
            "no witness set of preimages satisfies both growth clauses",
        )
    if unknown_reason is not None:
        return SimCheckReport("models", "unknown", bound, None, unknown_reason)
    return SimCheckReport("models", "pass", bound)


def check_directedness_preservation(
    setup: SimulationSetup,
    bound: int = DEFAULT_BOUND,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> SimCheckReport:
    """Simulator and simulated systems must agree on directedness."""
    vs = check_directed(setup.simulator, max_tiles=bound, state_budget=state_budget)
    vt = check_directed(setup.simulated, max_tiles=bound, state_budget=state_budget)
    detail = f"simulator {vs.status}, simulated {vt.status}"
    if vs.status == "unknown" or vt.status == "unknown":
        return SimCheckReport("directedness", "unknown", bound, None, detail)
    if vs.status == vt.status:
        return SimCheckReport("directedness", "pass", bound, None, detail)
    witness = {"simulator_verdict": vs, "simulated_verdict": vt}
    return SimCheckReport("directedness", "fail", bound, witness, detail)


def run_all_checks(
    setup: SimulationSetup,
    bound: int = DEFAULT_BOUND,
    bounds: Mapping[str, int] | None = None,
    clean_assembly: Assembly | None = None,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> dict[str, SimCheckReport]:
    """Run all six checks, optionally with a per-check bound override."""
    per = dict(bounds or {})

    def b(name: str) -> int:
        return per.get(name, bound)

    return {
        "monotonic": check_representation_monotonic(setup, b("monotonic"), state_budget),
        "clean": check_clean_mapping_report(
            setup, b("clean"), assembly=clean_assembly, state_budget=state_budget
        ),
        "follows": check_follows(setup, b("follows"), state_budget),
        "productions": check_equivalent_productions(setup, b("productions"), state_budget),
        "models": check_models(setup, b("models"), candidate_cap, state_budget),
        "directedness": check_directedness_preservation(setup, b("directedness"), state_budget),
    }
