"""Cluster geometries, coupling graphs and model Hamiltonians.

Three geometries are supported, each with N measuring spins plus the target
spin S:

``chain_1d``
    Linear chain I_1..I_N with inverse-cube couplings d1/|m-n|^3 truncated
    at neighbor range M; S couples to I_m with g1/m^3 (same truncation).
``hub_2d``
    Chain I_1..I_{N-1} plus a hub spin I_N coupled to every chain spin
    (couplings f_m); S couples to every I spin (couplings g_m, g_N).
``ring_3d``
    Ring I_1..I_{N-1} (couplings follow the chord-length law
    d1*[sin(pi/L)/sin(pi q/L)]^3 for separation q on an L-site ring) plus a
    hub spin I_N coupled to every ring spin (couplings r_m); S couples to
    every I spin (couplings q_m, q_N).

Each geometry offers three interaction forms: ``full_dipolar`` (secular
dipolar I-I couplings with flip-flop terms), ``zz_weak`` (z-z products
only) and ``effective`` (the analytic time-averaged Hamiltonians; see
:mod:`spinamp.averaging` for the numerical average they are checked
against).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import ConfigurationError
from .spin_algebra import (
    SystemLayout,
    embed_operator,
    require_hermitian,
    single_spin_operator,
    symmetrize,
    transverse_field,
    two_spin_coupling,
    SPIN_HALF,
)

GEOMETRIES = ("chain_1d", "hub_2d", "ring_3d")
INTERACTIONS = ("full_dipolar", "zz_weak", "effective")
S_STATES = ("up", "down")

# Time window covering the contrast maximum of every stock model with margin.
DEFAULT_WINDOW_OVER_OMEGA1 = 90.0
DEFAULT_TIME_POINTS = 600


@dataclass(frozen=True)
class CouplingGraph:
    """Pair couplings of a cluster, indexed by slot number.

    ``d[m][n]`` is the I_m-I_n coupling (row/column 0 are unused so indices
    match spin labels), ``g[m]`` is the S-I_m coupling.  Hub couplings of
    the 2D/3D geometries are folded into column N of ``d`` and entry N of
    ``g``.
    """

    n: int
    d: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if d.shape != (self.n + 1, self.n + 1):
            raise ValueError(f"d must be ({self.n + 1},{self.n + 1}), got {d.shape}")
        if g.shape != (self.n + 1,):
            raise ValueError(f"g must have length {self.n + 1}, got {g.shape}")
        if not (np.isfinite(d).all() and np.isfinite(g).all()):
            raise ValueError("couplings must be finite")
        if np.max(np.abs(d - d.T)) > 0:
            raise ValueError("d must be symmetric")
        if np.max(np.abs(np.diag(d))) > 0:
            raise ValueError("d must have zero diagonal")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "g", g)

    def pairs(self):
        """Yield (m, n, strength) for every nonzero I-I coupling, m < n."""
        for m in range(1, self.n + 1):
            for n in range(m + 1, self.n + 1):
                if self.d[m, n] != 0.0:
                    yield m, n, self.d[m, n]


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of one simulation model.

    ``m_range`` is the neighbor range of the I-I couplings (None picks the
    geometry default).  ``f_couplings``/``g_couplings`` select the hub and
    target coupling profiles of the 2D/3D geometries: "auto" (geometry
    default), "uniform", "inverse_cube", or an explicit tuple.  The two
    boolean switches select literal transcription variants of the effective
    Hamiltonians (see build_hamiltonian).
    """

    geometry: str
    interaction: str
    n_spins: int = 7
    m_range: int | None = None
    omega1: float = 0.15
    s_initial: str = "down"
    d1: float = 1.0
    g1: float = 1.0
    f_couplings: tuple | str = "auto"
    g_couplings: tuple | str = "auto"
    t_max: float | None = None
    n_time_points: int = DEFAULT_TIME_POINTS
    m2_edge_without_rf: bool = False
    ring_gate_literal: bool = False
    ring_includes_hub: bool = False

    def __post_init__(self):
        if self.geometry not in GEOMETRIES:
            raise ConfigurationError(
                f"geometry must be one of {GEOMETRIES}, got {self.geometry!r}"
            )
        if self.interaction not in INTERACTIONS:
            raise ConfigurationError(
                f"interaction must be one of {INTERACTIONS}, got {self.interaction!r}"
            )
        if self.s_initial not in S_STATES:
            raise ConfigurationError(
                f"s_initial must be one of {S_STATES}, got {self.s_initial!r}"
            )
        if self.n_spins < self._min_spins():
            raise ConfigurationError(
                f"{self.geometry} needs at least {self._min_spins()} measuring "
                f"spins, got {self.n_spins}"
            )
        if not (self.omega1 >= 0 and math.isfinite(self.omega1)):
            raise ConfigurationError(f"omega1 must be finite and >= 0, got {self.omega1}")
        for name in ("d1", "g1"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")
        m = self.resolved_m_range()
        lo, hi = self._m_bounds()
        if not lo <= m <= hi:
            raise ConfigurationError(
                f"m_range={m} outside [{lo}, {hi}] for {self.geometry} with "
                f"n_spins={self.n_spins}"
            )
        if self.interaction == "effective":
            self._check_effective_supported(m)
        if self.t_max is not None and self.t_max <= 0:
            raise ConfigurationError("t_max must be positive")
        if self.n_time_points < 2:
            raise ConfigurationError("n_time_points must be >= 2")
        if isinstance(self.f_couplings, (list, np.ndarray)):
            object.__setattr__(self, "f_couplings", tuple(float(x) for x in self.f_couplings))
        if isinstance(self.g_couplings, (list, np.ndarray)):
            object.__setattr__(self, "g_couplings", tuple(float(x) for x in self.g_couplings))

    def _min_spins(self) -> int:
        return {"chain_1d": 2, "hub_2d": 3, "ring_3d": 4}[self.geometry]

    def ring_size(self) -> int:
        if self.geometry != "ring_3d":
            raise ConfigurationError("ring_size is defined for ring_3d only")
        return self.n_spins if self.ring_includes_hub else self.n_spins - 1

    def _m_bounds(self) -> tuple[int, int]:
        if self.geometry == "chain_1d":
            # M may reach N so the S-I coupling ladder covers the last spin.
            return 1, self.n_spins
        if self.geometry == "hub_2d":
            return 1, max(1, self.n_spins - 2)
        return 1, max(1, self.ring_size() // 2)

    def resolved_m_range(self) -> int:
        if self.m_range is not None:
            return self.m_range
        if self.geometry == "chain_1d":
            return 2
        if self.geometry == "hub_2d":
            return max(1, self.n_spins - 2)
        return 1

    def _check_effective_supported(self, m: int) -> None:
        if self.geometry == "chain_1d":
            supported = (1, 2)
        elif self.geometry == "hub_2d":
            supported = (1,)
        else:
            supported = tuple(range(1, (self.ring_size() - 1) // 2 + 1))
        if m not in supported:
            raise ConfigurationError(
                f"effective form supports m_range {supported} for {self.geometry}, "
                f"got {m}"
            )
        if self.geometry == "chain_1d":
            need = 4 if m == 1 else 6
            if self.n_spins < need:
                raise ConfigurationError(
                    f"chain effective form with m_range={m} needs n_spins >= {need}"
                )

    def resolved_t_max(self) -> float:
        if self.t_max is not None:
            return self.t_max
        if self.omega1 > 0:
            return DEFAULT_WINDOW_OVER_OMEGA1 / self.omega1
        return DEFAULT_WINDOW_OVER_OMEGA1 / 0.15

    def time_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.resolved_t_max(), self.n_time_points)

    def layout(self) -> SystemLayout:
        return SystemLayout(self.n_spins)

    def with_s_initial(self, s_initial: str) -> "ModelSpec":
        return replace(self, s_initial=s_initial)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out


def chain_couplings(n: int, m_range: int, d1: float, g1: float) -> CouplingGraph:
    """Inverse-cube chain couplings truncated at neighbor range ``m_range``.

    d[m][n] = d1/|m-n|^3 for 1 <= |m-n| <= m_range, g[m] = g1/m^3 for
    m <= m_range; everything else is zero.
    """
    if n < 2:
        raise ValueError(f"chain needs n >= 2, got {n}")
    if not 1 <= m_range <= n:
        raise ValueError(f"m_range={m_range} outside [1, {n}]")
    d = np.zeros((n + 1, n + 1))
    g = np.zeros(n + 1)
    for m in range(1, n + 1):
        for k in range(m + 1, n + 1):
            if k - m <= m_range:
                d[m, k] = d[k, m] = d1 / (k - m) ** 3
        if m <= m_range:
            g[m] = g1 / m ** 3
    return CouplingGraph(n=n, d=d, g=g)


def ring_separation(site_a: int, site_b: int, ring_size: int) -> int:
    """Chord separation between two sites of a ring, 1-indexed."""
    q = abs(site_a - site_b) % ring_size
    return min(q, ring_size - q)


def ring_coupling_factor(q: int, ring_size: int) -> float:
    """Chord-length coupling ratio for separation ``q``: [sin(pi/L)/sin(pi q/L)]^3."""
    return (math.sin(math.pi / ring_size) / math.sin(math.pi * q / ring_size)) ** 3


def ring_couplings(n: int, m_range: int, d1: float) -> CouplingGraph:
    """Couplings of an ``n``-site ring, each unordered pair entered once.

    The coupling between sites m and m+q (indices wrapping modulo n) is
    d1*[sin(pi/n)/sin(pi q/n)]^3 for separations 1 <= q <= m_range.  The
    target-spin column is left zero; callers fold in their own.
    """
    if n < 3:
        raise ValueError(f"ring needs n >= 3, got {n}")
    if not 1 <= m_range <= n // 2:
        raise ValueError(
            f"m_range={m_range} outside [1, {n // 2}]: separations beyond the "
            f"antipode duplicate pairs on an {n}-site ring"
        )
    d = np.zeros((n + 1, n + 1))
    for m in range(1, n + 1):
        for k in range(m + 1, n + 1):
            q = ring_separation(m, k, n)
            if 1 <= q <= m_range:
                d[m, k] = d[k, m] = d1 * ring_coupling_factor(q, n)
    return CouplingGraph(n=n, d=d, g=np.zeros(n + 1))


def hub_couplings(n: int, m_range: int, d1: float, f, g) -> CouplingGraph:
    """Chain 1..n-1 (inverse-cube, range ``m_range``) plus hub spin n.

    ``f`` is the length-(n-1) hub column (I_m-I_n couplings) and ``g`` the
    length-n target couplings including g_n.
    """
    if n < 3:
        raise ValueError(f"hub geometry needs n >= 3, got {n}")
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != (n - 1,):
        raise ValueError(f"f must have length {n - 1}, got {f.shape}")
    if g.shape != (n,):
        raise ValueError(f"g must have length {n}, got {g.shape}")
    d = np.zeros((n + 1, n + 1))
    if d1 != 0.0:
        for m in range(1, n):
            for k in range(m + 1, n):
                if k - m <= m_range:
                    d[m, k] = d[k, m] = d1 / (k - m) ** 3
    d[1:n, n] = f
    d[n, 1:n] = f
    return CouplingGraph(n=n, d=d, g=np.concatenate([[0.0], g]))


def ring_hub_couplings(
    n: int,
    m_range: int,
    d1: float,
    r,
    q,
    include_hub_in_ring: bool = False,
) -> CouplingGraph:
    """Ring of measuring spins plus hub spin n and target couplings.

    Default reading: spins 1..n-1 form the ring, spin n is the hub with
    explicit couplings ``r`` to each ring spin.  With
    ``include_hub_in_ring`` all n spins sit on the ring and the hub column
    ``r`` is added on top of the ring couplings.
    """
    if n < 4:
        raise ValueError(f"ring+hub geometry needs n >= 4, got {n}")
    ring_size = n if include_hub_in_ring else n - 1
    r = np.asarray(r, dtype=float)
    q = np.asarray(q, dtype=float)
    if r.shape != (n - 1,):
        raise ValueError(f"r must have length {n - 1}, got {r.shape}")
    if q.shape != (n,):
        raise ValueError(f"q must have length {n}, got {q.shape}")
    ring = ring_couplings(ring_size, m_range, d1)
    d = np.zeros((n + 1, n + 1))
    d[1 : ring_size + 1, 1 : ring_size + 1] = ring.d[1:, 1:]
    d[1:n, n] += r
    d[n, 1:n] += r
    return CouplingGraph(n=n, d=d, g=np.concatenate([[0.0], q]))


def ring_static_field_sum(ring_size: int, m_range: int, d1: float) -> float:
    """Sum of ring couplings incident on one site (the static field scale)."""
    total = 0.0
    for q in range(1, m_range + 1):
        weight = 1 if 2 * q == ring_size else 2
        total += weight * d1 * ring_coupling_factor(q, ring_size)
    return total


def _resolve_profile(selector, name: str, length: int, auto, uniform, inverse_cube):
    if isinstance(selector, tuple):
        if len(selector) != length:
            raise ConfigurationError(
                f"{name} must have length {length}, got {len(selector)}"
            )
        return np.asarray(selector, dtype=float)
    if selector == "auto":
        return np.asarray(auto, dtype=float)
    if selector == "uniform":
        return np.asarray(uniform, dtype=float)
    if selector == "inverse_cube":
        return np.asarray(inverse_cube, dtype=float)
    raise ConfigurationError(
        f"{name} must be 'auto', 'uniform', 'inverse_cube' or an explicit "
        f"tuple, got {selector!r}"
    )


def build_graph(spec: ModelSpec) -> CouplingGraph:
    """Resolve the coupling graph for a model specification.

    Profile defaults ("auto") realize the simultaneous-flip design: every
    measuring spin couples to the hub and to the target with matched
    strengths, so that the static local field vanishes exactly when hub and
    target are anti-aligned.  For the 3D ring the target coupling absorbs
    the static ring field as well.
    """
    n, m = spec.n_spins, spec.resolved_m_range()
    if spec.geometry == "chain_1d":
        return chain_couplings(n, m, spec.d1, spec.g1)

    if spec.geometry == "hub_2d":
        sites = np.arange(1, n)
        auto_f = spec.g1 * sites ** -1.5
        f = _resolve_profile(
            spec.f_couplings, "f_couplings", n - 1,
            auto=auto_f,
            uniform=np.full(n - 1, spec.d1),
            inverse_cube=spec.d1 * sites ** -3.0,
        )
        g = _resolve_profile(
            spec.g_couplings, "g_couplings", n,
            auto=np.concatenate([f, [spec.g1]]),
            uniform=np.full(n, spec.g1),
            inverse_cube=np.concatenate([spec.g1 * sites ** -3.0, [spec.g1]]),
        )
        return hub_couplings(n, m, spec.d1, f, g)

    ring_size = spec.ring_size()
    r = _resolve_profile(
        spec.f_couplings, "f_couplings", n - 1,
        auto=np.full(n - 1, spec.d1),
        uniform=np.full(n - 1, spec.d1),
        inverse_cube=spec.d1 * np.arange(1, n) ** -3.0,
    )
    # Target couplings that cancel the static (ring + hub) field on each
    # ring spin in the all-up configuration.
    auto_q = np.concatenate(
        [r + ring_static_field_sum(ring_size, m, spec.d1), [spec.d1]]
    )
    q = _resolve_profile(
        spec.g_couplings, "g_couplings", n,
        auto=auto_q,
        uniform=np.full(n, spec.d1),
        inverse_cube=np.concatenate([spec.d1 * np.arange(1, n) ** -3.0, [spec.d1]]),
    )
    return ring_hub_couplings(n, m, spec.d1, r, q, spec.ring_includes_hub)


def zz_coupling_part(layout: SystemLayout, graph: CouplingGraph) -> np.ndarray:
    """Diagonal part: sum of z-z I-I couplings plus all S-I couplings."""
    diag = np.zeros(layout.dimension)
    zs = layout.z_diagonal(0)
    for m, n, strength in graph.pairs():
        diag += strength * layout.z_diagonal(m) * layout.z_diagonal(n)
    for m in range(1, graph.n + 1):
        if graph.g[m] != 0.0:
            diag += graph.g[m] * zs * layout.z_diagonal(m)
    return np.diag(diag).astype(complex)


def secular_coupling_part(layout: SystemLayout, graph: CouplingGraph) -> np.ndarray:
    """Full secular I-I couplings (with flip-flops) plus z-z S-I couplings."""
    h = np.zeros((layout.dimension, layout.dimension), dtype=complex)
    for m, n, strength in graph.pairs():
        h += two_spin_coupling(layout, m, n, "full_secular", strength)
    zs = layout.z_diagonal(0)
    diag = np.zeros(layout.dimension)
    for m in range(1, graph.n + 1):
        if graph.g[m] != 0.0:
            diag += graph.g[m] * zs * layout.z_diagonal(m)
    return h + np.diag(diag)


def build_hamiltonian(spec: ModelSpec, graph: CouplingGraph | None = None) -> np.ndarray:
    """Assemble the model Hamiltonian for ``spec`` (Hermitian, dim 2^(N+1)).

    ``full_dipolar`` and ``zz_weak`` are the drive term plus the respective
    coupling part.  ``effective`` dispatches to the analytic time-averaged
    forms for the supported (geometry, m_range) combinations.
    """
    if graph is None:
        graph = build_graph(spec)
    if graph.n != spec.n_spins:
        raise ConfigurationError(
            f"graph has {graph.n} spins but spec declares {spec.n_spins}"
        )
    layout = spec.layout()
    if spec.interaction == "zz_weak":
        h = transverse_field(layout, spec.omega1) + zz_coupling_part(layout, graph)
    elif spec.interaction == "full_dipolar":
        h = transverse_field(layout, spec.omega1) + secular_coupling_part(layout, graph)
    else:
        h = _effective_hamiltonian(spec, layout, graph)
    return require_hermitian(symmetrize(h), what="model Hamiltonian")


def _effective_hamiltonian(spec, layout, graph) -> np.ndarray:
    m = spec.resolved_m_range()
    if spec.geometry == "chain_1d" and m == 1:
        return chain_effective_m1(layout, graph, spec.omega1)
    if spec.geometry == "chain_1d" and m == 2:
        return chain_effective_m2(
            layout, graph, spec.omega1, edge_without_rf=spec.m2_edge_without_rf
        )
    if spec.geometry == "hub_2d":
        return hub_effective(layout, graph, spec.omega1)
    if spec.geometry == "ring_3d":
        return ring_effective(
            layout, graph, spec.omega1, m, spec.ring_size(),
            literal_gates=spec.ring_gate_literal,
        )
    raise ConfigurationError(
        f"no effective Hamiltonian for ({spec.geometry}, m_range={m}); "
        "supported: (chain_1d, 1|2), (hub_2d, 1), (ring_3d, 1..ring/2)"
    )


def _x(layout, slot):
    return single_spin_operator(layout, slot, "x")


def _zdiag(layout, slot):
    return layout.z_diagonal(slot)


def _gated_x(layout, slot, gate_diag) -> np.ndarray:
    """X operator at ``slot`` multiplied by a diagonal gate (symmetrized)."""
    x = embed_operator(layout, {slot: SPIN_HALF["x"]})
    return symmetrize(x * gate_diag[None, :])


def chain_effective_m1(layout: SystemLayout, graph: CouplingGraph, omega1: float) -> np.ndarray:
    """Analytic averaged chain Hamiltonian, nearest-neighbor range.

    Bulk spins carry (omega1/4) Ix_k (1 - 4 Iz_{k-1} Iz_{k+1}); the chain
    ends and the target spin carry the asymmetric edge gates.  The all-up
    product state is annihilated by every transverse term.
    """
    n = graph.n
    d1 = graph.d[1, 2]
    g1 = graph.g[1]
    one = np.ones(layout.dimension)
    zs = _zdiag(layout, 0)
    z = [None] + [_zdiag(layout, k) for k in range(1, n + 1)]

    diag = (
        0.5 * g1 * zs
        - 0.5 * (d1 + g1) * z[1]
        + 0.5 * d1 * z[n]
    )
    h = np.diag(diag).astype(complex)
    h = h + _gated_x(layout, 0, (omega1 / 8) * (one - 2 * z[1]))
    h = h + _gated_x(layout, 1, (omega1 / 8) * (one - 2 * z[2]) * (one + 2 * zs))
    h = h + _gated_x(layout, n, (omega1 / 8) * (one - 2 * z[n - 1]))
    for k in range(2, n - 1):
        h = h + _gated_x(layout, k, (omega1 / 4) * (one - 4 * z[k - 1] * z[k + 1]))
    return h


def chain_effective_m2(
    layout: SystemLayout,
    graph: CouplingGraph,
    omega1: float,
    edge_without_rf: bool = False,
) -> np.ndarray:
    """Analytic averaged chain Hamiltonian, next-nearest neighbor range.

    Two interior edge terms (on I_2 and I_{N-1}) appear with bare
    coefficient 1/4 in the source expression where every sibling term
    carries omega1; the default scales them by omega1 for dimensional
    consistency, ``edge_without_rf`` keeps the literal coefficient.
    """
    n = graph.n
    d1, d2 = graph.d[1, 2], graph.d[1, 3]
    g1, g2 = graph.g[1], graph.g[2]
    one = np.ones(layout.dimension)
    zs = _zdiag(layout, 0)
    z = [None] + [_zdiag(layout, k) for k in range(1, n + 1)]
    edge_coef = 0.25 if edge_without_rf else 0.25 * omega1

    diag = (
        0.5 * (g1 - g2) * zs
        + 0.5 * (d2 - d1 - g1) * z[1]
        + 0.5 * (d2 - g2) * z[2]
        - 0.5 * d2 * z[n - 1]
        + 0.5 * (d1 - d2) * z[n]
    )
    h = np.diag(diag).astype(complex)
    h = h + _gated_x(
        layout, 0,
        (omega1 / 8) * ((one - 4 * z[2] * z[1]) - 2 * (z[1] - z[2])),
    )
    h = h + _gated_x(
        layout, 1,
        (omega1 / 8) * ((one - 4 * z[3] * z[2]) - 2 * (z[2] - z[3])) * (one + 2 * zs),
    )
    h = h + _gated_x(
        layout, 2,
        edge_coef * (one - 4 * z[3] * z[1]) * ((one - 4 * z[4] * zs) + 2 * (z[4] - zs)),
    )
    h = h + _gated_x(
        layout, n - 1,
        edge_coef * (one + 2 * z[n - 3]) * (one - 4 * z[n - 2] * z[n]),
    )
    h = h + _gated_x(
        layout, n,
        (omega1 / 8) * ((one - 4 * z[n - 2] * z[n - 1]) - 2 * (z[n - 1] - z[n - 2])),
    )
    for k in range(3, n - 2):
        h = h + _gated_x(
            layout, k,
            (omega1 / 4) * (one - 4 * z[k - 1] * z[k + 1]) * (one - 4 * z[k - 2] * z[k + 2]),
        )
    return h


def hub_effective(layout: SystemLayout, graph: CouplingGraph, omega1: float) -> np.ndarray:
    """Analytic averaged hub-geometry Hamiltonian (nearest-neighbor range).

    Every chain spin carries the same hub/target gate; the hub and target
    spins themselves have no transverse term.
    """
    n = graph.n
    one = np.ones(layout.dimension)
    zs = _zdiag(layout, 0)
    zn = _zdiag(layout, n)
    gate = (one - 4 * zn * zs) - 2 * (zn - zs)
    h = np.zeros((layout.dimension, layout.dimension), dtype=complex)
    diag = np.zeros(layout.dimension)
    for k in range(1, n):
        f_k = graph.d[k, n]
        g_k = graph.g[k]
        diag += 0.5 * (f_k - g_k) * _zdiag(layout, k)
        h = h + _gated_x(layout, k, (omega1 / 4) * gate)
    return h + np.diag(diag)


def ring_effective(
    layout: SystemLayout,
    graph: CouplingGraph,
    omega1: float,
    m_range: int,
    ring_size: int,
    literal_gates: bool = False,
) -> np.ndarray:
    """Analytic averaged ring-geometry Hamiltonian.

    Default form: each ring spin's transverse term is gated by projector
    products (1 - 4 Iz_{m-q} Iz_{m+q}) over its neighbor pairs at
    separations 1..m_range (wrapping on the ring), which annihilate aligned
    pairs exactly and keep the all-up state an eigenstate.

    ``literal_gates`` instead applies the raw source transcription
    Ix_m * prod_q (1 - Iz_m Iz_{m+q}) (own-spin products, no projector
    normalization), symmetrized; under that form the all-up state is not an
    eigenstate.
    """
    n = graph.n

    def site(k: int) -> int:
        return (k - 1) % ring_size + 1

    one = np.ones(layout.dimension)
    zs = _zdiag(layout, 0)
    h = np.zeros((layout.dimension, layout.dimension), dtype=complex)
    for m in range(1, n):
        gate = (omega1 / 2) * one
        for q in range(1, m_range + 1):
            if literal_gates:
                gate = gate * (one - _zdiag(layout, m) * _zdiag(layout, site(m + q)))
            else:
                gate = gate * (
                    one - 4 * _zdiag(layout, site(m - q)) * _zdiag(layout, site(m + q))
                )
        h = h + _gated_x(layout, m, gate)
    diag = np.zeros(layout.dimension)
    zn = _zdiag(layout, n)
    for m in range(1, n):
        diag += graph.d[m, n] * _zdiag(layout, m) * zn
        diag += graph.g[m] * zs * _zdiag(layout, m)
    diag += graph.g[n] * zs * zn
    return h + np.diag(diag)
