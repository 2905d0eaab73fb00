"""Ground-truth dynamic attachment graph.

Entities (core routers, edge routers, access nodes, hosts, objects) hang
off each other through upward attachment edges; a separate static link
graph connects core and edge routers. Timestamped events mutate the
graph and report exactly which entities' parent sets changed, which is
what keeps mobility update costs proportional to the moved entity rather
than to everything it carries.

Allowed up-edges: object -> host, host -> access node, access node ->
access node or edge router (nested access nodes model moving networks).
Edge and core routers have no up-edges. A child may have several parents
at once (multihoming).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    CycleDetected,
    DuplicateEntity,
    IllegalAttachment,
    UnknownEntity,
    Unreachable,
)


class Kind(Enum):
    CORE_ROUTER = "core"
    EDGE_ROUTER = "edge"
    ACCESS_NODE = "access"
    HOST = "host"
    OBJECT = "object"


# child kind -> kinds it may attach under
_ALLOWED_PARENTS = {
    Kind.OBJECT: {Kind.HOST},
    Kind.HOST: {Kind.ACCESS_NODE},
    Kind.ACCESS_NODE: {Kind.ACCESS_NODE, Kind.EDGE_ROUTER},
    Kind.EDGE_ROUTER: set(),
    Kind.CORE_ROUTER: set(),
}

_CORE_KINDS = {Kind.CORE_ROUTER, Kind.EDGE_ROUTER}


@dataclass(frozen=True)
class EntityId:
    """Kind-tagged entity identifier, unique per simulation."""

    kind: Kind
    id: str

    def __post_init__(self):
        if not self.id or "@" in self.id or any(c.isspace() for c in self.id):
            raise ValueError(f"bad entity id {self.id!r}")

    def __str__(self) -> str:
        return self.id


class Action(Enum):
    ADD_ENTITY = "add"
    ADD_CORE_LINK = "corelink"
    ATTACH = "attach"
    DETACH = "detach"
    MOVE = "move"
    PUBLISH = "publish"
    UNPUBLISH = "unpublish"
    GET = "get"


# Actions applied by the graph itself; the rest belong to the content layer.
GRAPH_ACTIONS = {
    Action.ADD_ENTITY,
    Action.ADD_CORE_LINK,
    Action.ATTACH,
    Action.DETACH,
    Action.MOVE,
}


@dataclass(frozen=True)
class TopologyEvent:
    """Timestamped scenario action with grammar-level string arguments.

    Argument layout per action:
      ADD_ENTITY    (kind_token, id)
      ADD_CORE_LINK (id_a, id_b)
      ATTACH/DETACH (child, parent)
      MOVE          (child, old_parent, new_parent)
      PUBLISH       (host, name_text, payload_hex)
      UNPUBLISH     (host, name_text)
      GET           (host, name_text)
    """

    time: int
    action: Action
    args: tuple[str, ...]

    def __post_init__(self):
        if self.time < 0:
            raise ValueError("event time must be non-negative")


@dataclass(frozen=True)
class ChangeSet:
    """Entities affected by one applied event.

    ``changed`` lists exactly the entities whose parent sets changed;
    ``created`` lists entities that came into existence. Register update
    cost is measured by ``changed`` alone.
    """

    changed: tuple[EntityId, ...] = ()
    created: tuple[EntityId, ...] = ()

    @property
    def size(self) -> int:
        return len(self.changed)


@dataclass
class AttachmentGraph:
    """Mutable attachment graph with a monotonically increasing version."""

    _entities: dict[str, EntityId] = field(default_factory=dict)
    _parents: dict[str, set[str]] = field(default_factory=dict)
    _children: dict[str, set[str]] = field(default_factory=dict)
    _core_links: dict[str, dict[str, float]] = field(default_factory=dict)
    version: int = 0

    # -- introspection ---------------------------------------------------

    def has_entity(self, entity_id: str) -> bool:
        return entity_id in self._entities

    def entity(self, entity_id: str) -> EntityId:
        try:
            return self._entities[entity_id]
        except KeyError:
            raise UnknownEntity(entity_id) from None

    def entities(self) -> list[EntityId]:
        return list(self._entities.values())

    def parents(self, entity_id: str) -> set[EntityId]:
        """Current parent set of an entity (empty when detached)."""
        ent = self.entity(entity_id)
        return {self._entities[p] for p in self._parents[ent.id]}

    def children(self, entity_id: str) -> set[EntityId]:
        ent = self.entity(entity_id)
        return {self._entities[c] for c in self._children[ent.id]}

    def core_neighbors(self, entity_id: str) -> dict[str, float]:
        self.entity(entity_id)
        return dict(self._core_links.get(entity_id, {}))

    # -- event application -----------------------------------------------

    def apply_event(self, event: TopologyEvent) -> ChangeSet:
        """Mutate the graph; validate first so failures leave it untouched."""
        if event.action not in GRAPH_ACTIONS:
            raise ValueError(f"{event.action} is not a graph action")
        handler = {
            Action.ADD_ENTITY: self._apply_add_entity,
            Action.ADD_CORE_LINK: self._apply_add_core_link,
            Action.ATTACH: self._apply_attach,
            Action.DETACH: self._apply_detach,
            Action.MOVE: self._apply_move,
        }[event.action]
        changeset = handler(*event.args)
        self.version += 1
        return changeset

    def add_entity(self, kind: Kind, entity_id: str) -> ChangeSet:
        return self.apply_event(
            TopologyEvent(0, Action.ADD_ENTITY, (kind.value, entity_id))
        )

    def _apply_add_entity(self, kind_token: str, entity_id: str) -> ChangeSet:
        try:
            kind = Kind(kind_token)
        except ValueError:
            raise ValueError(f"unknown entity kind {kind_token!r}") from None
        if entity_id in self._entities:
            raise DuplicateEntity(entity_id)
        ent = EntityId(kind, entity_id)
        self._entities[entity_id] = ent
        self._parents[entity_id] = set()
        self._children[entity_id] = set()
        return ChangeSet(created=(ent,))

    def _apply_add_core_link(self, id_a: str, id_b: str, weight: str = "1") -> ChangeSet:
        a, b = self.entity(id_a), self.entity(id_b)
        if a.kind not in _CORE_KINDS or b.kind not in _CORE_KINDS:
            raise IllegalAttachment("core links join core and edge routers only")
        if id_a == id_b:
            raise IllegalAttachment("core link endpoints must differ")
        if id_b in self._core_links.get(id_a, {}):
            raise IllegalAttachment(f"core link {id_a}-{id_b} already exists")
        w = float(weight)
        self._core_links.setdefault(id_a, {})[id_b] = w
        self._core_links.setdefault(id_b, {})[id_a] = w
        return ChangeSet()

    def _check_attach(self, child: EntityId, parent: EntityId) -> None:
        if parent.kind not in _ALLOWED_PARENTS[child.kind]:
            raise IllegalAttachment(
                f"{child.kind.value} may not attach under {parent.kind.value}"
            )
        if child.id == parent.id:
            raise IllegalAttachment("entity may not attach to itself")
        if child.kind is Kind.ACCESS_NODE and parent.kind is Kind.ACCESS_NODE:
            # walking up from the parent must never reach the child
            stack = [parent.id]
            seen = set()
            while stack:
                cur = stack.pop()
                if cur == child.id:
                    raise CycleDetected(f"{child.id} is an ancestor of {parent.id}")
                if cur in seen:
                    continue
                seen.add(cur)
                stack.extend(self._parents[cur])

    def _apply_attach(self, child_id: str, parent_id: str) -> ChangeSet:
        child, parent = self.entity(child_id), self.entity(parent_id)
        if parent_id in self._parents[child_id]:
            raise IllegalAttachment(f"{child_id} already attached to {parent_id}")
        self._check_attach(child, parent)
        self._parents[child_id].add(parent_id)
        self._children[parent_id].add(child_id)
        return ChangeSet(changed=(child,))

    def _apply_detach(self, child_id: str, parent_id: str) -> ChangeSet:
        child = self.entity(child_id)
        self.entity(parent_id)
        if parent_id not in self._parents[child_id]:
            raise IllegalAttachment(f"{child_id} is not attached to {parent_id}")
        self._parents[child_id].discard(parent_id)
        self._children[parent_id].discard(child_id)
        return ChangeSet(changed=(child,))

    def _apply_move(self, child_id: str, old_id: str, new_id: str) -> ChangeSet:
        """Atomic detach + attach; rolls back if the attach leg fails."""
        child = self.entity(child_id)
        self.entity(old_id)
        new = self.entity(new_id)
        if old_id not in self._parents[child_id]:
            raise IllegalAttachment(f"{child_id} is not attached to {old_id}")
        if new_id == old_id:
            raise IllegalAttachment("move target equals current parent")
        if new_id in self._parents[child_id]:
            raise IllegalAttachment(f"{child_id} already attached to {new_id}")
        self._parents[child_id].discard(old_id)
        self._children[old_id].discard(child_id)
        try:
            self._check_attach(child, new)
        except Exception:
            self._parents[child_id].add(old_id)
            self._children[old_id].add(child_id)
            raise
        self._parents[child_id].add(new_id)
        self._children[new_id].add(child_id)
        return ChangeSet(changed=(child,))

    # -- derived views ---------------------------------------------------

    def up_chains(self, entity_id: str) -> list[tuple[EntityId, ...]]:
        """Every attachment chain from the entity up to an edge router.

        Chains are returned entity-first in deterministic (sorted) order;
        the list is empty when no chain reaches an edge router. This is
        the ground-truth enumeration that locator construction must agree
        with.
        """
        start = self.entity(entity_id)
        if start.kind is Kind.EDGE_ROUTER:
            return [(start,)]
        chains: list[tuple[EntityId, ...]] = []
        stack: list[tuple[EntityId, ...]] = [(start,)]
        while stack:
            chain = stack.pop()
            tip = chain[-1]
            for parent in sorted(self.parents(tip.id), key=lambda e: e.id):
                if any(parent.id == e.id for e in chain):
                    continue  # cycle guard
                extended = chain + (parent,)
                if parent.kind is Kind.EDGE_ROUTER:
                    chains.append(extended)
                else:
                    stack.append(extended)
        chains.sort(key=lambda c: tuple(e.id for e in c))
        return chains

    def core_route(self, edge_a: str, edge_b: str) -> list[EntityId]:
        """Hop-shortest path between two edge routers over the core links.

        Ties resolve to the lexicographically smallest node sequence so
        routing is reproducible.
        """
        a, b = self.entity(edge_a), self.entity(edge_b)
        for ent in (a, b):
            if ent.kind is not Kind.EDGE_ROUTER:
                raise IllegalAttachment(f"{ent.id} is not an edge router")
        if edge_a == edge_b:
            return [a]
        # distances to the target, then greedily walk the smallest-id
        # neighbor that still shrinks the distance
        dist = {edge_b: 0}
        queue = deque([edge_b])
        while queue:
            cur = queue.popleft()
            for nb in self._core_links.get(cur, {}):
                if nb not in dist:
                    dist[nb] = dist[cur] + 1
                    queue.append(nb)
        if edge_a not in dist:
            raise Unreachable(f"no core route {edge_a} -> {edge_b}")
        path = [a]
        cur = edge_a
        while cur != edge_b:
            nxt = min(
                (nb for nb in self._core_links.get(cur, {}) if dist.get(nb, -1) == dist[cur] - 1),
            )
            path.append(self._entities[nxt])
            cur = nxt
        return path

    # -- oracle helpers (tests and metrics only) ---------------------------

    def oracle_shortest_hops(self, id_a: str, id_b: str) -> int:
        """BFS hop count over the full graph: up-edges both ways plus core links."""
        self.entity(id_a)
        self.entity(id_b)
        if id_a == id_b:
            return 0
        dist = {id_a: 0}
        queue = deque([id_a])
        while queue:
            cur = queue.popleft()
            neighbors = (
                self._parents[cur]
                | self._children[cur]
                | set(self._core_links.get(cur, {}))
            )
            for nb in neighbors:
                if nb not in dist:
                    dist[nb] = dist[cur] + 1
                    if nb == id_b:
                        return dist[nb]
                    queue.append(nb)
        raise Unreachable(f"{id_a} and {id_b} are disconnected")

    def oracle_nearest_copy(self, host_id: str, object_ids: list[str]) -> int:
        """Minimum BFS distance from a host to any of the given objects.

        Single BFS over the infrastructure (objects are leaves, so the
        distance to an object is one more than the distance to a parent
        host). Metrics denominator; not used by routing.
        """
        self.entity(host_id)
        dist = {host_id: 0}
        queue = deque([host_id])
        while queue:
            cur = queue.popleft()
            neighbors = (
                self._parents[cur]
                | self._children[cur]
                | set(self._core_links.get(cur, {}))
            )
            for nb in neighbors:
                if self._entities[nb].kind is Kind.OBJECT or nb in dist:
                    continue
                dist[nb] = dist[cur] + 1
                queue.append(nb)
        best = None
        for oid in object_ids:
            obj = self.entity(oid)
            if obj.kind is not Kind.OBJECT:
                raise UnknownEntity(f"{oid} is not an object entity")
            for parent in self._parents[oid]:
                if parent in dist:
                    d = dist[parent] + 1
                    if best is None or d < best:
                        best = d
        if best is None:
            raise Unreachable(f"no copy reachable from {host_id}")
        return best

    # -- invariant sweep ---------------------------------------------------

    def validate(self) -> None:
        """Full invariant sweep; raises on any violation."""
        for eid, parents in self._parents.items():
            child = self._entities[eid]
            for pid in parents:
                if pid not in self._entities:
                    raise UnknownEntity(f"dangling parent {pid} of {eid}")
                parent = self._entities[pid]
                if parent.kind not in _ALLOWED_PARENTS[child.kind]:
                    raise IllegalAttachment(f"{eid} attached under {pid}")
                if eid not in self._children[pid]:
                    raise UnknownEntity(f"child index out of sync for {eid}")
        # access-node layer must stay acyclic
        color: dict[str, int] = {}

        def visit(node: str) -> None:
            color[node] = 1
            for pid in self._parents[node]:
                if self._entities[pid].kind is not Kind.ACCESS_NODE:
                    continue
                state = color.get(pid, 0)
                if state == 1:
                    raise CycleDetected(node)
                if state == 0:
                    visit(pid)
            color[node] = 2

        for eid in self._entities:
            if self._entities[eid].kind is Kind.ACCESS_NODE and color.get(eid, 0) == 0:
                visit(eid)
        for eid, links in self._core_links.items():
            if self._entities[eid].kind not in _CORE_KINDS:
                raise IllegalAttachment(f"{eid} carries core links")
            for nb, w in links.items():
                if self._core_links.get(nb, {}).get(eid) != w:
                    raise IllegalAttachment(f"asymmetric core link {eid}-{nb}")

    def snapshot(self) -> tuple:
        """Hashable deep copy of the mutable state, for unchanged-on-failure tests."""
        return (
            tuple(sorted(self._entities)),
            tuple(sorted((k, tuple(sorted(v))) for k, v in self._parents.items())),
            tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self._core_links.items())),
            self.version,
        )
