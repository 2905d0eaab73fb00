"""Attachment registers.

Every entity in the routing system is represented by a register that
mirrors its current upward attachments. Mobility events rewrite only the
registers of the entities whose parent sets actually changed, so moving
a host that carries any number of objects costs exactly one register
write. Locator construction later walks these registers instead of
consulting any per-object state.

Registers live in one central directory keyed by address; distribution
cost is modeled by counting lookup messages rather than by placing the
registers on simulated nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UnknownAR, UnknownEntity
from .topology import AttachmentGraph, ChangeSet, EntityId


@dataclass(frozen=True, order=True)
class ARAddress:
    """Opaque stable register address, assigned once per entity."""

    value: int


@dataclass
class AttachmentRegister:
    """One entity's routing-system record of its current parents."""

    owner: EntityId
    parent_refs: set[ARAddress] = field(default_factory=set)
    last_update_tick: int = 0


class AttachmentRegistry:
    """Directory of attachment registers, addressed by :class:`ARAddress`.

    The entity <-> address mapping is a fixed bijection for the lifetime
    of the simulation; only reads of register *contents* count as query
    messages.
    """

    def __init__(self, graph: AttachmentGraph):
        self._graph = graph
        self._registers: dict[ARAddress, AttachmentRegister] = {}
        self._address_by_entity: dict[str, ARAddress] = {}
        self._next = 0
        self.query_count = 0
        self.write_count = 0

    def register_entity(self, entity: EntityId, tick: int = 0) -> ARAddress:
        """Allocate the register for a newly created entity."""
        if entity.id in self._address_by_entity:
            raise UnknownEntity(f"{entity.id} already has a register")
        addr = ARAddress(self._next)
        self._next += 1
        self._address_by_entity[entity.id] = addr
        self._registers[addr] = AttachmentRegister(owner=entity, last_update_tick=tick)
        return addr

    def address_of(self, entity_id: str) -> ARAddress:
        try:
            return self._address_by_entity[entity_id]
        except KeyError:
            raise UnknownEntity(entity_id) from None

    def entity_of(self, address: ARAddress) -> EntityId:
        try:
            return self._registers[address].owner
        except KeyError:
            raise UnknownAR(str(address.value)) from None

    def lookup(self, address: ARAddress) -> AttachmentRegister:
        """Read a register; counts one query message."""
        try:
            register = self._registers[address]
        except KeyError:
            raise UnknownAR(str(address.value)) from None
        self.query_count += 1
        return register

    def sync_from_changeset(self, changeset: ChangeSet, tick: int = 0) -> int:
        """Mirror a topology change into the registers.

        Rewrites the parent refs of exactly the changed entities and
        returns the number of register writes performed (the update-cost
        metric). Newly created entities get a register allocated, which
        is registration rather than an update write.
        """
        for entity in changeset.created:
            self.register_entity(entity, tick)
        writes = 0
        for entity in changeset.changed:
            addr = self.address_of(entity.id)
            register = self._registers[addr]
            register.parent_refs = {
                self.address_of(p.id) for p in self._graph.parents(entity.id)
            }
            register.last_update_tick = tick
            writes += 1
        self.write_count += writes
        return writes

    def validate_mirror(self) -> None:
        """Sweep: every register's parent refs match the graph exactly."""
        for addr, register in self._registers.items():
            expected = {
                self._address_by_entity[p.id]
                for p in self._graph.parents(register.owner.id)
            }
            if register.parent_refs != expected:
                raise UnknownEntity(
                    f"register of {register.owner.id} out of sync with graph"
                )
