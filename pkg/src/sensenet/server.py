"""Network access layer: one management endpoint hands out per-network API
instances, each listening on its own port.

The wire protocol is HTTP POST of XML method-call envelopes (method name
plus positional params) with method-response/fault envelopes, following
the XML-RPC convention, all strings UTF-8. The management method `getApi`
takes the five profile lists as positional array parameters and answers
with the instance port and its state, so clients can poll while a network
is still building. Faults carry an integer code and a message:

    1  unknown method
    2  bad parameters
    3  instance still building
"""

from __future__ import annotations

import threading
import time
import xmlrpc.client
from dataclasses import dataclass, field
from socketserver import ThreadingMixIn
from typing import Optional, Sequence
from xmlrpc.server import SimpleXMLRPCServer

from .core import ConceptNet, ProfileQuery, Relation, TypeRegistry, \
    default_registry, serialize_relation_line
from .filtering import ConceptNetHandle, Materializer, parse_profile_query
from .inference import (Correspondence, RenderTemplates, ScoredConcept,
                        decompose_phrases, default_templates, display_node,
                        expand_query, get_analogy, get_context)
from .normalization import MorphologyProvider

FAULT_UNKNOWN_METHOD = 1
FAULT_BAD_PARAMS = 2
FAULT_BUILDING = 3

STATE_BUILDING = "building"
STATE_READY = "ready"

DEFAULT_PORT_RANGE = (20000, 20999)

INSTANCE_METHODS = ("get_context", "display_node", "get_analogy",
                    "expand_query", "decompose_phrases")


class _ThreadingXMLRPCServer(ThreadingMixIn, SimpleXMLRPCServer):
    daemon_threads = True
    allow_reuse_address = True


def _fault(code: int, message: str) -> xmlrpc.client.Fault:
    return xmlrpc.client.Fault(code, message)


def encode_scored(scored: Sequence[ScoredConcept]) -> list[list]:
    return [[sc.concept, sc.score] for sc in scored]


def encode_display(entries) -> list[dict]:
    return [
        {"relation": serialize_relation_line(rel), "sentence": sentence,
         "ids": list(ids)}
        for rel, sentence, ids in entries
    ]


def encode_correspondences(corrs: Sequence[Correspondence]) -> list[dict]:
    return [
        {
            "base": c.base_concept,
            "target": c.target_concept,
            "systematicity": c.systematicity,
            "literal": c.is_literal,
            "supporting": [[serialize_relation_line(b), serialize_relation_line(t)]
                           for b, t in c.supporting],
        }
        for c in corrs
    ]


@dataclass
class InstanceRecord:
    """One served network: its canonical query, port, state, and liveness."""

    query: ProfileQuery
    port: int
    state: str = STATE_BUILDING
    handle: Optional[ConceptNetHandle] = None
    last_used: float = field(default_factory=time.monotonic)
    ready: threading.Event = field(default_factory=threading.Event)
    server: Optional[_ThreadingXMLRPCServer] = None
    thread: Optional[threading.Thread] = None


class _InstanceDispatcher:
    """Request handling for one network's API port."""

    def __init__(self, record: InstanceRecord, registry: TypeRegistry,
                 templates: RenderTemplates, provider: MorphologyProvider):
        self.record = record
        self.registry = registry
        self.templates = templates
        self.provider = provider

    def _net(self) -> ConceptNet:
        handle = self.record.handle
        if self.record.state != STATE_READY or handle is None:
            raise _fault(FAULT_BUILDING, "network is still building, poll getApi")
        return handle.net

    def _dispatch(self, method: str, params):
        if method not in INSTANCE_METHODS:
            raise _fault(FAULT_UNKNOWN_METHOD, f"unknown method {method!r}")
        net = self._net()
        self.record.last_used = time.monotonic()
        try:
            if method == "get_context":
                seeds = params[0]
                depth = params[1] if len(params) > 1 else 2
                decay = params[2] if len(params) > 2 else 0.5
                return encode_scored(get_context(seeds, net, depth, decay))
            if method == "display_node":
                (concept,) = params
                return encode_display(display_node(concept, net, self.templates,
                                                   self.registry))
            if method == "get_analogy":
                (target_lines,) = params
                target = ConceptNet.from_lines(target_lines, self.registry)
                return encode_correspondences(get_analogy(net, target))
            if method == "expand_query":
                (expression,) = params
                return expand_query(expression, net, self.provider)
            (expression,) = params
            return decompose_phrases(expression, self.provider)
        except xmlrpc.client.Fault:
            raise
        except (TypeError, ValueError) as exc:
            raise _fault(FAULT_BAD_PARAMS, str(exc)) from exc


class ManagementServer:
    """Allocates one API port per requested network and serves `getApi`.

    The instance registry is a serialized critical section; network builds
    are single-flight (first requester builds, the rest poll or wait) and
    instance request handling is fully concurrent once ready.
    """

    def __init__(self, materializer: Materializer,
                 registry: Optional[TypeRegistry] = None,
                 templates: Optional[RenderTemplates] = None,
                 provider: Optional[MorphologyProvider] = None,
                 host: str = "127.0.0.1", port: int = 0,
                 port_range: tuple[int, int] = DEFAULT_PORT_RANGE):
        from .normalization import load_lexicon

        self.materializer = materializer
        self.registry = registry or default_registry()
        self.templates = templates or default_templates()
        self.provider = provider or load_lexicon(bundled="en")
        self.host = host
        self.port_range = port_range
        self._instances: dict[str, InstanceRecord] = {}
        self._lock = threading.RLock()
        self._server = _ThreadingXMLRPCServer((host, port), allow_none=False,
                                              logRequests=False)
        self.port = self._server.server_address[1]
        self._server.register_function(self.getApi, "getApi")
        self._server.register_function(self.evict_idle, "evictIdle")
        self._server.register_function(self.list_instances, "listInstances")
        self._thread: Optional[threading.Thread] = None

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> None:
        self._thread = threading.Thread(target=self._server.serve_forever,
                                        daemon=True)
        self._thread.start()

    def stop(self) -> None:
        with self._lock:
            for record in list(self._instances.values()):
                self._shutdown_instance(record)
            self._instances.clear()
        self._server.shutdown()
        self._server.server_close()

    # -- port + instance management ----------------------------------------

    def _used_ports(self) -> set[int]:
        return {rec.port for rec in self._instances.values()}

    def _start_instance_server(self, record: InstanceRecord) -> None:
        dispatcher = _InstanceDispatcher(record, self.registry, self.templates,
                                         self.provider)
        server = _ThreadingXMLRPCServer((self.host, record.port),
                                        logRequests=False)
        server.register_instance(dispatcher)
        record.server = server
        record.thread = threading.Thread(target=server.serve_forever, daemon=True)
        record.thread.start()

    def _allocate(self, query: ProfileQuery) -> InstanceRecord:
        low, high = self.port_range
        used = self._used_ports()
        for port in range(low, high + 1):
            if port in used:
                continue
            record = InstanceRecord(query=query, port=port)
            try:
                self._start_instance_server(record)
            except OSError:
                continue
            return record
        raise RuntimeError(f"port pool {low}-{high} exhausted")

    def _build(self, record: InstanceRecord) -> None:
        try:
            record.handle = self.materializer.materialize(record.query)
            record.state = STATE_READY
        finally:
            record.ready.set()

    def _ensure_instance(self, query: ProfileQuery) -> tuple[InstanceRecord, bool]:
        key = query.canonical_key()
        with self._lock:
            record = self._instances.get(key)
            if record is not None:
                return record, False
            record = self._allocate(query)
            self._instances[key] = record
            return record, True

    # -- operations ----------------------------------------------------------

    def getApi(self, genders, age_groups, educations, cities, states) -> dict:
        """Port and state for the network selected by five profile lists;
        builds in the background on first request."""
        try:
            query = parse_profile_query([genders, age_groups, educations,
                                         cities, states])
        except (TypeError, ValueError) as exc:
            raise _fault(FAULT_BAD_PARAMS, str(exc)) from exc
        record, created = self._ensure_instance(query)
        if created:
            threading.Thread(target=self._build, args=(record,), daemon=True).start()
        return {"port": record.port, "state": record.state}

    def acquire_api(self, query: ProfileQuery, timeout: Optional[float] = 30.0) -> int:
        """Blocking acquisition: returns the instance port once it is ready."""
        record, created = self._ensure_instance(query)
        if created:
            self._build(record)
        elif not record.ready.wait(timeout):
            raise TimeoutError(f"network build for {query.canonical_key()!r} timed out")
        return record.port

    def evict_idle(self, max_idle_seconds: float) -> int:
        """Shut down instances idle longer than the threshold, returning
        their ports to the pool. Persisted network files remain."""
        now = time.monotonic()
        evicted = 0
        with self._lock:
            for key, record in list(self._instances.items()):
                if record.state != STATE_READY:
                    continue
                if now - record.last_used > max_idle_seconds:
                    self._shutdown_instance(record)
                    del self._instances[key]
                    evicted += 1
        return evicted

    def list_instances(self) -> list[dict]:
        with self._lock:
            return [
                {"query": rec.query.as_lists(), "port": rec.port, "state": rec.state}
                for rec in self._instances.values()
            ]

    def _shutdown_instance(self, record: InstanceRecord) -> None:
        if record.server is not None:
            record.server.shutdown()
            record.server.server_close()
            record.server = None


def dispatch(port: int, method: str, params: Sequence, host: str = "127.0.0.1"):
    """Invoke one inference method on a served network instance."""
    proxy = xmlrpc.client.ServerProxy(f"http://{host}:{port}/")
    return getattr(proxy, method)(*params)


def get_api(mgmt_port: int, profile_lists: Sequence[Sequence[str]],
            host: str = "127.0.0.1") -> dict:
    """Client-side `getApi` call against a management endpoint."""
    proxy = xmlrpc.client.ServerProxy(f"http://{host}:{mgmt_port}/")
    return proxy.getApi(*[list(v) for v in profile_lists])
