import http.client
import threading
import time
import xml.etree.ElementTree as ET
import xmlrpc.client

import pytest

from sensenet.core import ProfileQuery, Relation
from sensenet.filtering import Materializer
from sensenet.inference import (decompose_phrases, display_node, expand_query,
                                get_analogy, get_context)
from sensenet.normalization import load_lexicon
from sensenet.server import (FAULT_BAD_PARAMS, FAULT_BUILDING,
                             FAULT_UNKNOWN_METHOD, ManagementServer,
                             dispatch, encode_correspondences, encode_display,
                             encode_scored, get_api)

from conftest import make_profile

P_M = make_profile("M", "18_29", "mestrado", "Clementina", "SP")
P_F = make_profile("F", "18_29", "mestrado", "Campinas", "SP")

RELAXED = [
    Relation("UsedFor", "computer", "study", 3, 0, (1, 2, 3), P_M),
    Relation("UsedFor", "notebook", "study", 1, 0, (4,), P_M),
    Relation("IsA", "computer", "machine", 1, 0, (5,), P_F),
    Relation("LocationOf", "computer", "desk", 2, 0, (6, 7), P_F),
]


@pytest.fixture
def server(tmp_path):
    materializer = Materializer(RELAXED, tmp_path)
    mgmt = ManagementServer(materializer, provider=load_lexicon(bundled="en"),
                            port=0, port_range=(20200, 20260))
    mgmt.start()
    yield mgmt
    mgmt.stop()


class TestAcquire:
    def test_repeat_acquire_is_port_stable(self, server):
        q = ProfileQuery.match_all()
        port = server.acquire_api(q)
        assert server.acquire_api(q) == port

    def test_distinct_queries_distinct_ports(self, server):
        p1 = server.acquire_api(ProfileQuery.match_all())
        p2 = server.acquire_api(ProfileQuery(genders=("F",)))
        assert p1 != p2

    def test_concurrent_acquire_builds_once(self, server):
        q = ProfileQuery(genders=("M",))
        ports = []
        barrier = threading.Barrier(50)

        def worker():
            barrier.wait()
            ports.append(server.acquire_api(q))

        threads = [threading.Thread(target=worker) for _ in range(50)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(set(ports)) == 1
        assert server.materializer.build_count == 1

    def test_get_api_reports_state(self, server):
        info = get_api(server.port, [[], [], [], [], []])
        assert set(info) == {"port", "state"}
        deadline = time.time() + 5
        while info["state"] != "ready" and time.time() < deadline:
            time.sleep(0.05)
            info = get_api(server.port, [[], [], [], [], []])
        assert info["state"] == "ready"

    def test_get_api_bad_values_fault(self, server):
        with pytest.raises(xmlrpc.client.Fault) as err:
            get_api(server.port, [["X"], [], [], [], []])
        assert err.value.faultCode == FAULT_BAD_PARAMS


class TestDispatchFidelity:
    def test_all_methods_match_in_process(self, server):
        q = ProfileQuery.match_all()
        port = server.acquire_api(q)
        net = server.materializer.materialize(q).net
        provider = server.provider

        got = dispatch(port, "get_context", [["computer"]])
        assert got == encode_scored(get_context(["computer"], net))

        got = dispatch(port, "display_node", ["computer"])
        assert got == encode_display(display_node("computer", net,
                                                  server.templates,
                                                  server.registry))

        target_lines = [
            '(UsedFor "pen" "study" "f=1;i=0" "9")',
            '(LocationOf "pen" "desk" "f=1;i=0" "10")',
        ]
        got = dispatch(port, "get_analogy", [target_lines])
        from sensenet.core import ConceptNet

        target = ConceptNet.from_lines(target_lines, server.registry)
        assert got == encode_correspondences(get_analogy(net, target))

        got = dispatch(port, "expand_query", ["computer"])
        assert got == expand_query("computer", net, provider)

        got = dispatch(port, "decompose_phrases", ["studying new books"])
        assert got == decompose_phrases("studying new books", provider)

    def test_empty_display_is_empty_not_fault(self, server):
        port = server.acquire_api(ProfileQuery(cities=("Nowhere",)))
        assert dispatch(port, "display_node", ["computer"]) == []

    def test_unknown_method_fault_1(self, server):
        port = server.acquire_api(ProfileQuery.match_all())
        with pytest.raises(xmlrpc.client.Fault) as err:
            dispatch(port, "frobnicate", [])
        assert err.value.faultCode == FAULT_UNKNOWN_METHOD

    def test_bad_params_fault_2(self, server):
        port = server.acquire_api(ProfileQuery.match_all())
        with pytest.raises(xmlrpc.client.Fault) as err:
            dispatch(port, "get_context", [["computer"], 0])
        assert err.value.faultCode == FAULT_BAD_PARAMS

    def test_building_fault_3(self, server):
        release = threading.Event()
        original = server.materializer.materialize

        def slow(query):
            release.wait(5)
            return original(query)

        server.materializer.materialize = slow
        try:
            info = get_api(server.port, [["F"], [], [], [], []])
            assert info["state"] == "building"
            with pytest.raises(xmlrpc.client.Fault) as err:
                dispatch(info["port"], "display_node", ["computer"])
            assert err.value.faultCode == FAULT_BUILDING
        finally:
            release.set()
            server.materializer.materialize = original


class TestIndependentXmlClient:
    """Hand-built XML envelopes over a raw HTTP connection; no client
    library involved."""

    @staticmethod
    def call(port, method, xml_params: str):
        body = (
            "<?xml version='1.0'?>"
            f"<methodCall><methodName>{method}</methodName>"
            f"<params>{xml_params}</params></methodCall>"
        ).encode("utf-8")
        conn = http.client.HTTPConnection("127.0.0.1", port, timeout=10)
        conn.request("POST", "/RPC2", body,
                     {"Content-Type": "text/xml; charset=utf-8"})
        response = conn.getresponse()
        assert response.status == 200
        payload = response.read()
        conn.close()
        return ET.fromstring(payload)

    def test_get_context_roundtrip(self, server):
        q = ProfileQuery.match_all()
        port = server.acquire_api(q)
        net = server.materializer.materialize(q).net
        tree = self.call(
            port, "get_context",
            "<param><value><array><data><value><string>computer</string>"
            "</value></data></array></value></param>")
        assert tree.tag == "methodResponse"
        pairs = []
        for value in tree.findall("./params/param/value/array/data/value"):
            concept = value.find("./array/data/value[1]/string").text
            score = float(value.find("./array/data/value[2]/double").text)
            pairs.append((concept, score))
        expected = [(sc.concept, pytest.approx(sc.score))
                    for sc in get_context(["computer"], net)]
        assert pairs == expected

    def test_fault_envelope(self, server):
        port = server.acquire_api(ProfileQuery.match_all())
        tree = self.call(port, "nope", "")
        fault = tree.find("./fault/value/struct")
        assert fault is not None
        members = {m.find("name").text: m for m in fault.findall("member")}
        assert members["faultCode"].find(".//int").text == str(FAULT_UNKNOWN_METHOD)

    def test_utf8_strings_roundtrip(self, tmp_path):
        rels = [Relation("LocationOf", "computador", "mesa de escritório",
                         1, 0, (8,), P_F)]
        mgmt = ManagementServer(Materializer(rels, tmp_path),
                                provider=load_lexicon(bundled="pt"),
                                port=0, port_range=(20261, 20280))
        mgmt.start()
        try:
            port = mgmt.acquire_api(ProfileQuery.match_all())
            tree = self.call(
                port, "get_context",
                "<param><value><array><data><value><string>computador</string>"
                "</value></data></array></value></param>")
            concept = tree.find(
                "./params/param/value/array/data/value/array/data/value/string").text
            assert concept == "mesa de escritório"
        finally:
            mgmt.stop()


class TestEviction:
    def test_no_idle_instances(self, server):
        assert server.evict_idle(3600) == 0

    def test_idle_instance_evicted_and_reacquired_without_rebuild(self, server):
        q = ProfileQuery.match_all()
        port = server.acquire_api(q)
        builds = server.materializer.build_count
        time.sleep(0.05)
        assert server.evict_idle(0.01) == 1
        new_port = server.acquire_api(q)
        assert server.materializer.build_count == builds
        assert new_port in range(*server.port_range) or new_port == port

    def test_evicted_port_refuses_connections(self, server):
        q = ProfileQuery.match_all()
        port = server.acquire_api(q)
        time.sleep(0.05)
        server.evict_idle(0.01)
        with pytest.raises(OSError):
            conn = http.client.HTTPConnection("127.0.0.1", port, timeout=1)
            conn.request("POST", "/RPC2", b"x",
                         {"Content-Type": "text/xml"})
            conn.getresponse()

    def test_ports_unique_among_live(self, server):
        ports = [server.acquire_api(ProfileQuery(cities=(f"c{i}",)))
                 for i in range(5)]
        assert len(set(ports)) == 5

    def test_pool_exhaustion(self, tmp_path):
        mgmt = ManagementServer(Materializer(RELAXED, tmp_path),
                                provider=load_lexicon(bundled="en"),
                                port=0, port_range=(20290, 20291))
        mgmt.start()
        try:
            mgmt.acquire_api(ProfileQuery(cities=("a",)))
            mgmt.acquire_api(ProfileQuery(cities=("b",)))
            with pytest.raises(RuntimeError):
                mgmt.acquire_api(ProfileQuery(cities=("c",)))
        finally:
            mgmt.stop()
