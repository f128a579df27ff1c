"""Tests for the HTTP facade: endpoints, status codes, determinism."""

import asyncio

import httpx
import pytest

from mcmullen.geometry import center_a_k
from mcmullen.service import create_app


@pytest.fixture(scope="module")
def client():
    app = create_app(max_renders=2)
    transport = httpx.ASGITransport(app=app)

    class Sync:
        def get(self, url, **kw):
            async def go():
                async with httpx.AsyncClient(
                    transport=transport, base_url="http://testserver"
                ) as c:
                    return await c.get(url, **kw)

            return asyncio.run(go())

    return Sync()


class TestTile:
    def test_png_tile(self, client):
        r = client.get("/tile", params={"slice": "fixed-crit", "n": 6,
                                        "w": 0.7, "px": 64})
        assert r.status_code == 200
        assert r.headers["content-type"] == "image/png"
        assert r.content.startswith(b"\x89PNG")

    def test_identical_requests_identical_bytes(self, client):
        params = {"slice": "fixed-crit", "n": 6, "w": 0.7, "px": 64, "budget": 128}
        a = client.get("/tile", params=params)
        b = client.get("/tile", params=params)
        assert a.content == b.content

    def test_width_below_precision_floor_is_422(self, client):
        r = client.get("/tile", params={"slice": "fixed-crit", "n": 6,
                                        "w": 1e-20, "px": 64})
        assert r.status_code == 422

    def test_oversized_tile_is_422(self, client):
        r = client.get("/tile", params={"slice": "fixed-crit", "n": 6,
                                        "w": 0.7, "px": 4096})
        assert r.status_code == 422

    def test_malformed_n_is_400(self, client):
        r = client.get("/tile", params={"slice": "fixed-crit", "n": "six",
                                        "w": 0.7, "px": 64})
        assert r.status_code == 400

    def test_unknown_slice_is_400(self, client):
        r = client.get("/tile", params={"slice": "diagonal", "n": 6,
                                        "w": 0.7, "px": 64})
        assert r.status_code == 400

    def test_missing_slice_constant_is_400(self, client):
        r = client.get("/tile", params={"slice": "a-slice", "n": 3,
                                        "w": 1.0, "px": 32})
        assert r.status_code == 400


class TestClassify:
    def test_fixed_v_minus_at_real_center(self, client):
        r = client.get("/classify", params={"slice": "fixed-crit", "n": 3,
                                            "x": 0.125, "y": 0})
        assert r.status_code == 200
        rec = r.json()
        assert rec["minus"]["outcome"] == "FIXED_V_MINUS"
        assert rec["plus"]["outcome"] == "ATTRACTED_TO_V_PLUS"

    def test_escaping_parameter(self, client):
        r = client.get("/classify", params={"slice": "fixed-crit", "n": 3,
                                            "x": 0.02, "y": 0.2})
        assert r.json()["minus"]["outcome"] == "ESCAPED"

    def test_even_center_enters_basin_in_one_step(self, client):
        a = center_a_k(4, 4)
        r = client.get("/classify", params={"slice": "fixed-crit", "n": 4,
                                            "x": a.real, "y": a.imag})
        rec = r.json()
        assert rec["minus"]["outcome"] == "ATTRACTED_TO_V_PLUS"
        assert rec["minus"]["entry_iter"] == 1
        assert rec["phi_modulus"] < 1e-8

    def test_degenerate_point_flagged(self, client):
        r = client.get("/classify", params={"slice": "fixed-crit", "n": 3,
                                            "x": 0, "y": 0})
        assert r.json()["degenerate"] is True

    def test_budget_out_of_range_is_422(self, client):
        r = client.get("/classify", params={"slice": "fixed-crit", "n": 3,
                                            "x": 0.1, "y": 0, "budget": 0})
        assert r.status_code == 422

    def test_agrees_with_one_pixel_tile(self, client):
        # classification color must equal the pixel of a 1x1 tile rendered
        # at the same point with the same budget
        import io

        import numpy as np
        from PIL import Image

        x, y = 0.19, 0.0
        rec = client.get("/classify", params={"slice": "fixed-crit", "n": 6,
                                              "x": x, "y": y,
                                              "budget": 256}).json()
        tile = client.get("/tile", params={"slice": "fixed-crit", "n": 6,
                                           "cx": x, "cy": y, "w": 1e-9,
                                           "px": 1, "budget": 256})
        px = np.asarray(Image.open(io.BytesIO(tile.content)).convert("RGB"))[0, 0]
        assert list(px) == rec["color"]


class TestLoci:
    def test_centers_records(self, client):
        r = client.get("/loci", params={"n": "3", "kind": "centers"})
        recs = r.json()["records"]
        assert len(recs) == 5
        assert recs[2]["k"] == 3
        assert recs[2]["a"][0] == pytest.approx(0.125, abs=1e-12)
        assert recs[2]["a"][1] == pytest.approx(0.0, abs=1e-12)

    def test_center_count_n6(self, client):
        r = client.get("/loci", params={"n": "6", "kind": "centers"})
        assert len(r.json()["records"]) == 11

    def test_limit_spine(self, client):
        r = client.get("/loci", params={"n": "inf", "kind": "spine",
                                        "samples": 64})
        recs = r.json()["records"]
        assert len(recs) == 64
        assert recs[0]["a"] == [0.25, 0.0]

    def test_unknown_kind_is_400(self, client):
        r = client.get("/loci", params={"n": "3", "kind": "orbit"})
        assert r.status_code == 400

    def test_infinite_n_centers_is_422(self, client):
        r = client.get("/loci", params={"n": "inf", "kind": "centers"})
        assert r.status_code == 422


class TestJulia:
    def test_renders_png(self, client):
        r = client.get("/julia", params={"n": 3, "ax": 0.125, "w": 3, "px": 32})
        assert r.status_code == 200
        assert r.content.startswith(b"\x89PNG")

    def test_degenerate_a_is_422(self, client):
        r = client.get("/julia", params={"n": 3, "ax": 0, "w": 3, "px": 32})
        assert r.status_code == 422
