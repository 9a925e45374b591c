"""Record deterministic API payloads for the frontend test suite.

Spins up the service on the small synthetic fixture, walks the focus flow,
and dumps each endpoint's JSON into frontend/tests/fixtures/.
"""

import json
import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

from corgie.datasets import movie_like
from corgie.model import serialize_dataset
from corgie.server import create_app
from corgie.service import Workspace

OUT = Path(__file__).resolve().parents[1] / "frontend" / "tests" / "fixtures"
OUT.mkdir(parents=True, exist_ok=True)

workdir = Path(tempfile.mkdtemp())
serialize_dataset(movie_like(n_users=120, n_movies=60, n_clusters=4, seed=5), workdir)
ws = Workspace(workdir, k=2, seed=7, layout_iterations=60)
ws.precompute()
client = TestClient(create_app(ws))


def dump(name: str, payload) -> None:
    (OUT / f"{name}.json").write_text(json.dumps(payload, sort_keys=True))
    print(f"wrote {name}.json")


dataset = client.get("/api/dataset").json()
dump("dataset", dataset)
dump("latent", client.get("/api/latent").json())
dump("global-layout", client.get("/api/global-layout").json())

# focal group: first 12 users (node ids 0..119 are users in this fixture)
focus_ids = list(range(12))
r = client.post("/api/session/default/focus", json={"kind": "createNew", "nodeIds": focus_ids})
dump("focus-accepted", r.json())
while True:
    r = client.get("/api/session/default/khop-layout")
    if r.status_code == 200:
        break
    time.sleep(0.1)
dump("khop-layout", r.json())

dump("features", client.get("/api/features", params={"scopes": "all,foc-0"}).json())
dump("distances-topo", client.get("/api/distances", params={"y": "topo", "scope": "all"}).json())
dump(
    "brush-result",
    client.post(
        "/api/distances/brush",
        json={"y": "topo", "scope": "all", "region": [0.6, 1.0, 0.0, 0.4]},
    ).json(),
)
dump("session", client.get("/api/session/default").json())
ws.shutdown()
print("done")
