"""Drive the HTTP API in-process: precompute, focus, poll, brush.

The same flow a browser client uses.  `corgie serve <dir>` exposes these
endpoints over HTTP; here an in-process test client keeps the demo
self-contained.
"""

import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

from corgie.datasets import movie_like
from corgie.model import serialize_dataset
from corgie.server import create_app
from corgie.service import Workspace

workdir = Path(tempfile.mkdtemp(prefix="corgie-demo-"))
serialize_dataset(movie_like(n_users=120, n_movies=60, n_clusters=4, seed=5), workdir)

workspace = Workspace(workdir, k=2, seed=7, layout_iterations=60)
report = workspace.precompute()
print("precompute:", report["artifacts"])

client = TestClient(create_app(workspace))
summary = client.get("/api/dataset").json()
print(f"dataset: {summary['nNodes']} nodes, kinds {summary['nodeTypes']}")

# focus a group of users, poll the async layout job
users = [v for v, t in enumerate(summary["types"]) if t == 0][:12]
r = client.post("/api/session/default/focus", json={"kind": "createNew", "nodeIds": users})
print("focus accepted:", r.status_code, r.json())
while True:
    r = client.get("/api/session/default/khop-layout")
    if r.status_code == 200:
        break
    time.sleep(0.1)
layout = r.json()
print("layout boxes:", [(b["group"], len(b["nodes"])) for b in layout["boxes"]])

chart = client.get("/api/distances", params={"y": "topo", "scope": "within:0"}).json()
print(f"within-group chart: {chart['includedCount']} pairs, sampled={chart['sampleMeta']['sampled']}")

brush = client.post(
    "/api/distances/brush",
    json={"y": "topo", "scope": "all", "region": [0.7, 1.0, 0.0, 0.3]},
).json()
print(f"brushed {len(brush['pairs'])} suspicious pairs")

recs = client.get("/api/node/0/recommendations", params={"top": 5}).json()
print("recommendations for node 0:")
for rec in recs["recommendations"]:
    print(f"  {rec['label']:>12}  latent distance {rec['latentDistance']:.3f}")
workspace.shutdown()
