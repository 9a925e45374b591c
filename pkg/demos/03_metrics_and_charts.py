"""Cross-space distances and the binned distance-comparison chart.

Every node pair carries three distances in [0, 1]: cosine in the latent
space, inverse Jaccard of flattened K-hop sets in topology, and scaled
Euclidean over shared feature dimensions.  Charts bin a (possibly
down-sampled) pair population on the latent axis against another space.
"""

import numpy as np

from corgie import build_hop_index
from corgie.datasets import movie_like
from corgie.distances import brush_pairs, build_chart
from corgie.metrics import DistanceContext, WithinPairs, sample_pairs

ds = movie_like(n_users=120, n_movies=60, n_clusters=4, seed=5)
index = build_hop_index(ds.graph, k=2)
ctx = DistanceContext(ds.graph, ds.embedding, index, ds.features)

pairs = np.array([[0, 1], [0, 30], [0, 130]])
print("pair  latent  topo    feature")
lat = ctx.latent_pairs(pairs)
topo, _ = ctx.topo_pairs(pairs)
feat = ctx.feature_pairs(pairs)
for (a, b), l, t, f in zip(pairs, lat, topo, feat):
    ftxt = f"{f:.3f}" if not np.isnan(f) else "absent (disjoint feature masks)"
    print(f"({a},{b})  {l:.3f}  {t:.3f}  {ftxt}")

# sample the all-pairs population under a budget and build a chart
population = WithinPairs(np.arange(ds.graph.n_nodes))
sample = sample_pairs(population, ctx, budget=5_000, seed=0)
print(f"\npopulation {sample.population} pairs, retained {len(sample)} (sampled={sample.sampled})")

chart = build_chart(sample, y_space="topo", scale="linear", grid_size=25)
print(f"chart cells sum {chart.cells.sum()} == included {chart.included_count}")

# brushing the bottom-right corner finds pairs far in latent space yet
# topologically close: candidates for embedding bugs
found, xs, ys = brush_pairs(chart, (0.7, 1.0, 0.0, 0.3))
print(f"suspicious pairs in the bottom-right corner: {len(found)}")
for (a, b), x, y in list(zip(found, xs, ys))[:5]:
    print(f"  ({a},{b}): latent {x:.2f} vs topo {y:.2f}")
