"""Player II steers every reply into a chosen oscillation class, first in the
asymptotic game against a tail-following I, then in the Gowers game against
a catalog of block subsequences.  The finitized game reaches the same outcome.
"""
from blockramsey import games
from blockramsey.games import GameKind
from blockramsey.osc import asymptotic_class
from blockramsey.vecspace import BlockSeq

ground = BlockSeq.basis(range(16), 3)
targets = [1, 0, 1, 1]

t = games.run(games.new_game(GameKind.ASYMPTOTIC, ground), games.TailPlayer(), games.ClassChaser(targets), 4)
print("F[X] replies:", list(t.outcome))
print("classes:", [asymptotic_class(y) for y in t.outcome], "rejections on replay:", games.replay(t, ground))

catalog = [BlockSeq.basis(range(4 * k, 4 * k + 4), 3) for k in range(4)]
t = games.run(games.new_game(GameKind.GOWERS, ground), games.CatalogPlayer(catalog), games.ClassChaser(targets), 4)
print("G[X] replies:", list(t.outcome))

direct = games.play_gowers_directly(games.ClassChaser(targets), tuple(catalog))
via_star = games.simulate_gowers_via_finitized(games.ClassChaser(targets), tuple(catalog))
print("G and G* agree:", direct == via_star)
print("move types:", [m["type"] for m in t.to_json()["moves"]])
