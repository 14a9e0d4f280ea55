"""What an honest-but-curious Bob learns about the string he did not choose.

Bob's raw knowledge is fine: on the positions he assigns to the other
string his measurement basis was wrong, so those bits of Alice's are
uniform given everything he has seen.  The trouble is the hash.  At n=2
the other string is a 1-bit hash of 0, 1 or 2 uniform bits, and a random
Toeplitz function is constant on them with probability 1, 1/2 and 1/4.
Weighted by how often each size occurs, the distance from uniform is
1/4 * 1/2 + 1/2 * 1/4 + 1/4 * 1/8 = 9/32.  Privacy amplification needs
many more hidden bits than output bits; at the tiny size it cannot work.
"""

from fractions import Fraction

from quclab.adversim import tv_distance
from quclab.harness.experiments import pair_finish, privacy_world, sender_privacy_views, with_uniform
from quclab.netexec import ExactTree, ExecConfig, exec_network
from quclab.otproto import EXACT_PARAMS

dist = exec_network(privacy_world(EXACT_PARAMS, b"0", pair_finish), ExecConfig(mode=ExactTree()))
hashed, raw, views = sender_privacy_views(dist, 0)
print(f"{dist.branches} branches, {len(views)} distinct views of Bob")
print("TV(view and raw hidden bits, view and uniform) =", tv_distance(raw, with_uniform(raw, views)))
tv = tv_distance(hashed, with_uniform(hashed, views))
print("TV(view and s_1, view and uniform)             =", tv)
assert tv == Fraction(1, 4) * Fraction(1, 2) + Fraction(1, 2) * Fraction(1, 4) + Fraction(1, 4) * Fraction(1, 8)
