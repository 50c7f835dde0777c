"""regorb: regular-orbit certification for symmetric and alternating
group modules over small prime fields.

Subpackages split by concern:

* gfplin: exact linear algebra over F_p (numpy int64 / packed GF(2)).
* permsym: permutations, conjugacy class data, group orders.
* spechtmod: tabloid spaces, Specht/James modules D^mu, the fully
  deleted permutation module.
* repkit: representation containers, sign twists, A_n restriction,
  scalar extension, MeatAxe-style splitting, rep file IO.
* orbitengine: regular-orbit verdicts with certificates (pigeonhole,
  exact multiset law, strong bound, bitmap coverage, orbit BFS) and
  affine base sizes.
* boundlib: closed-form bounds and cotangent-space style inequalities
  used for the asymptotic regime.
* graphcert: graph-certified regular vectors in D^mu for the two-row
  and hook families.
* tables: embedded expected-results data and the replay runner.
* cli: the regorb command line.
"""

from .gfplin import BudgetExceededError, DEFAULT_SEED

__version__ = "0.1.0"

__all__ = ["BudgetExceededError", "DEFAULT_SEED", "__version__"]
