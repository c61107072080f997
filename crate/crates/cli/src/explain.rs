//! The sign and grading conventions, as printed by `bvcheck explain`.

pub const LEDGER: &str = "\
Sign and grading conventions

Grading
  Generators carry integer degrees; odd degree means odd parity. Polyvector
  models store x_i in degree 0 and xi_i in degree 1, so the wedge product has
  degree 0 and the Schouten bracket degree -1. In the shifted grading
  p(a) = |a| - 1 the product has degree +1 and the bracket degree 0; the
  Gerstenhaber checks state their degree offsets in p.

Operators
  Normal form: sum of c * x^M * d[g_1]^b_1 ... d[g_n]^b_n, derivatives applied
  highest index first. d[g] is a left graded derivation of degree -|g|.

Higher brackets
  F^1(a) = D(a)
  F^n(a_1..a_n) = F^(n-1)(a_1..a_(n-2), a_(n-1) a_n)
                - F^(n-1)(a_1..a_(n-1)) a_n
                - (-1)^(|a_(n-1)| (|D| + |a_1| + ... + |a_(n-2)|))
                  a_(n-1) F^(n-1)(a_1..a_(n-2), a_n)
  Product form: sum over nonempty S of (-1)^(n-|S|) * koszul(S, S^c)
  * D(a_S) a_(S^c). Only parities enter the signs.
  Order <= k means F^(k+1) = 0. A nonzero D(1) gives F^n != 0 for all n, so
  structural order is read off after removing the constant term.

BV bracket
  [a, b] = (-1)^|a| F^2(a, b). On polyvectors this is -1 times the Schouten
  bracket sum_i (-1)^(|P|+1) (d/dxi_i P)(d/dx_i Q) - (d/dx_i P)(d/dxi_i Q),
  the sign fixed by the pair (xi_1, x_1).

L-infinity structure
  Letters of the symmetric coalgebra on the suspension have degree |a| + 1.
  l_k(a_1..a_k) = (-1)^(sum_i (k - i)(|a_i| + 1)) F^k(a_1..a_k), so l_1 = D and
  l_2 = -[ , ]. Q_k has bidegree (|D| + 1 - k, 1 - k) in (degree, length) and
  passes factors by the Koszul rule on that bidegree. The relation of
  arity n is sum_k (-1)^(k(n-k)) sum over unshuffles of
  (-1)^sigma eps(sigma) l_(n-k+1)(l_k(a_S), a_R), with signs read on shifted
  degrees.

Degree split
  A square-zero D = sum_n D_n with D_n of degree 3 - 2n and order <= n.
  D^2 = 0 splits by degree: D1D1 = 0, D1D2 + D2D1 = 0,
  D1D3 + D2D2 + D3D1 = 0, ...

Cohomology
  Slices are indexed by (degree, weight); weights make d weight-homogeneous.
  Representatives come from reduced echelon forms in increasing monomial
  order. Identities on classes are tested modulo boundaries; anything leaving
  the weight window is reported untested.
";
