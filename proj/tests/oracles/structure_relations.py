"""Symbolic check of the commutator tables and Hamiltonian pairs used by the catalog.

Bracket convention: [X, Y] = J_Y X - J_X Y.  Hamiltonian convention: the form
matrix W (W[i][j] = omega(e_i, e_j)) satisfies W^T X_h = grad h, and
{f, g} = grad f . X_g.
"""
import sympy as sp


def bracket(X, Y, xs):
    X, Y = sp.Matrix(X), sp.Matrix(Y)
    return sp.simplify(Y.jacobian(xs) * X - X.jacobian(xs) * Y)


def ham_residual(W, X, h, xs):
    return sp.simplify(W.T * sp.Matrix(X) - sp.Matrix([sp.diff(h, x) for x in xs]))


def poisson(W, f, g, xs):
    grad = lambda u: sp.Matrix([sp.diff(u, x) for x in xs])
    Xg = W.T.inv() * grad(g)
    return sp.simplify((grad(f).T * Xg)[0])


H, R, N1, N2, rho, v, k, a, b = sp.symbols("H R N1 N2 rho v k a b", positive=True)

print("corona [M1,M2] =", list(bracket([H, -H], [-H, -R], [H, R])))
print("lv [Z1,Z2] =", list(bracket([N1, 0], [0, N2], [N1, N2])))
print("lv [Z1,Z3] =", list(bracket([N1, 0], [N1 * N2, 0], [N1, N2])))
print("lv [Z2,Z3] =", list(bracket([0, N2], [N1 * N2, 0], [N1, N2])))
print("lv-add [Z2,Z4] =", list(bracket([0, N2], [0, 1], [N1, N2])))
print("lv-add [Z3,Z4] =", list(bracket([N1 * N2, 0], [0, 1], [N1, N2])))

W_corona = sp.Matrix([[0, 1 / (R * H + H**2)], [-1 / (R * H + H**2), 0]])
h1c, h2c = sp.log(H + R), sp.log(H / (H + R))
print("corona pair M1/h1:", list(ham_residual(W_corona, [H, -H], h1c, [H, R])))
print("corona pair M2/h2:", list(ham_residual(W_corona, [-H, -R], h2c, [H, R])))
print("corona {h1,h2} =", poisson(W_corona, h1c, h2c, [H, R]))

W_erm = sp.Matrix([[0, 1], [-1, 0]])
X1, X2, X3 = [0, -rho], [-rho / 2, v / 2], [v, k / rho**3]
e1, e2, e3 = rho**2 / 2, -rho * v / 2, (v**2 + k / rho**2) / 2
for X, h in ((X1, e1), (X2, e2), (X3, e3)):
    print("ermakov pair residual:", list(ham_residual(W_erm, X, h, [rho, v])))
print("ermakov {h1,h2}+h1 =", sp.simplify(poisson(W_erm, e1, e2, [rho, v]) + e1))
print("ermakov {h1,h3}+2h2 =", sp.simplify(poisson(W_erm, e1, e3, [rho, v]) + 2 * e2))
print("ermakov {h2,h3}+h3 =", sp.simplify(poisson(W_erm, e2, e3, [rho, v]) + e3))

for label, W in (("1/(a-b)", sp.Matrix([[0, 1 / (a - b)], [-1 / (a - b), 0]])),
                 ("squared 1/(a-b)^2", sp.Matrix([[0, 1 / (a - b) ** 2], [-1 / (a - b) ** 2, 0]]))):
    hs = [1 / (a - b), (a + b) / (2 * (a - b)), a * b / (a - b)]
    Xs = [[1, 1], [a, b], [a**2, b**2]]
    res = [list(ham_residual(W, X, h, [a, b])) for X, h in zip(Xs, hs)]
    print("riccati pair residuals with", label, res)
    print("  {h0,h1}+h0 =", sp.simplify(poisson(W, hs[0], hs[1], [a, b]) + hs[0]))

W_lv = sp.Matrix([[0, 1 / (N1 * N2)], [-1 / (N1 * N2), 0]])
lvh = [sp.log(N2), -sp.log(N1), N2]
for X, h in zip(([N1, 0], [0, N2], [N1 * N2, 0]), lvh):
    print("lv pair residual:", list(ham_residual(W_lv, X, h, [N1, N2])))
print("lv {h1,h2} =", poisson(W_lv, lvh[0], lvh[1], [N1, N2]),
      " {h1,h3} =", poisson(W_lv, lvh[0], lvh[2], [N1, N2]),
      " {h2,h3} =", poisson(W_lv, lvh[1], lvh[2], [N1, N2]))
