"""Symbolic left and right forms of the catenoid-cousin lift (sympy only)."""
import sympy as sp

z = sp.symbols("z", positive=True)
mu, a, b = sp.symbols("mu a b", real=True)
p = sp.sqrt((b**2 + 3 * mu**2) / (b**2 - a**2))
q = sp.sqrt((a**2 + 3 * mu**2) / (b**2 - a**2))
F = sp.Matrix([[p * z ** (mu + a), 0, q * z ** (mu - b)], [0, z ** (-2 * mu), 0], [q * z ** (mu + b), 0, p * z ** (mu - a)]])

if __name__ == "__main__":
    Fi = F.inv()
    for name, M in (("left", Fi * F.diff(z)), ("right", F.diff(z) * Fi)):
        print(name)
        for i in range(3):
            for j in range(3):
                e = sp.simplify(sp.powsimp(sp.factor(M[i, j]), force=True))
                if e != 0:
                    print(" ", i + 1, j + 1, e)
