"""Independent high-precision reference values frozen into the C++ tests.

Run with: python3 tests/oracle/gen_oracles.py
"""
import mpmath as mp

mp.mp.dps = 40


def chi4(n):
    return [0, 1, 0, -1][n % 4]


def chi3(n):
    return [0, 1, -1][n % 3]


def L(s, chi, q):
    return mp.dirichlet(s, [chi(n) for n in range(q)])


print("zeta(3) =", mp.nstr(mp.zeta(3), 20))
print("zeta(1/2) =", mp.nstr(mp.zeta(0.5), 20))
print("zeta(2,1/2) =", mp.nstr(mp.zeta(2, 0.5), 20))
print("L(2,chi_-3) =", mp.nstr(L(2, chi3, 3), 20))
print("L(1,chi_-4) =", mp.nstr(L(1, chi4, 4), 20))
print("|L(1/2+10i,chi_-4)| =", mp.nstr(abs(L(0.5 + 10j, chi4, 4)), 20))
print("Z(20) zeta =", mp.nstr(mp.siegelz(20), 20))
print("zeta zeros:", [mp.nstr(mp.im(mp.zetazero(k)), 17) for k in range(1, 30)])
for name, chi, q in (("chi_-4", chi4, 4), ("chi_-3", chi3, 3)):
    zs = []
    for g0 in {"chi_-4": [6.02, 10.24, 12.99], "chi_-3": [8.04, 11.25, 15.70]}[name]:
        r = mp.findroot(lambda u: L(mp.mpf(0.5) + 1j * u, chi, q), mp.mpf(g0))
        zs.append(mp.nstr(mp.re(r), 17))
    print(name, "zeros:", zs)
