"""Regenerates the high-precision reference values frozen in the C++ tests.

Run with `python3 frozen_values.py`; needs mpmath. Every printed number
appears verbatim (rounded) in one of the test_*.cpp files.
"""
from mpmath import mp, mpf, sqrt, tanh, atanh, log, exp, agm

mp.dps = 30


def lpf(eta):
    return sqrt(2) * eta ** mpf("0.125") / sqrt(sqrt(eta) + 1)


def modes(w, w0, lam):
    w, w0, lam = mpf(w), mpf(w0), mpf(lam)
    lc = sqrt(w * w0) / 2
    if lam <= lc:
        s = sqrt((w0**2 - w**2) ** 2 + 16 * lam * lam * w * w0)
        return sqrt((w * w + w0 * w0 - s) / 2), sqrt((w * w + w0 * w0 + s) / 2), None
    mu = w * w0 / (4 * lam * lam)
    b = w0**2 / mu**2
    s = sqrt((b - w * w) ** 2 + 4 * w * w * w0 * w0)
    return sqrt((w * w + b - s) / 2), sqrt((w * w + b + s) / 2), mu


t1, t2 = mpf("1.1989476"), mpf("0.8958797")
r = (t2 - t1) / 2
print("relative_map r, tanh r:", r, tanh(r))

T1, T2 = log(11) / 2, log(6) / 2
r = (T2 - T1) / 2
print("LMG Theta(1.1), Theta(1.2):", T1, T2)
print("LMG fidelity (1.1, 1.2):", (1 - tanh(r) ** 2) ** mpf("0.25"))

q = mpf("0.5")
a = [(1 - q * q) ** mpf("0.25")]
for n in range(1, 400):
    a.append(a[-1] * sqrt(mpf(2 * n - 1) / (2 * n)) * q)
s4 = sum(x**4 for x in a)
print("tanh r = 0.5, a0 a2 a4:", a[0], a[1], a[2])
print("sum a^4, chi:", s4, 1 / s4, "(AGM form:", (1 - q * q) / agm(1, sqrt(1 - q**4)), ")")

print("lpf(0.1), lpf(0.01):", lpf(mpf("0.1")), lpf(mpf("0.01")))
qe = (sqrt(mpf("0.1")) - 1) / (sqrt(mpf("0.1")) + 1)
print("tanh r at eta = 0.1:", qe)
print("fidelity(tanh r = -0.1503847):", (1 - mpf("0.1503847") ** 2) ** mpf("0.25"))

print("modes lambda = 0.45:", modes(1, 1, "0.45"))
print("modes lambda = 0.55:", modes(1, 1, "0.55"))
print("e1(0.495):", modes(1, 1, "0.495")[0])

print("LMG h = 1.5: Delta, Theta:", 2 * sqrt(mpf("0.5") * mpf("1.5")), atanh(mpf("0.5")))
print("LMG h = 0.5: Delta, Theta:", 2 * sqrt(mpf("0.75")), atanh(mpf(1) / 7))

for qq in (mpf("-0.519495"), qe):
    print("echo q =", qq, "minimum:", (1 - qq * qq) / (1 + qq * qq), "quarter period:", (1 - qq * qq) / sqrt(1 + qq**4))

print("envelope Gamma=0.5 xi=0.2 t=2:", (1 + mpf("0.04") * 4) ** mpf("-0.5") * exp(-mpf("0.5") * 4 / (1 + mpf("0.04") * 4)))
print("M_p(0.1), M_p(0.01):", 2 * sqrt(mpf("0.1")) / mpf("1.1"), 2 * sqrt(mpf("0.01")) / mpf("1.01"))
