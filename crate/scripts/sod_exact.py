"""Exact Riemann solution of the Sod shock tube, gamma = 1.4.

Prints the star-region states and the wave positions at t = 0.15 for a
diaphragm at x = 0.5. Used for the limiter check on a shocked Riemann
problem.
"""
from scipy.optimize import brentq

G = 1.4
L = (1.0, 0.0, 1.0)
R = (0.125, 0.0, 0.1)


def f(p, s):
    rho, u, pk = s
    c = (G * pk / rho) ** 0.5
    if p > pk:
        a = 2 / ((G + 1) * rho)
        b = (G - 1) / (G + 1) * pk
        return (p - pk) * (a / (p + b)) ** 0.5
    return 2 * c / (G - 1) * ((p / pk) ** ((G - 1) / (2 * G)) - 1)


p_star = brentq(lambda p: f(p, L) + f(p, R) + R[1] - L[1], 1e-8, 10.0, xtol=1e-15)
u_star = 0.5 * (L[1] + R[1]) + 0.5 * (f(p_star, R) - f(p_star, L))
rho_l = L[0] * (p_star / L[2]) ** (1 / G)
g = (G - 1) / (G + 1)
rho_r = R[0] * (p_star / R[2] + g) / (g * p_star / R[2] + 1)
c_r = (G * R[2] / R[0]) ** 0.5
shock = R[1] + c_r * ((G + 1) / (2 * G) * p_star / R[2] + (G - 1) / (2 * G)) ** 0.5
c_l = (G * L[2] / L[0]) ** 0.5
c_sl = (G * p_star / rho_l) ** 0.5
t = 0.15
print(f"p*={p_star:.6f} u*={u_star:.6f} rho*L={rho_l:.6f} rho*R={rho_r:.6f} shock speed={shock:.6f}")
print(f"t={t}: head={0.5 - c_l * t:.4f} tail={0.5 + (u_star - c_sl) * t:.4f} contact={0.5 + u_star * t:.4f} shock={0.5 + shock * t:.4f}")
