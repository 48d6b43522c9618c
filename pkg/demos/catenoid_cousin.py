"""Total curvature and the Chern-Osserman comparison for catenoid cousins."""
import math

from nullholo.catenoid import CatenoidCousinParams
from nullholo.surface_geom import catenoid_cousin_surface, chern_osserman_check, total_curvature

for mu, a, b in [(0.3, 0.0, 1.0), (0.0, 1.0, 2.0), (0.3, 0.0, 2.0)]:
    s = catenoid_cousin_surface(CatenoidCousinParams(mu, a, b))
    tc = total_curvature(s, "dual")
    co = chern_osserman_check(s, "dual")
    print(f"mu={mu} a={a} b={b}: k={tc.k} TA/pi={tc.exact / math.pi:g} quadrature/pi={tc.quadrature / math.pi:.6f} "
          f"lhs={co.lhs:g} rhs={co.rhs:g} equality={co.equality}")
