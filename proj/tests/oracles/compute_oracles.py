"""Reference values frozen into the C++ tests. Run with mpmath installed:

    python3 tests/oracles/compute_oracles.py

Everything here is evaluated from first definitions (z-integrals, direct
quadrature) at 30 significant digits, independently of the C++ code paths.
"""
import mpmath as mp

mp.mp.dps = 30
LN10 = mp.log(10)
N2 = mp.mpf("2.6e-20")
WAVELENGTH = mp.mpf("1.55e-6")


def seg(length_km, db_per_km, beta2_ps2_km, gamma_per_w_km):
    return dict(l=mp.mpf(length_km) * 1000, a=mp.mpf(db_per_km) * LN10 / 10 / 1000,
                b2=mp.mpf(beta2_ps2_km) * mp.mpf("1e-27"), g=mp.mpf(gamma_per_w_km) / 1000)


def gamma_aeff(a_eff_um2):
    return 2 * mp.pi * N2 / (WAVELENGTH * mp.mpf(a_eff_um2) * mp.mpf("1e-12")) * 1000


G_Q = gamma_aeff(250)
G_S = gamma_aeff(112)
HYBRID = [seg(50, "0.16", "-26.6", G_Q), seg(50, "0.158", "-26.6", G_S)]
SMF = [seg(100, "0.158", "-26.6", G_S)]


def span_scales(segs):
    ls = sum(s["l"] for s in segs)
    b2avg = sum(s["b2"] * s["l"] for s in segs) / ls
    fphi = 1 / (2 * mp.pi * mp.sqrt(abs(b2avg) * ls))
    return ls, b2avg, fphi


def eta_z_integral(zeta, segs):
    # |sum_k gamma_k int_{segment k} exp(-int_0^z (a - 2 i beta2 w(zeta)) dz') dz|^2 with
    # the phase rate chosen so that segment k accumulates 2 i lambda_k zeta (signed).
    ls, b2avg, _ = span_scales(segs)
    total = 0
    upstream = 0
    for s in segs:
        rate = s["a"] + 2j * zeta * s["b2"] / (b2avg * ls)
        total += s["g"] * mp.exp(-upstream) * mp.quad(lambda z: mp.exp(-rate * z), [0, s["l"]])
        upstream += rate * s["l"]
    return abs(total) ** 2


def eta_closed(zeta, segs):
    ls, b2avg, _ = span_scales(segs)
    total = 0
    upstream = 0
    for s in segs:
        x = s["a"] * s["l"] + 2j * zeta * s["b2"] * s["l"] / (b2avg * ls)
        total += s["g"] * s["l"] * mp.exp(-upstream) * (1 - mp.exp(-x)) / x
        upstream += x
    return abs(total) ** 2


def phi(zeta, n):
    s = mp.sin(zeta)
    if abs(s) < mp.mpf("1e-25"):
        return mp.mpf(1)
    return (mp.sin(n * zeta) / s) ** 2 / n ** 2


def main():
    print("gamma_from_aeff(80 um2) /W/m:", mp.nstr(2 * mp.pi * N2 / (WAVELENGTH * mp.mpf("80e-12")), 20))
    print("gamma QSMF, SMF /W/km:", mp.nstr(G_Q, 20), mp.nstr(G_S, 20))
    print("0.16 dB/km in Np/m:", mp.nstr(mp.mpf("0.16") * LN10 / 10 / 1000, 20))
    print("0.158 dB/km in Np/m:", mp.nstr(mp.mpf("0.158") * LN10 / 10 / 1000, 20))

    for x in ["0.5", "3.14159265358979323846", "4", "4.5", "8", "20", "100"]:
        print("Si(%s) =" % x, mp.nstr(mp.si(mp.mpf(x)), 25))
    print("Si(pi) by quadrature =", mp.nstr(mp.quad(lambda t: mp.sinc(t), [0, mp.pi]), 25))

    x = 2 * (mp.mpf("0.921") + 1j)
    leff = 50000 * (1 - mp.exp(-x)) / x
    print("L_eff(nu=0.921, lambda*zeta=1, 50 km) =", mp.nstr(leff.real, 30), mp.nstr(leff.imag, 30))
    leff_int = mp.quad(lambda z: mp.exp(-x * z / 50000), [0, 50000])
    print("  same by z-integral:", mp.nstr(leff_int.real, 30), mp.nstr(leff_int.imag, 30))

    for name, segs in [("hybrid", HYBRID), ("smf", SMF)]:
        ls, b2avg, fphi = span_scales(segs)
        z0 = (9 * mp.mpf("32e9")) ** 2 / (8 * fphi ** 2)
        print(name, "f_phi =", mp.nstr(fphi, 20), "zeta0 =", mp.nstr(z0, 20), "ceil(zeta0/pi) =",
              int(mp.ceil(z0 / mp.pi)))
        for zeta in ["0", "0.3", "1", "7.5"]:
            print("  eta(%s) z-integral =" % zeta, mp.nstr(eta_z_integral(mp.mpf(zeta), segs), 25))
        e0 = eta_closed(0, segs)
        for n in [1, 4, 20]:
            delta = mp.mpf("0.01")
            exact = mp.quad(lambda z: mp.log(z0 / z) * phi(z, n) * eta_closed(z, segs), [0, delta / 100, delta])
            q = delta + sum((mp.mpf(1) / j - mp.mpf(1) / n) * mp.sin(2 * j * delta) for j in range(1, n))
            k = delta + sum((mp.mpf(1) / j - mp.mpf(1) / n) * mp.si(2 * j * delta) for j in range(1, n))
            head = e0 / n * (mp.log(z0 / delta) * q + k)
            print("  head N_s=%d delta=0.01: quadrature %s closed form %s rel %s" %
                  (n, mp.nstr(exact, 20), mp.nstr(head, 20), mp.nstr((head - exact) / exact, 5)))

    # toy system: N_s=2, N_ch=3, R_s=1 GBd, hybrid span
    ls, b2avg, fphi = span_scales(HYBRID)
    z0 = (3 * mp.mpf("1e9")) ** 2 / (8 * fphi ** 2)
    delta = z0 / 2
    body = mp.quad(lambda z: mp.log(z0 / z) * phi(z, 2) * eta_closed(z, HYBRID), [delta, z0])
    full = mp.quad(lambda z: mp.log(z0 / z) * phi(z, 2) * eta_closed(z, HYBRID), [0, delta / 100, delta, z0])
    kappa = mp.mpf(128) / 27 * (fphi / mp.mpf("1e9")) ** 2 * 4
    print("toy zeta0 =", mp.nstr(z0, 20), "body[delta,zeta0] =", mp.nstr(body, 25), "I =", mp.nstr(full, 25),
          "gamma =", mp.nstr(kappa * full, 20))

    # ASE for the hybrid span, 60 spans, NF 5 dB, 32 GHz, 1550 nm
    h = mp.mpf("6.62607015e-34")
    c = mp.mpf(299792458)
    loss = sum(s["a"] * s["l"] for s in HYBRID)
    ase = 60 * mp.power(10, mp.mpf("0.5")) * h * c / mp.mpf("1550e-9") * (mp.exp(loss) - 1) * mp.mpf("32e9")
    print("ASE hybrid 60 spans W =", mp.nstr(ase, 20))


if __name__ == "__main__":
    main()
