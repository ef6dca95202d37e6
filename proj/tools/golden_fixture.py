#!/usr/bin/env python3
"""Independent evaluation of the 3-site fixture for the physics regression.

Recomputes, cell by cell, the single-slot link physics of configs/fixture3.cfg
for every joint power assignment and writes the table the acceptance binary
compares against. Nothing here imports the C++ code.

    python3 tools/golden_fixture.py > tests/acceptance/fixture3_golden.csv
"""

import itertools
import math

C = 299792458.0
FC = 2.6e9
TX_GAIN = 10 ** (17 / 10)
RX_GAIN = 1.0
BACKLOBE = 10 ** (-25 / 10)
BANDWIDTH = 10e6
NOISE_W = 10 ** (-125 / 10)
P_MAX = 15.2
DELTA = 2.0
KAPPA = 4
BORESIGHTS = (30.0, 150.0, 270.0)

SITES = [(0.0, 0.0, 25.0), (500.0, 0.0, 25.0), (250.0, 433.013, 25.0)]
USERS = [(86.603, 50.0, 1.5), (361.436, 80.0, 1.5), (250.0, 213.013, 1.5)]

LEVELS = [P_MAX - DELTA + i * DELTA / (KAPPA - 1) for i in range(KAPPA)]
LEVELS[-1] = P_MAX


def in_arc(site, sector, user):
    az = math.degrees(math.atan2(user[1] - site[1], user[0] - site[0]))
    d = math.fmod(az - BORESIGHTS[sector], 360.0)
    if d <= -180.0:
        d += 360.0
    if d > 180.0:
        d -= 360.0
    return abs(d) <= 60.0


def gain(site, sector, user):
    d = math.dist(site, user)
    tx = TX_GAIN if in_arc(site, sector, user) else TX_GAIN * BACKLOBE
    return tx * C / (4 * math.pi * FC * d) * RX_GAIN


def main():
    p_ref = 10 ** (P_MAX / 10)
    assoc = []
    for u in USERS:
        best, arg = -1.0, None
        for b, site in enumerate(SITES):
            for s in range(3):
                r = p_ref * gain(site, s, u)
                if r > best:
                    best, arg = r, (b, s)
        assoc.append(arg)

    # one user per sector, lowest id first
    scheduled = {}
    for u, (b, s) in enumerate(assoc):
        scheduled.setdefault((b, s), u)
    links = sorted((b, s, u) for (b, s), u in scheduled.items())
    active = sorted({b for b, _, _ in links})

    def rates(power):
        out = []
        for b, s, u in links:
            sig = 10 ** (power[b] / 10) * gain(SITES[b], s, USERS[u])
            itf = 0.0
            for b2 in active:
                if b2 == b:
                    continue
                g = sum(gain(SITES[b2], s2, USERS[u]) for (bb, s2, _) in links if bb == b2)
                itf += 10 ** (power[b2] / 10) * g
            sinr = sig / (itf + NOISE_W)
            out.append((sinr, BANDWIDTH * math.log2(1 + sinr)))
        return out

    def per_bs(rs):
        c = {b: 0.0 for b in active}
        for (b, _, _), (_, r) in zip(links, rs):
            c[b] += r
        return c

    c_max = per_bs(rates({b: P_MAX for b in active}))

    cols = ["action"]
    cols += [f"sinr{i}" for i in range(len(links))]
    cols += [f"rate{i}" for i in range(len(links))]
    cols += [f"ee{b}" for b in active]
    cols += ["network_ee", "sum_delta_c"]
    print(",".join(cols))
    for action in itertools.product(range(KAPPA), repeat=len(active)):
        power = {b: LEVELS[a] for b, a in zip(active, action)}
        rs = rates(power)
        c = per_bs(rs)
        ee = {b: (c[b] / 1e6) / power[b] for b in active}
        net = sum(ee.values()) / len(active)
        sdc = sum(c_max[b] - c[b] for b in active)
        row = [" ".join(map(str, action))]
        row += [repr(s) for s, _ in rs]
        row += [repr(r) for _, r in rs]
        row += [repr(ee[b]) for b in active]
        row += [repr(net), repr(sdc)]
        print(",".join(row))


if __name__ == "__main__":
    main()
