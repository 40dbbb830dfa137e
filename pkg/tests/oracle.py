"""Independent reference implementations the test suite checks against.

Everything here is deliberately structured unlike the package: scalar
arithmetic, explicit loops, no PhotonState, no shared helpers.  The box
recursion unrolls the nested cycles by hand; the probed-box walker
enumerates every collapse branch of the passage tree.  Agreement
between these and the engine is what the equivalence tests assert.
"""

from __future__ import annotations

import math


def _rot(h: complex, v: complex, theta: float) -> tuple[complex, complex]:
    c, s = math.cos(theta), math.sin(theta)
    return h * c - v * s, h * s + v * c


def box_transfer(m: int, n: int, blocked: bool) -> tuple[complex, complex, float, float]:
    """Unit-H input -> (a_h, a_v, p_d3, p_d4) for one chained-Zeno box.

    Per outer cycle: rotate by pi/2m, hand the V component to the inner
    loop.  Per inner cycle: rotate by pi/2n; the H component goes out to
    the channel, where a block absorbs it (D4) and an open channel
    returns it unchanged.  At the inner exit any remaining H is absorbed
    (D3) and the V survivor rejoins the outer state.
    """
    tm = math.pi / (2.0 * m)
    tn = math.pi / (2.0 * n)
    h, v = complex(1.0), complex(0.0)
    p_d3 = 0.0
    p_d4 = 0.0
    for _ in range(m):
        h, v = _rot(h, v, tm)
        hi, vi = complex(0.0), v
        for _ in range(n):
            hi, vi = _rot(hi, vi, tn)
            if blocked:
                p_d4 += abs(hi) ** 2
                hi = complex(0.0)
        p_d3 += abs(hi) ** 2
        v = vi
    return h, v, p_d3, p_d4


def round_probs(bob_bit: int, charlie_bit: int, m: int, n: int) -> dict[str, float]:
    """Terminal probabilities of one round from two box transfers.

    Michelson recombination for unit-input arm transfers beta (arm B)
    and gamma (arm C): exit1 = (beta - gamma)/2 and exit2 =
    i(beta + gamma)/2 per polarization.  Guard-detector masses carry
    the 1/2 arm weight from the first beamsplitter pass.
    """
    bh, bv, b3, b4 = box_transfer(m, n, blocked=(bob_bit == 1))
    ch, cv, c3, c4 = box_transfer(m, n, blocked=(charlie_bit == 0))
    d1 = abs((bh - ch) / 2.0) ** 2 + abs((bv - cv) / 2.0) ** 2
    d2 = abs((bh + ch) / 2.0) ** 2 + abs((bv + cv) / 2.0) ** 2
    return {
        "D1": d1,
        "D2": d2,
        "D3_B": b3 / 2.0,
        "D3_C": c3 / 2.0,
        "D4_B": b4 / 2.0,
        "D4_C": c4 / 2.0,
    }


def probed_box_branches(
    m: int, n: int, blocked: bool
) -> tuple[complex, complex, dict[tuple[bool, str], float]]:
    """Exact probed-box masses by walking every collapse branch.

    A presence probe interrogates the channel at each of the m*n
    passages, splitting the evolution in two: found (collapse onto the
    channel, everything else zeroed) or not found (the channel component
    projected out).  The projections are orthogonal, so walking the full
    binary tree with unnormalized amplitudes partitions the total
    probability exactly.  Absorptions pay out at the moment they happen
    under the branch's current fired flag.

    Returns (survivor_h, survivor_v, masses): the never-fired branch's
    final outer amplitudes, and a map (ever_fired, outcome) -> mass for
    outcome in H / V / D3 / D4.  Cost 2**(m*n) leaves; keep m*n small.
    """
    tm = math.pi / (2.0 * m)
    tn = math.pi / (2.0 * n)
    events: list[str] = []
    for _ in range(m):
        events.append("enter")
        for _ in range(n):
            events += ["head", "probe", "tail"]
        events.append("exit")

    masses = {(f, o): 0.0 for f in (False, True) for o in ("H", "V", "D3", "D4")}
    spine = [complex(0.0), complex(0.0)]

    def walk(oh, ov, ih, iv, ch, i, fired):
        while i < len(events):
            ev = events[i]
            i += 1
            if ev == "enter":
                oh, ov = _rot(oh, ov, tm)
                iv, ov = ov, complex(0.0)
            elif ev == "head":
                ih, iv = _rot(ih, iv, tn)
                ch, ih = ih, complex(0.0)
            elif ev == "probe":
                if ch != 0:
                    walk(0j, 0j, 0j, 0j, ch, i, True)
                    ch = complex(0.0)
            elif ev == "tail":
                if blocked:
                    masses[(fired, "D4")] += abs(ch) ** 2
                    ch = complex(0.0)
                else:
                    ih, ch = ch, complex(0.0)
            else:  # exit
                masses[(fired, "D3")] += abs(ih) ** 2
                ih = complex(0.0)
                ov, iv = iv, complex(0.0)
        masses[(fired, "H")] += abs(oh) ** 2
        masses[(fired, "V")] += abs(ov) ** 2
        if not fired:
            spine[0], spine[1] = oh, ov

    walk(complex(1.0), 0j, 0j, 0j, 0j, 0, False)
    return spine[0], spine[1], masses
