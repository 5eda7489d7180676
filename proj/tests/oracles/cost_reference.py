"""Reference values for the cost model tests, computed straight from the
parameter table with exact rationals."""

from fractions import Fraction as F
import math

COST_PER_H = F("19.42")
CO2_PER_T = F(5)

# mode: sloping, g/km, km/h, eur/km, setup min
MODES = {
    "walk": (F("1.1"), F(0), F(5), F(0), F(0)),
    "bike": (F("1.3"), F(0), F(16), F(0), F(2)),
    "car1": (F("1.3"), F("200.9"), F(30), F("0.188"), F(10)),
    "car2": (F("1.3"), F("42.7"), F(30), F("0.094"), F(10)),
    "pt": (F("1.5"), F(0), F(20), F(0), F(5)),
    "taxi": (F("1.3"), F("200.9"), F(30), F("1.2"), F(5)),
}


def leg(aerial, mode, time_only=False):
    s, g, v, c, setup = MODES[mode]
    d = aerial * s
    hours = d / v + setup / 60
    parts = (d * c, hours * COST_PER_H, d * g / 10**6 * CO2_PER_T)
    return parts[1] if time_only else sum(parts)


def dist(a, b):
    return F(math.hypot(a[0] - b[0], a[1] - b[1]))


def minutes(aerial, mode):
    s, _, v, _, setup = MODES[mode]
    return aerial * s / v * 60 + setup


depots = [(0, 0), (6, 8)]
tasks = [((3, 4), 540, 60), ((9, 4), 660, 30)]
stops = [depots[0]] + [t[0] for t in tasks] + [depots[1]]
legs = [dist(stops[i], stops[i + 1]) for i in range(len(stops) - 1)]

print("legs", [float(x) for x in legs])
for m in MODES:
    print(m, "%.9f" % float(sum(leg(x, m) for x in legs)),
          "time-only %.9f" % float(sum(leg(x, m, True) for x in legs)))

for m in ("car1", "pt", "bike", "walk"):
    start = tasks[0][1] - minutes(legs[0], m)
    ok = True
    dep = tasks[0][1] + tasks[0][2]
    arr = dep + minutes(legs[1], m)
    ok = arr <= tasks[1][1]
    end = tasks[1][1] + tasks[1][2] + minutes(legs[2], m)
    print("schedule", m, "%.9f" % float(start), "%.9f" % float(end), ok)

base = min(sum(leg(x, m) for x in legs) for m in ("pt", "bike", "taxi"))
for m in ("car1", "car2"):
    print("savings", m, "%.9f" % float(base - sum(leg(x, m) for x in legs)))
print("leg10 car1 %.9f walk1 %.9f bike0 %.9f" % (float(leg(10, "car1")), float(leg(1, "walk")), float(leg(0, "bike"))))
